#include "keyclust/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "keyclust/errors.hpp"

namespace keyclust {

namespace {

constexpr char kDefaultStoplist[] =
#include "keyclust/default_stoplist.inc"
    ;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), to_lower);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

const std::unordered_set<std::string_view>& abbreviations() {
    static const std::unordered_set<std::string_view> words = {
        "al.",    "e.g.",  "i.e.",   "etc.",  "fig.",  "figs.", "eq.",   "eqs.",  "ref.",  "refs.", "dr.",
        "mr.",    "mrs.",  "ms.",    "prof.", "vs.",   "no.",   "nos.",  "vol.",  "pp.",   "ca.",   "cf.",
        "approx.", "st.",  "jr.",    "sr.",   "inc.",  "ltd.",  "co.",   "dept.", "univ.", "sect.", "tab.",
        "u.s.",   "u.k.",  "resp.",  "viz.",  "spp.",  "sp.",   "var.",  "min.",  "max.",  "est.",  "suppl."};
    return words;
}

bool is_sentence_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// Word ending at `end` (inclusive), without leading opening punctuation.
std::string_view word_before(std::string_view text, std::size_t end) {
    std::size_t start = end;
    while (start > 0 && !is_space(text[start - 1])) --start;
    std::string_view word = text.substr(start, end - start + 1);
    while (!word.empty() && (word.front() == '(' || word.front() == '[' || word.front() == '"' ||
                             word.front() == '\'')) {
        word.remove_prefix(1);
    }
    return word;
}

bool guarded_period(std::string_view text, std::size_t pos) {
    if (pos > 0 && pos + 1 < text.size() && is_digit(text[pos - 1]) && is_digit(text[pos + 1])) {
        return true;
    }
    const std::string_view word = word_before(text, pos);
    if (word.size() == 2 && is_upper(word[0])) {
        return true;
    }
    return abbreviations().count(lowercase(word)) > 0;
}

bool starts_sentence(std::string_view text, std::size_t pos) {
    if (pos >= text.size()) return false;
    if (is_upper(text[pos])) return true;
    const char c = text[pos];
    return (c == '"' || c == '\'' || c == '(' || c == '[') && pos + 1 < text.size() && is_upper(text[pos + 1]);
}

std::vector<std::string> split_paragraphs(std::string_view body) {
    std::vector<std::string> paragraphs;
    std::string current;
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '\n') {
            std::size_t j = i + 1;
            while (j < body.size() && is_space(body[j]) && body[j] != '\n') ++j;
            if (j < body.size() && body[j] == '\n') {
                paragraphs.push_back(std::move(current));
                current.clear();
                i = j + 1;
                continue;
            }
        }
        current.push_back(body[i]);
        ++i;
    }
    paragraphs.push_back(std::move(current));
    return paragraphs;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : trim(text)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

void segment_paragraph(std::string_view para, std::vector<std::string>& out) {
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < para.size()) {
        if (!is_sentence_terminal(para[i])) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < para.size() && (is_sentence_terminal(para[j]) || is_closing(para[j]))) ++j;
        const bool boundary = j < para.size() && para[j] == ' ' && starts_sentence(para, j + 1) &&
                              !(para[i] == '.' && j == i + 1 && guarded_period(para, i));
        if (boundary) {
            out.emplace_back(para.substr(start, j - start));
            start = j + 1;
        }
        i = j;
    }
    if (start < para.size()) {
        out.emplace_back(para.substr(start));
    }
}

struct Lexicon {
    std::unordered_map<std::string_view, PosTag> words;

    Lexicon() {
        for (auto w : {"i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves", "you", "your",
                       "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
                       "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "who",
                       "whom", "whose", "which", "what", "whatever", "whichever", "whoever", "anyone", "anybody",
                       "anything", "everyone", "everybody", "everything", "someone", "somebody", "something",
                       "nobody", "nothing", "none", "one's", "oneself"}) {
            words.emplace(w, PosTag::Pronoun);
        }
        for (auto w : {"a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every", "no",
                       "all", "both", "either", "neither", "another", "such", "much", "many", "several", "few"}) {
            words.emplace(w, PosTag::Determiner);
        }
        for (auto w : {"and", "or", "but", "nor", "yet", "so", "although", "though", "because", "since",
                       "unless", "whereas", "while", "whether", "if", "than", "whilst", "hence", "thus"}) {
            words.emplace(w, PosTag::Conjunction);
        }
        for (auto w : {"in", "on", "at", "by", "with", "from", "of", "to", "into", "onto", "upon", "over",
                       "under", "between", "among", "amongst", "through", "throughout", "during", "before",
                       "after", "above", "below", "against", "within", "without", "across", "along", "around",
                       "toward", "towards", "via", "per", "about", "beyond", "despite", "except", "for",
                       "behind", "beneath", "beside", "besides", "near", "off", "out", "up", "down"}) {
            words.emplace(w, PosTag::Adposition);
        }
        for (auto w : {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                       "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
                       "eighteen", "nineteen", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
                       "eighty", "ninety", "hundred", "thousand", "million", "billion", "dozen"}) {
            words.emplace(w, PosTag::Numeral);
        }
    }
};

bool looks_numeric(std::string_view token) {
    bool has_digit = false;
    for (char c : token) {
        if (is_digit(c)) {
            has_digit = true;
        } else if (c != '.' && c != ',' && c != '-' && c != '/' && c != ':' && c != '%') {
            return false;
        }
    }
    return has_digit;
}

bool is_token_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || is_digit(c) || c == '-' || u >= 0x80;
}

std::string_view strip_edge_punctuation(std::string_view s) {
    constexpr std::string_view kEdge = "\"'(),.;:!?<>{}*";
    while (!s.empty() && kEdge.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
    while (!s.empty() && kEdge.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view to_string(PosTag tag) {
    switch (tag) {
        case PosTag::Pronoun: return "PRON";
        case PosTag::Determiner: return "DET";
        case PosTag::Conjunction: return "CONJ";
        case PosTag::Adposition: return "ADP";
        case PosTag::Numeral: return "NUM";
        case PosTag::Open: return "OPEN";
    }
    return "OPEN";
}

std::optional<PosTag> parse_pos_tag(std::string_view name) {
    for (auto tag : {PosTag::Pronoun, PosTag::Determiner, PosTag::Conjunction, PosTag::Adposition,
                     PosTag::Numeral, PosTag::Open}) {
        if (to_string(tag) == name) return tag;
    }
    return std::nullopt;
}

PosTag tag_token(std::string_view token) {
    static const Lexicon lexicon;
    if (looks_numeric(token)) return PosTag::Numeral;
    auto it = lexicon.words.find(token);
    return it == lexicon.words.end() ? PosTag::Open : it->second;
}

std::vector<std::string> CleaningConfig::default_patterns() {
    return {
        R"([0-9]+([.,:/-][0-9]+)*%?)",                 // numbers, dates, ratios, percentages
        R"((https?://|www\.|doi:).*)",                  // URLs and DOIs
        R"(\[[0-9]+([^0-9a-z\]]+[0-9]+)*\])",           // citation markers: [12], [1,2], [3-5]
        R"((figs?|figures?|tables?|eqs?|eqns?)[0-9]*)",  // figure and table references
    };
}

std::set<std::string> CleaningConfig::default_stoplist() {
    std::set<std::string> words;
    std::string_view all(kDefaultStoplist);
    while (!all.empty()) {
        auto nl = all.find('\n');
        auto line = trim(all.substr(0, nl));
        if (!line.empty()) words.insert(lowercase(line));
        if (nl == std::string_view::npos) break;
        all.remove_prefix(nl + 1);
    }
    return words;
}

CleaningConfig CleaningConfig::defaults() {
    CleaningConfig c;
    c.stoplist = default_stoplist();
    c.removal_patterns = default_patterns();
    c.disallowed_pos = {PosTag::Pronoun, PosTag::Determiner, PosTag::Conjunction, PosTag::Numeral};
    c.min_token_length = 2;
    return c;
}

std::vector<std::string> read_word_list(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot read word list " + file.string());
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

CleaningConfig CleaningConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) {
        throw InvalidConfig("cleaning config must be a JSON object");
    }
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };

    CleaningConfig c = defaults();
    try {
        if (j.contains("stoplist_file")) {
            c.stoplist.clear();
            for (auto& w : read_word_list(resolve(j.at("stoplist_file").get<std::string>()))) {
                c.stoplist.insert(lowercase(w));
            }
        }
        if (j.contains("stoplist")) {
            for (const auto& w : j.at("stoplist")) c.stoplist.insert(lowercase(w.get<std::string>()));
        }
        if (j.contains("removal_patterns")) {
            c.removal_patterns = j.at("removal_patterns").get<std::vector<std::string>>();
        }
        if (j.contains("patterns_file")) {
            for (auto& p : read_word_list(resolve(j.at("patterns_file").get<std::string>()))) {
                c.removal_patterns.push_back(std::move(p));
            }
        }
        if (j.contains("disallowed_pos")) {
            c.disallowed_pos.clear();
            for (const auto& name : j.at("disallowed_pos")) {
                auto tag = parse_pos_tag(name.get<std::string>());
                if (!tag) throw InvalidConfig("unknown POS tag '" + name.get<std::string>() + "'");
                c.disallowed_pos.insert(*tag);
            }
        }
        if (j.contains("min_token_length")) {
            c.min_token_length = j.at("min_token_length").get<std::size_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("bad cleaning config: ") + e.what());
    }
    return c;
}

CleaningConfig CleaningConfig::from_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot read cleaning config " + file.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidConfig("malformed cleaning config " + file.string() + ": " + e.what());
    }
    return from_json(j, file.parent_path());
}

TokenCleaner::TokenCleaner(CleaningConfig config) : config_(std::move(config)) {
    for (const auto& word : config_.stoplist) {
        if (word != lowercase(word)) {
            throw InvalidConfig("stoplist entry is not lowercase: '" + word + "'");
        }
    }
    patterns_.reserve(config_.removal_patterns.size());
    for (const auto& p : config_.removal_patterns) {
        try {
            patterns_.emplace_back(p, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw InvalidPattern("removal pattern does not compile: '" + p + "': " + e.what());
        }
    }
}

bool TokenCleaner::matches_pattern(const std::string& token) const {
    return std::any_of(patterns_.begin(), patterns_.end(),
                       [&](const std::regex& re) { return std::regex_match(token, re); });
}

bool TokenCleaner::keeps(std::string_view token) const {
    if (token.empty() || token.size() < config_.min_token_length) return false;
    const std::string t(token);
    if (config_.stoplist.count(t) > 0) return false;
    if (config_.disallowed_pos.count(tag_token(t)) > 0) return false;
    return !matches_pattern(t);
}

std::vector<std::string> TokenCleaner::clean(std::string_view text) const {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        if (j == i) break;
        const std::string core = lowercase(strip_edge_punctuation(text.substr(i, j - i)));
        i = j;
        if (core.empty() || matches_pattern(core)) continue;

        std::size_t a = 0;
        while (a < core.size()) {
            while (a < core.size() && !is_token_char(core[a])) ++a;
            std::size_t b = a;
            while (b < core.size() && is_token_char(core[b])) ++b;
            std::string_view piece = std::string_view(core).substr(a, b - a);
            while (!piece.empty() && piece.front() == '-') piece.remove_prefix(1);
            while (!piece.empty() && piece.back() == '-') piece.remove_suffix(1);
            if (keeps(piece)) tokens.emplace_back(piece);
            a = b;
        }
    }
    return tokens;
}

std::vector<std::string> segment_sentences(std::string_view body) {
    std::vector<std::string> sentences;
    for (const auto& para : split_paragraphs(body)) {
        const std::string normalized = collapse_whitespace(para);
        if (!normalized.empty()) segment_paragraph(normalized, sentences);
    }
    return sentences;
}

std::vector<std::size_t> chunk_sizes(std::size_t sentence_count, ChunkPolicy policy) {
    const std::size_t group = std::max<std::size_t>(policy.sentences_per_chunk, 1);
    std::vector<std::size_t> sizes(sentence_count / group, group);
    const std::size_t rest = sentence_count % group;
    if (rest > 0) sizes.push_back(rest);
    if (rest == 1 && sizes.size() > 1 && group >= 3) {
        sizes[sizes.size() - 2] -= 1;
        sizes.back() += 1;
    }
    return sizes;
}

std::vector<Chunk> make_chunks(const Document& doc, std::span<const std::string> sentences, ChunkPolicy policy) {
    std::vector<Chunk> chunks;
    std::size_t next = 0;
    for (std::size_t size : chunk_sizes(sentences.size(), policy)) {
        Chunk c;
        char ordinal[16];
        std::snprintf(ordinal, sizeof ordinal, "#%04zu", chunks.size());
        c.chunk_id = doc.doc_id + ordinal;
        c.doc_id = doc.doc_id;
        c.corpus_label = doc.corpus_label;
        c.sentence_count = size;
        for (std::size_t s = 0; s < size; ++s) {
            if (s > 0) c.raw_text.push_back(' ');
            c.raw_text += sentences[next++];
        }
        chunks.push_back(std::move(c));
    }
    return chunks;
}

Chunk clean_tokens(Chunk chunk, const TokenCleaner& cleaner) {
    chunk.tokens = cleaner.clean(chunk.raw_text);
    return chunk;
}

Chunk clean_tokens(Chunk chunk, const CleaningConfig& config) {
    return clean_tokens(std::move(chunk), TokenCleaner(config));
}

std::vector<Chunk> preprocess_document(const Document& doc, const TokenCleaner& cleaner, ChunkPolicy policy) {
    const auto sentences = segment_sentences(doc.body);
    auto chunks = make_chunks(doc, sentences, policy);
    for (auto& c : chunks) c.tokens = cleaner.clean(c.raw_text);
    return chunks;
}

}  // namespace keyclust
