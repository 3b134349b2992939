#include <doctest.h>

#include <random>
#include <sstream>

#include "keyclust/preprocess.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace keyclust;

namespace {

const TokenCleaner& default_cleaner() {
    static const TokenCleaner cleaner(CleaningConfig::defaults());
    return cleaner;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string without_spaces(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

Document doc_with(const std::string& body) {
    Document d;
    d.doc_id = "d1";
    d.title = "t";
    d.body = body;
    d.corpus_label = "lbl";
    return d;
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("sentence boundaries") {
    CHECK(segment_sentences("A b. C d.") == std::vector<std::string>{"A b.", "C d."});
    CHECK(segment_sentences("Rate was 2.5 per day. Next.") ==
          std::vector<std::string>{"Rate was 2.5 per day.", "Next."});
    CHECK(segment_sentences("").empty());
    CHECK(segment_sentences("   \n\n  ").empty());
}

TEST_CASE("sentence guards and separators") {
    CHECK(segment_sentences("See Smith et al. For details.").size() == 1);
    CHECK(segment_sentences("As shown by e.g. Jones. Then more.").size() == 2);
    CHECK(segment_sentences("Work by J. Smith shows it. Done.") ==
          std::vector<std::string>{"Work by J. Smith shows it.", "Done."});
    CHECK(segment_sentences("Is it? Yes! Fine.").size() == 3);
    CHECK(segment_sentences("He said \"stop.\" Then left.") ==
          std::vector<std::string>{"He said \"stop.\"", "Then left."});
    CHECK(segment_sentences("first part\n\nsecond part") == std::vector<std::string>{"first part", "second part"});
    CHECK(segment_sentences("lower. case start") == std::vector<std::string>{"lower. case start"});
    CHECK(segment_sentences("Spread\n  over   lines. Next") == std::vector<std::string>{"Spread over lines.", "Next"});
}

TEST_CASE("segmentation keeps all non-whitespace content") {
    std::mt19937_64 rng(11);
    const synth::Topic topic(1, 30), general(40, 30);
    for (int trial = 0; trial < 50; ++trial) {
        std::string body;
        for (int s = 0; s < 1 + trial % 9; ++s) {
            body += synth::sentence(rng, topic, general, 4, 2, {"2.5", "[3]"});
            body += (rng() % 4 == 0) ? "\n\n" : "  ";
        }
        const auto sentences = segment_sentences(body);
        CHECK(without_spaces(join(sentences)) == without_spaces(body));
    }
}

TEST_CASE("chunk sizes") {
    CHECK(chunk_sizes(6) == std::vector<std::size_t>{3, 3});
    CHECK(chunk_sizes(7) == std::vector<std::size_t>{3, 2, 2});
    CHECK(chunk_sizes(1) == std::vector<std::size_t>{1});
    CHECK(chunk_sizes(2) == std::vector<std::size_t>{2});
    CHECK(chunk_sizes(4) == std::vector<std::size_t>{2, 2});
    CHECK(chunk_sizes(5) == std::vector<std::size_t>{3, 2});
    CHECK(chunk_sizes(0).empty());
    for (std::size_t n = 2; n < 60; ++n) {
        std::size_t total = 0;
        for (auto s : chunk_sizes(n)) {
            CHECK(s >= 2);
            CHECK(s <= 3);
            total += s;
        }
        CHECK(total == n);
    }
}

TEST_CASE("make_chunks covers every sentence in order") {
    std::vector<std::string> sentences;
    for (int i = 0; i < 7; ++i) sentences.push_back("Sentence " + std::to_string(i) + ".");
    const auto chunks = make_chunks(doc_with("unused"), sentences);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].chunk_id == "d1#0000");
    CHECK(chunks[2].chunk_id == "d1#0002");
    CHECK(chunks[0].raw_text == "Sentence 0. Sentence 1. Sentence 2.");
    CHECK(chunks[2].raw_text == "Sentence 5. Sentence 6.");
    CHECK(chunks[1].sentence_count == 2);
    CHECK(chunks[1].doc_id == "d1");
    CHECK(chunks[1].corpus_label == "lbl");
    CHECK(chunks[1].tokens.empty());
}

TEST_CASE("token cleaning examples") {
    CHECK(default_cleaner().clean("The vaccine was tested in 2020 (https://x.y) [12].") ==
          std::vector<std::string>{"vaccine", "tested"});
    CHECK(default_cleaner().clean("It is the of.").empty());
    CHECK(default_cleaner().clean("Codon adaptation predicts the best codon") ==
          std::vector<std::string>{"codon", "adaptation", "predicts", "best", "codon"});
}

TEST_CASE("removal patterns and splitting") {
    const auto& c = default_cleaner();
    CHECK(c.clean("Values 3.5% and 1,200 on 12/03/2020 at 10:30") == std::vector<std::string>{"values"});
    CHECK(c.clean("see www.example.org or doi:10.1/abc and http://a.b/c") == std::vector<std::string>{"see"});
    CHECK(c.clean("as reported [1, 2] and [3-5] and [4]") == std::vector<std::string>{"reported"});
    CHECK(c.clean("shown in Fig. 3, Figure 2 and Table S1") == std::vector<std::string>{"shown", "s1"});
    CHECK(c.clean("SARS-CoV-2 spike/ACE2 binding") ==
          std::vector<std::string>{"sars-cov-2", "spike", "ace2", "binding"});
    CHECK(c.clean("x y z ab") == std::vector<std::string>{"ab"});
    CHECK(c.clean("three doses with several others") == std::vector<std::string>{"doses", "others"});
}

TEST_CASE("POS tags") {
    CHECK(tag_token("they") == PosTag::Pronoun);
    CHECK(tag_token("the") == PosTag::Determiner);
    CHECK(tag_token("although") == PosTag::Conjunction);
    CHECK(tag_token("between") == PosTag::Adposition);
    CHECK(tag_token("seven") == PosTag::Numeral);
    CHECK(tag_token("1.5") == PosTag::Numeral);
    CHECK(tag_token("vaccine") == PosTag::Open);
    CHECK(parse_pos_tag("DET") == PosTag::Determiner);
    CHECK_FALSE(parse_pos_tag("VERB").has_value());
}

TEST_CASE("output tokens satisfy every filter and cleaning is idempotent") {
    std::mt19937_64 rng(5);
    const synth::Topic topic(2, 40), general(40, 40);
    const auto& c = default_cleaner();
    const auto stop = c.config().stoplist;
    for (int trial = 0; trial < 100; ++trial) {
        const std::string text = synth::sentence(rng, topic, general, 5, 3, {"12", "[4]", "Fig.", "They", "2.5%"});
        const auto tokens = c.clean(text);
        for (const auto& t : tokens) {
            CHECK(c.keeps(t));
            CHECK(stop.count(t) == 0);
            CHECK(std::none_of(t.begin(), t.end(), [](char ch) { return ch >= 'A' && ch <= 'Z'; }));
        }
        CHECK(c.clean(join(tokens)) == tokens);

        Chunk chunk;
        chunk.raw_text = text;
        const auto once = clean_tokens(chunk, c);
        CHECK(clean_tokens(once, c) == once);
        CHECK(c.clean(text) == tokens);
    }
}

TEST_CASE("configuration") {
    SUBCASE("bad regex") {
        auto cfg = CleaningConfig::defaults();
        cfg.removal_patterns.push_back("([unclosed");
        CHECK_THROWS_AS(TokenCleaner{cfg}, InvalidPattern);
    }
    SUBCASE("uppercase stop word") {
        auto cfg = CleaningConfig::defaults();
        cfg.stoplist.insert("Vaccine");
        CHECK_THROWS_AS(TokenCleaner{cfg}, InvalidConfig);
    }
    SUBCASE("json overlay") {
        TempDir dir;
        dir.write("stop.txt", "alpha\n\nbeta\n");
        dir.write("cfg.json", R"({"stoplist_file":"stop.txt","stoplist":["Gamma"],"disallowed_pos":["PRON"],
                                  "min_token_length":3,"removal_patterns":["z+"]})");
        const auto cfg = CleaningConfig::from_file(dir / "cfg.json");
        CHECK(cfg.stoplist == std::set<std::string>{"alpha", "beta", "gamma"});
        CHECK(cfg.disallowed_pos == std::set<PosTag>{PosTag::Pronoun});
        CHECK(cfg.min_token_length == 3);
        const TokenCleaner cleaner(cfg);
        CHECK(cleaner.clean("alpha the zzz they delta ab 420") == std::vector<std::string>{"the", "delta", "420"});
    }
    SUBCASE("bad json") {
        CHECK_THROWS_AS(CleaningConfig::from_json(nlohmann::json::array()), InvalidConfig);
        CHECK_THROWS_AS(CleaningConfig::from_json({{"disallowed_pos", {"NOUNISH"}}}), InvalidConfig);
        CHECK_THROWS_AS(CleaningConfig::from_json({{"min_token_length", "x"}}), InvalidConfig);
    }
    SUBCASE("shipped stoplist") {
        const auto stop = CleaningConfig::default_stoplist();
        CHECK(stop.size() == 179);
        CHECK(stop.count("the") == 1);
        CHECK(stop.count("best") == 0);
    }
}

TEST_CASE("preprocess_document") {
    const auto doc = doc_with("Vaccine trials began. Doses were given.\n\nResults were strong. Efficacy held. "
                              "Antibodies rose. Side effects were mild. Follow up continues.");
    const auto chunks = preprocess_document(doc, default_cleaner());
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].sentence_count == 3);
    CHECK(chunks[0].tokens == std::vector<std::string>{"vaccine", "trials", "began", "doses", "given", "results",
                                                        "strong"});
    std::size_t sentences = 0;
    for (const auto& c : chunks) sentences += c.sentence_count;
    CHECK(sentences == segment_sentences(doc.body).size());
    CHECK(preprocess_document(doc, default_cleaner()) == chunks);
}

}  // TEST_SUITE
