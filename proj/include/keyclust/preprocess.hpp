#ifndef KEYCLUST_PREPROCESS_HPP
#define KEYCLUST_PREPROCESS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "keyclust/corpus.hpp"

namespace keyclust {

/// A group of consecutive sentences from one document; the unit that gets
/// vectorized and clustered.
struct Chunk {
    std::string chunk_id;
    std::string doc_id;
    std::string corpus_label;
    std::string raw_text;
    std::size_t sentence_count = 0;
    std::vector<std::string> tokens;

    bool operator==(const Chunk&) const = default;
};

/// Coarse part-of-speech classes recognised by the lexicon tagger.
enum class PosTag { Pronoun, Determiner, Conjunction, Adposition, Numeral, Open };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

/// Closed-class lexicon lookup plus a numeral pattern. Unknown words are Open.
PosTag tag_token(std::string_view lowercase_token);

struct CleaningConfig {
    std::set<std::string> stoplist;
    std::vector<std::string> removal_patterns;
    std::set<PosTag> disallowed_pos;
    std::size_t min_token_length = 2;

    /// Shipped English stoplist, the built-in removal patterns (numbers, URLs,
    /// citation markers, figure/table references) and the pronoun,
    /// determiner, conjunction and numeral classes.
    static CleaningConfig defaults();

    static std::vector<std::string> default_patterns();
    static std::set<std::string> default_stoplist();

    /**
     * Overlays a JSON config on the defaults. Recognised keys:
     *   stoplist_file      replaces the stoplist with the file's entries
     *   stoplist           extra stop words appended to the stoplist
     *   removal_patterns   replaces the pattern list
     *   patterns_file      patterns appended from a file
     *   disallowed_pos     replaces the POS set ("PRON", "DET", "CONJ", "ADP", "NUM")
     *   min_token_length
     * Relative file paths resolve against `base_dir`. Throws InvalidConfig.
     */
    static CleaningConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    static CleaningConfig from_file(const std::filesystem::path& file);
};

/// One entry per non-blank line, trimmed. Throws IoError.
std::vector<std::string> read_word_list(const std::filesystem::path& file);

/// A CleaningConfig with its patterns compiled. Throws InvalidPattern.
class TokenCleaner {
public:
    explicit TokenCleaner(CleaningConfig config);

    std::vector<std::string> clean(std::string_view text) const;

    /// True when a lowercase token survives every filter.
    bool keeps(std::string_view token) const;

    const CleaningConfig& config() const { return config_; }

private:
    bool matches_pattern(const std::string& token) const;

    CleaningConfig config_;
    std::vector<std::regex> patterns_;
};

/**
 * Splits text into sentences. Blank lines always end a sentence. Otherwise a
 * boundary is a run of `.`, `!` or `?` (optionally followed by closing quotes
 * or brackets), then whitespace, then an uppercase letter. A period does not
 * end a sentence after a known abbreviation, a single-letter initial, or
 * between digits. Whitespace inside a sentence is collapsed to single spaces.
 */
std::vector<std::string> segment_sentences(std::string_view body);

struct ChunkPolicy {
    std::size_t sentences_per_chunk = 3;
};

/// Greedy groups of `sentences_per_chunk`; a trailing group of one sentence
/// borrows from the previous group (3+1 becomes 2+2).
std::vector<std::size_t> chunk_sizes(std::size_t sentence_count, ChunkPolicy policy = {});

/// Chunk ids are `<doc_id>#<ordinal>` with a zero-padded four digit ordinal.
std::vector<Chunk> make_chunks(const Document& doc, std::span<const std::string> sentences, ChunkPolicy policy = {});

Chunk clean_tokens(Chunk chunk, const TokenCleaner& cleaner);
Chunk clean_tokens(Chunk chunk, const CleaningConfig& config);

/// Segments, chunks and cleans one document.
std::vector<Chunk> preprocess_document(const Document& doc, const TokenCleaner& cleaner, ChunkPolicy policy = {});

}  // namespace keyclust

#endif  // KEYCLUST_PREPROCESS_HPP
