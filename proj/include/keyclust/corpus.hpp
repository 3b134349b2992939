#ifndef KEYCLUST_CORPUS_HPP
#define KEYCLUST_CORPUS_HPP

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyclust/errors.hpp"

namespace keyclust {

/// One scholarly article.
struct Document {
    std::string doc_id;
    std::string title;
    std::string body;
    std::string corpus_label;

    bool operator==(const Document&) const = default;
};

struct LoadFailure {
    std::filesystem::path file;
    std::string message;
};

/// Result of loading a corpus directory. Files that fail to parse are listed
/// in `failures` rather than silently skipped.
struct LoadReport {
    std::vector<Document> documents;
    std::vector<LoadFailure> failures;
};

/// Default number of articles processed per batch.
inline constexpr std::size_t kDefaultBatchSize = 50;

/**
 * Parses one article. The JSON object must carry string fields `paper_id`
 * and `title` and a `body_text` array; each array element is either a
 * paragraph string or an object with a string `text` field. Paragraphs are
 * joined with a blank line.
 *
 * Throws ParseError on malformed JSON, missing fields or an empty body.
 */
Document parse_article(std::string_view json_text, std::string_view corpus_label);

/**
 * Loads every `*.json` file in `dir` (non-recursive) in lexicographic filename
 * order. Throws MissingPath if `dir` is not a directory. Duplicate `paper_id`
 * values are reported as failures for every occurrence after the first.
 */
LoadReport load_corpus(const std::filesystem::path& dir, std::string_view corpus_label);

/// Splits `items` into consecutive batches of `batch_size`; only the last batch
/// may be shorter. Throws InvalidBatchSize when `batch_size` is zero.
template <typename T>
std::vector<std::span<const T>> batches(std::span<const T> items, std::size_t batch_size) {
    if (batch_size == 0) {
        throw InvalidBatchSize("batch size must be at least 1");
    }
    std::vector<std::span<const T>> out;
    out.reserve((items.size() + batch_size - 1) / batch_size);
    for (std::size_t start = 0; start < items.size(); start += batch_size) {
        out.push_back(items.subspan(start, std::min(batch_size, items.size() - start)));
    }
    return out;
}

template <typename T>
std::vector<std::span<const T>> batches(const std::vector<T>& items, std::size_t batch_size) {
    return batches(std::span<const T>(items), batch_size);
}

}  // namespace keyclust

#endif  // KEYCLUST_CORPUS_HPP
