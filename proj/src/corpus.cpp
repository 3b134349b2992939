#include "keyclust/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace keyclust {

namespace {

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + file.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string& require_string(const nlohmann::json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(std::string("missing string field '") + field + "'");
    }
    return it->get_ref<const std::string&>();
}

bool all_space(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

Document parse_article(std::string_view json_text, std::string_view corpus_label) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ParseError("article root is not an object");
    }

    Document doc;
    doc.doc_id = require_string(root, "paper_id");
    doc.title = require_string(root, "title");
    doc.corpus_label = std::string(corpus_label);
    if (doc.doc_id.empty()) {
        throw ParseError("empty paper_id");
    }

    auto body = root.find("body_text");
    if (body == root.end() || !body->is_array()) {
        throw ParseError("missing array field 'body_text'");
    }
    for (const auto& para : *body) {
        const std::string* text = nullptr;
        if (para.is_string()) {
            text = &para.get_ref<const std::string&>();
        } else if (para.is_object()) {
            text = &require_string(para, "text");
        } else {
            throw ParseError("body_text entries must be strings or objects with 'text'");
        }
        if (all_space(*text)) {
            continue;
        }
        if (!doc.body.empty()) {
            doc.body += "\n\n";
        }
        doc.body += *text;
    }
    if (doc.body.empty()) {
        throw ParseError("article '" + doc.doc_id + "' has an empty body");
    }
    return doc;
}

LoadReport load_corpus(const std::filesystem::path& dir, std::string_view corpus_label) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw MissingPath("corpus directory not found: " + dir.string());
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    LoadReport report;
    std::unordered_set<std::string> seen;
    for (const auto& file : files) {
        try {
            Document doc = parse_article(read_file(file), corpus_label);
            if (!seen.insert(doc.doc_id).second) {
                throw ParseError("duplicate paper_id '" + doc.doc_id + "'");
            }
            report.documents.push_back(std::move(doc));
        } catch (const ParseError& e) {
            report.failures.push_back({file, e.what()});
        }
    }
    return report;
}

}  // namespace keyclust
