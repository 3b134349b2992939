#include "keyclust/stage_store.hpp"

#include <system_error>

namespace keyclust {

namespace {

constexpr std::string_view kSchemaTag = "keyclust-stage";

StageHeader parse_header(const std::string& line, const std::filesystem::path& file) {
    nlohmann::json head;
    try {
        head = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        throw SchemaMismatch("unreadable stage header in " + file.string());
    }
    if (!head.is_object() || head.value("schema", "") != kSchemaTag) {
        throw SchemaMismatch("not a stage file: " + file.string());
    }
    StageHeader h;
    try {
        h.version = head.at("version").get<int>();
        h.record_type = head.at("record_type").get<std::string>();
        h.record_count = head.at("record_count").get<std::size_t>();
        h.meta = head.value("meta", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch("malformed stage header in " + file.string() + ": " + e.what());
    }
    if (h.version != kStageSchemaVersion) {
        throw SchemaMismatch("unsupported stage version " + std::to_string(h.version) + " in " + file.string());
    }
    return h;
}

}  // namespace

StageWriter::StageWriter(std::filesystem::path target, std::string record_type, nlohmann::json meta)
    : target_(std::move(target)),
      body_path_(target_.string() + ".body.tmp"),
      record_type_(std::move(record_type)),
      meta_(std::move(meta)) {
    std::error_code ec;
    std::filesystem::create_directories(target_.parent_path(), ec);
    body_.open(body_path_, std::ios::binary | std::ios::trunc);
    if (!body_) {
        throw IoError("cannot write " + body_path_.string());
    }
}

StageWriter::StageWriter(StageWriter&& other) noexcept
    : target_(std::move(other.target_)),
      body_path_(std::move(other.body_path_)),
      record_type_(std::move(other.record_type_)),
      meta_(std::move(other.meta_)),
      body_(std::move(other.body_)),
      count_(other.count_),
      committed_(other.committed_) {
    other.committed_ = true;
}

StageWriter::~StageWriter() {
    if (!committed_ && !body_path_.empty()) {
        body_.close();
        std::error_code ec;
        std::filesystem::remove(body_path_, ec);
    }
}

void StageWriter::write_line(const nlohmann::json& record) {
    if (committed_) {
        throw IoError("stage already committed: " + target_.string());
    }
    body_ << record.dump() << '\n';
    if (!body_) {
        throw IoError("write failed: " + body_path_.string());
    }
    ++count_;
}

void StageWriter::commit() {
    if (committed_) {
        return;
    }
    body_.close();

    nlohmann::json head = {{"schema", kSchemaTag},
                           {"version", kStageSchemaVersion},
                           {"record_type", record_type_},
                           {"record_count", count_},
                           {"meta", meta_}};
    const auto tmp = std::filesystem::path(target_.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        std::ifstream body(body_path_, std::ios::binary);
        if (!out || !body) {
            throw IoError("cannot finalize " + target_.string());
        }
        out << head.dump() << '\n';
        if (count_ > 0) {
            out << body.rdbuf();
        }
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target_, ec);
    if (ec) {
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
    std::filesystem::remove(body_path_, ec);
    committed_ = true;
}

StageStore::StageStore(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path StageStore::stage_path(std::string_view stage) const {
    return root_ / (std::string(stage) + ".jsonl");
}

bool StageStore::exists(std::string_view stage) const {
    std::error_code ec;
    return std::filesystem::is_regular_file(stage_path(stage), ec);
}

StageHeader StageStore::header(std::string_view stage) const {
    const auto file = stage_path(stage);
    if (!exists(stage)) {
        throw MissingStage("missing stage '" + std::string(stage) + "' (" + file.string() + ")");
    }
    std::ifstream in(file, std::ios::binary);
    std::string line;
    if (!in || !std::getline(in, line)) {
        throw IoError("cannot read " + file.string());
    }
    return parse_header(line, file);
}

StageWriter StageStore::open_writer(std::string_view stage, std::string_view record_type,
                                    nlohmann::json meta) const {
    return StageWriter(stage_path(stage), std::string(record_type), std::move(meta));
}

StageHeader StageStore::scan(std::string_view stage, std::string_view record_type,
                             const std::function<void(const nlohmann::json&)>& visit) const {
    const auto file = stage_path(stage);
    StageHeader head = header(stage);
    if (head.record_type != record_type) {
        throw SchemaMismatch("stage '" + std::string(stage) + "' holds '" + head.record_type + "' records, expected '" +
                             std::string(record_type) + "'");
    }

    std::ifstream in(file, std::ios::binary);
    std::string line;
    std::getline(in, line);  // header
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError("corrupt record " + std::to_string(seen) + " in " + file.string() + ": " + e.what());
        }
        visit(record);
        ++seen;
    }
    if (seen != head.record_count) {
        throw IoError("stage '" + std::string(stage) + "' is truncated: header promises " +
                      std::to_string(head.record_count) + " records, found " + std::to_string(seen));
    }
    return head;
}

}  // namespace keyclust
