#ifndef KEYCLUST_STAGE_STORE_HPP
#define KEYCLUST_STAGE_STORE_HPP

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "keyclust/errors.hpp"

namespace keyclust {

inline constexpr int kStageSchemaVersion = 1;

/// Specialize with `static constexpr std::string_view name` for every type
/// stored in a stage. The name is written to the stage header and checked on
/// load.
template <typename Record>
struct StageRecord;

struct StageHeader {
    std::string record_type;
    int version = kStageSchemaVersion;
    std::size_t record_count = 0;
    nlohmann::json meta = nlohmann::json::object();
};

/**
 * Streams records into a stage file. Records go to a temporary body file;
 * commit() writes the header (which needs the final count) followed by the
 * body and atomically renames the result into place. A writer destroyed
 * without commit() leaves any existing stage untouched.
 */
class StageWriter {
public:
    StageWriter(std::filesystem::path target, std::string record_type, nlohmann::json meta);
    StageWriter(StageWriter&& other) noexcept;
    StageWriter& operator=(StageWriter&&) = delete;
    ~StageWriter();

    template <typename Record>
    void append(const Record& record) {
        write_line(nlohmann::json(record));
    }

    void write_line(const nlohmann::json& record);
    void commit();

    std::size_t count() const { return count_; }

private:
    std::filesystem::path target_;
    std::filesystem::path body_path_;
    std::string record_type_;
    nlohmann::json meta_;
    std::ofstream body_;
    std::size_t count_ = 0;
    bool committed_ = false;
};

/**
 * Directory of named stages. Each stage is `<root>/<stage>.jsonl`: one header
 * line, then one JSON record per line.
 */
class StageStore {
public:
    explicit StageStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path stage_path(std::string_view stage) const;
    bool exists(std::string_view stage) const;

    /// Throws MissingStage, IoError or SchemaMismatch.
    StageHeader header(std::string_view stage) const;

    template <typename Record>
    StageWriter writer(std::string_view stage, nlohmann::json meta = nlohmann::json::object()) const {
        return open_writer(stage, StageRecord<Record>::name, std::move(meta));
    }

    template <typename Record>
    void save(std::string_view stage, std::span<const Record> records,
              nlohmann::json meta = nlohmann::json::object()) const {
        auto out = writer<Record>(stage, std::move(meta));
        for (const auto& r : records) {
            out.append(r);
        }
        out.commit();
    }

    template <typename Record>
    void save(std::string_view stage, const std::vector<Record>& records,
              nlohmann::json meta = nlohmann::json::object()) const {
        save(stage, std::span<const Record>(records), std::move(meta));
    }

    /// Visits records in file order without holding the whole stage in memory.
    template <typename Record>
    StageHeader for_each(std::string_view stage, const std::function<void(Record&&)>& visit) const {
        return scan(stage, StageRecord<Record>::name, [&](const nlohmann::json& line) {
            Record r;
            try {
                line.get_to(r);
            } catch (const nlohmann::json::exception& e) {
                throw SchemaMismatch("stage '" + std::string(stage) + "': bad record: " + e.what());
            }
            visit(std::move(r));
        });
    }

    /// Loads a whole stage. Either every record is returned or an exception is
    /// thrown; partial data is never returned.
    template <typename Record>
    std::vector<Record> load(std::string_view stage, nlohmann::json* meta = nullptr) const {
        std::vector<Record> out;
        auto head = for_each<Record>(stage, [&](Record&& r) { out.push_back(std::move(r)); });
        if (meta != nullptr) {
            *meta = head.meta;
        }
        return out;
    }

private:
    StageWriter open_writer(std::string_view stage, std::string_view record_type, nlohmann::json meta) const;
    StageHeader scan(std::string_view stage, std::string_view record_type,
                     const std::function<void(const nlohmann::json&)>& visit) const;

    std::filesystem::path root_;
};

}  // namespace keyclust

#endif  // KEYCLUST_STAGE_STORE_HPP
