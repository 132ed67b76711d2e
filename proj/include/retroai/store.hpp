#ifndef RETROAI_STORE_HPP
#define RETROAI_STORE_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "retroai/analytics.hpp"
#include "retroai/domain.hpp"
#include "retroai/error.hpp"
#include "retroai/json_io.hpp"

namespace retroai {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Document format: {"schema_version": 1, "project": {...}}

inline std::string serialize_document(const Project& p) {
  Json doc{{"schema_version", kSchemaVersion}, {"project", p}};
  return doc.dump(2) + "\n";
}

inline Project parse_document(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc.at("schema_version").is_number_integer()) {
    throw SchemaError("document has no integer schema_version");
  }
  int schema = doc.at("schema_version").get<int>();
  if (schema != kSchemaVersion) {
    throw SchemaError("document schema_version " + std::to_string(schema) +
                      " needs migration to " + std::to_string(kSchemaVersion));
  }
  Project p;
  try {
    p = doc.at("project").get<Project>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed project document: ") + e.what());
  }
  check_structure(p);
  return p;
}

inline Project read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

// Writes to a sibling temporary file and renames it over `path`.
inline void write_document(const std::filesystem::path& path, const Project& p) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << serialize_document(p);
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace '" + path.string() + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// Stores

struct ProjectSummary {
  ProjectId id;
  std::string name;
  StatusLight status;
};

// Persistence with optimistic concurrency: save() succeeds only when the
// incoming version is newer than the stored one.
class ProjectStore {
 public:
  virtual ~ProjectStore() = default;

  // Returns the stored version.
  virtual std::int64_t save(const Project& p) = 0;
  virtual Project load(const ProjectId& id) const = 0;
  virtual std::vector<ProjectId> ids() const = 0;

  bool exists(const ProjectId& id) const {
    auto all = ids();
    return std::find(all.begin(), all.end(), id) != all.end();
  }

  // Ordered by name, then id.
  std::vector<ProjectSummary> list_projects(Instant as_of) const {
    std::vector<ProjectSummary> out;
    for (const auto& id : ids()) {
      Project p = load(id);
      out.push_back({p.id, p.name, project_status(p, as_of)});
    }
    std::sort(out.begin(), out.end(), [](const ProjectSummary& a, const ProjectSummary& b) {
      return std::tie(a.name, a.id) < std::tie(b.name, b.id);
    });
    return out;
  }

 protected:
  static void check_id(const ProjectId& id) {
    if (id.value.empty() || id.value.size() > 128 ||
        !std::all_of(id.value.begin(), id.value.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        })) {
      throw InvalidArgumentError("invalid project id '" + id.value + "'");
    }
  }

  static void check_version(const Project& incoming, std::int64_t stored) {
    if (stored >= incoming.version) {
      throw VersionConflictError("project '" + incoming.id.value + "' is at version " +
                                 std::to_string(stored) + "; cannot save version " +
                                 std::to_string(incoming.version));
    }
  }
};

// One JSON document per project: <dir>/<id>.json.
class FileStore final : public ProjectStore {
 public:
  explicit FileStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create data directory '" + dir_.string() + "': " + ec.message());
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::int64_t save(const Project& p) override {
    check_id(p.id);
    check_structure(p);
    std::lock_guard lock(mutex_);
    auto path = path_for(p.id);
    if (std::filesystem::exists(path)) check_version(p, read_document(path).version);
    write_document(path, p);
    return p.version;
  }

  Project load(const ProjectId& id) const override {
    check_id(id);
    auto path = path_for(id);
    if (!std::filesystem::exists(path)) throw NotFoundError("unknown project '" + id.value + "'");
    return read_document(path);
  }

  std::vector<ProjectId> ids() const override {
    std::vector<ProjectId> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        out.emplace_back(entry.path().stem().string());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::filesystem::path path_for(const ProjectId& id) const { return dir_ / (id.value + ".json"); }

  std::filesystem::path dir_;
  std::mutex mutex_;
};

// Same contract as FileStore, kept in memory as serialized documents.
class MemoryStore final : public ProjectStore {
 public:
  std::int64_t save(const Project& p) override {
    check_id(p.id);
    check_structure(p);
    std::lock_guard lock(mutex_);
    if (auto it = docs_.find(p.id); it != docs_.end()) {
      check_version(p, parse_document(it->second).version);
    }
    docs_[p.id] = serialize_document(p);
    return p.version;
  }

  Project load(const ProjectId& id) const override {
    std::lock_guard lock(mutex_);
    auto it = docs_.find(id);
    if (it == docs_.end()) throw NotFoundError("unknown project '" + id.value + "'");
    return parse_document(it->second);
  }

  std::vector<ProjectId> ids() const override {
    std::lock_guard lock(mutex_);
    std::vector<ProjectId> out;
    for (const auto& [id, doc] : docs_) out.push_back(id);
    return out;
  }

 private:
  mutable std::mutex mutex_;
  std::map<ProjectId, std::string> docs_;
};

}  // namespace retroai

#endif  // RETROAI_STORE_HPP
