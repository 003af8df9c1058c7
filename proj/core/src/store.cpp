#include "teamrec/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

namespace teamrec {

namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kEventsPerSegment = 10'000;
constexpr std::string_view kVersionFile = "STORE_VERSION";
constexpr std::string_view kEventsDir = "events";

std::string segment_name(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "segment-%06lld.log", static_cast<long long>(index));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_error, "rename to " + path.string() + ": " + ec.message());
}

bool field_equals(const Json& record, const std::string& key, const std::string& value) {
  if (!record.is_object() || !record.contains(key)) return false;
  const Json& v = record.at(key);
  if (v.is_string()) return v.get<std::string>() == value;
  if (v.is_number_integer() || v.is_boolean()) return v.dump() == value;
  return false;
}

std::string string_field(const Json& record, const char* key) {
  if (!record.is_object() || !record.contains(key) || !record.at(key).is_string()) {
    throw Error(ErrorCode::integrity_violation, std::string("record lacks ") + key);
  }
  return record.at(key).get<std::string>();
}

bool is_plain(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

}  // namespace

std::string escape_id(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    const auto c = static_cast<unsigned char>(id[i]);
    if (is_plain(c) || (c == '.' && i > 0)) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string unescape_id(std::string_view escaped) {
  std::string out;
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%' && i + 2 < escaped.size()) {
      out += static_cast<char>(std::stoi(std::string(escaped.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += escaped[i];
    }
  }
  return out;
}

const std::vector<std::string_view>& Store::known_kinds() {
  static const std::vector<std::string_view> kKinds = {kinds::awards,  kinds::calls,    kinds::models,
                                                       kinds::outbox,  kinds::profiles, kinds::recommendations,
                                                       kinds::user_index, kinds::workflow};
  return kKinds;
}

Store::Store(std::optional<fs::path> root) : root_(std::move(root)) {
  for (auto kind : known_kinds()) entities_.emplace(std::string(kind), std::map<std::string, Json>{});
}

std::unique_ptr<Store> Store::in_memory() { return std::unique_ptr<Store>(new Store(std::nullopt)); }

std::unique_ptr<Store> Store::open(const fs::path& root) {
  std::unique_ptr<Store> store(new Store(root));
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + root.string() + ": " + ec.message());

  const fs::path version_path = root / kVersionFile;
  if (fs::exists(version_path)) {
    const std::string text = read_file(version_path);
    if (std::stoi(text.empty() ? "0" : text) != kStoreVersion) {
      throw Error(ErrorCode::version_mismatch, "store version " + text + " is not supported");
    }
  } else {
    write_atomically(version_path, std::to_string(kStoreVersion) + "\n");
  }

  for (auto kind : known_kinds()) {
    const fs::path dir = root / kind;
    fs::create_directories(dir);
    auto& records = store->entities_[std::string(kind)];
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      const std::string id = unescape_id(entry.path().stem().string());
      try {
        records[id] = Json::parse(read_file(entry.path()));
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::parse_error, entry.path().string() + ": " + e.what());
      }
    }
  }

  const fs::path events_dir = root / kEventsDir;
  fs::create_directories(events_dir);
  std::vector<fs::path> segments;
  for (const auto& entry : fs::directory_iterator(events_dir)) {
    if (entry.path().extension() == ".log") segments.push_back(entry.path());
  }
  std::sort(segments.begin(), segments.end());
  std::int64_t expected = 1;
  for (const auto& segment : segments) {
    const std::string content = read_file(segment);
    if (!content.empty() && content.back() != '\n') {
      // Drop an interrupted append so the next one starts on a fresh line.
      const auto keep = content.find_last_of('\n');
      fs::resize_file(segment, keep == std::string::npos ? 0 : keep + 1);
    }
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (in.eof()) break;  // a final line without newline is an interrupted append
      const Json j = Json::parse(line);
      if (json_field<std::int64_t>(j, "seq") != expected) {
        throw Error(ErrorCode::integrity_violation, "event log out of sequence in " + segment.string());
      }
      store->events_.push_back(json_field<FeedbackEvent>(j, "event"));
      ++expected;
    }
  }
  return store;
}

void Store::check_integrity(std::string_view kind, const Json& record) const {
  auto exists = [&](std::string_view k, const std::string& id) {
    const auto& m = entities_.find(k)->second;
    return m.find(id) != m.end();
  };
  auto require = [&](std::string_view k, const std::string& id) {
    if (!exists(k, id)) {
      throw Error(ErrorCode::integrity_violation,
                  std::string(kind) + " record references missing " + std::string(k) + " " + id);
    }
  };
  if (kind == kinds::recommendations) {
    require(kinds::calls, string_field(record, "call_id"));
    require(kinds::profiles, string_field(record, "lead"));
    if (record.contains("members")) {
      for (const auto& m : record.at("members")) require(kinds::profiles, string_field(m, "user_id"));
    }
  } else if (kind == kinds::workflow || kind == kinds::outbox) {
    require(kinds::recommendations, string_field(record, "team_id"));
  } else if (kind == kinds::user_index) {
    require(kinds::profiles, string_field(record, "user_id"));
    for (const auto& t : record.at("team_ids")) require(kinds::recommendations, t.get<std::string>());
  }
}

void Store::write_record(std::string_view kind, const std::string& id, const Json& record) {
  if (root_) write_atomically(*root_ / kind / (escape_id(id) + ".json"), canonical_dump(record));
  entities_.find(kind)->second[id] = record;
}

void Store::put(std::string_view kind, const std::string& id, const Json& record) {
  std::unique_lock lock(mutex_);
  if (entities_.find(kind) == entities_.end()) {
    throw Error(ErrorCode::integrity_violation, "unknown kind " + std::string(kind));
  }
  if (id.empty()) throw Error(ErrorCode::integrity_violation, "empty id");
  check_integrity(kind, record);
  write_record(kind, id, record);
}

bool Store::put_if_version(std::string_view kind, const std::string& id, const Json& record,
                           std::int64_t expected_version) {
  std::unique_lock lock(mutex_);
  auto it = entities_.find(kind);
  if (it == entities_.end()) throw Error(ErrorCode::integrity_violation, "unknown kind " + std::string(kind));
  std::int64_t current = -1;
  if (auto r = it->second.find(id); r != it->second.end()) {
    current = r->second.value("version", std::int64_t{0});
  }
  if (current != expected_version) return false;
  check_integrity(kind, record);
  write_record(kind, id, record);
  return true;
}

std::optional<Json> Store::get(std::string_view kind, std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = entities_.find(kind);
  if (it == entities_.end()) return std::nullopt;
  auto r = it->second.find(std::string(id));
  if (r == it->second.end()) return std::nullopt;
  return std::optional<Json>(std::in_place, r->second);
}

std::vector<Json> Store::query(std::string_view kind, const std::map<std::string, std::string>& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<Json> out;
  auto it = entities_.find(kind);
  if (it == entities_.end()) return out;
  for (const auto& [id, record] : it->second) {
    const bool match = std::all_of(filter.begin(), filter.end(),
                                   [&](const auto& kv) { return field_equals(record, kv.first, kv.second); });
    if (match) out.push_back(record);
  }
  return out;
}

std::vector<std::string> Store::ids(std::string_view kind) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  auto it = entities_.find(kind);
  if (it == entities_.end()) return out;
  for (const auto& [id, record] : it->second) out.push_back(id);
  return out;
}

std::size_t Store::count(std::string_view kind) const {
  std::shared_lock lock(mutex_);
  auto it = entities_.find(kind);
  return it == entities_.end() ? 0 : it->second.size();
}

void Store::write_event_line(std::int64_t seq, const Json& event) {
  if (!root_) return;
  const std::int64_t segment = (seq - 1) / kEventsPerSegment + 1;
  const fs::path path = *root_ / kEventsDir / segment_name(segment);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::io_error, "cannot append to " + path.string());
  out << Json{{"event", event}, {"seq", seq}}.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::io_error, "append failed for " + path.string());
}

std::int64_t Store::append_event(const FeedbackEvent& event) {
  event.validate();
  std::unique_lock lock(mutex_);
  const auto seq = static_cast<std::int64_t>(events_.size()) + 1;
  write_event_line(seq, Json(event));
  events_.push_back(event);
  return seq;
}

std::vector<FeedbackEvent> Store::replay_events() const {
  std::shared_lock lock(mutex_);
  return events_;
}

void Store::snapshot(const fs::path& target) const {
  std::shared_lock lock(mutex_);
  if (fs::exists(target) && !fs::is_empty(target)) {
    throw Error(ErrorCode::io_error, "snapshot target " + target.string() + " is not empty");
  }
  fs::create_directories(target / kEventsDir);
  write_atomically(target / kVersionFile, std::to_string(kStoreVersion) + "\n");
  for (const auto& [kind, records] : entities_) {
    fs::create_directories(target / kind);
    for (const auto& [id, record] : records) {
      write_atomically(target / kind / (escape_id(id) + ".json"), canonical_dump(record));
    }
  }
  std::map<std::int64_t, std::string> segments;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto seq = static_cast<std::int64_t>(i) + 1;
    segments[(seq - 1) / kEventsPerSegment + 1] += Json{{"event", events_[i]}, {"seq", seq}}.dump() + "\n";
  }
  for (const auto& [index, content] : segments) write_atomically(target / kEventsDir / segment_name(index), content);
}

Json Store::dump_state() const {
  std::shared_lock lock(mutex_);
  Json out = Json::object();
  out["version"] = kStoreVersion;
  Json entities = Json::object();
  for (const auto& [kind, records] : entities_) {
    Json k = Json::object();
    for (const auto& [id, record] : records) k[id] = record;
    entities[kind] = std::move(k);
  }
  out["entities"] = std::move(entities);
  out["events"] = events_;
  return out;
}

}  // namespace teamrec
