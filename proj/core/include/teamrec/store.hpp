#pragma once

// File-backed entity store with an append-only feedback log.
//
// On-disk layout under the root directory:
//
//   STORE_VERSION                  "1"
//   <kind>/<escaped-id>.json       one JSON record per entity
//   events/segment-000001.log      JSON lines {"event": {...}, "seq": n}
//
// Ids are percent-escaped: bytes outside [A-Za-z0-9_-] and a leading '.'
// become %XX. Every write goes to a temporary file that is then renamed over
// the target. Readers share a lock; writers are serialized.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/codec.hpp"
#include "teamrec/evaluation.hpp"

namespace teamrec {

namespace kinds {
inline constexpr std::string_view calls = "calls";
inline constexpr std::string_view profiles = "profiles";
inline constexpr std::string_view awards = "awards";
inline constexpr std::string_view models = "models";
inline constexpr std::string_view recommendations = "recommendations";
inline constexpr std::string_view user_index = "user_index";  // {"user_id", "team_ids"}
inline constexpr std::string_view workflow = "workflow";
inline constexpr std::string_view outbox = "outbox";
}  // namespace kinds

inline constexpr int kStoreVersion = 1;

std::string escape_id(std::string_view id);
std::string unescape_id(std::string_view escaped);

class Store {
 public:
  // Creates the layout when `root` is missing or empty. Throws
  // Error(version_mismatch) for another STORE_VERSION and Error(io_error) on
  // filesystem failures.
  static std::unique_ptr<Store> open(const std::filesystem::path& root);
  static std::unique_ptr<Store> in_memory();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Upsert. Throws Error(integrity_violation) when the record references a
  // missing call, profile or recommendation, or when `kind` is unknown.
  void put(std::string_view kind, const std::string& id, const Json& record);

  // Upsert only if the stored record's "version" equals `expected_version`
  // (a missing record counts as version -1). Returns false on conflict.
  bool put_if_version(std::string_view kind, const std::string& id, const Json& record,
                      std::int64_t expected_version);

  std::optional<Json> get(std::string_view kind, std::string_view id) const;

  // Records whose string or integer fields equal every filter value, in id
  // order. An empty filter returns every record.
  std::vector<Json> query(std::string_view kind, const std::map<std::string, std::string>& filter = {}) const;
  std::vector<std::string> ids(std::string_view kind) const;
  std::size_t count(std::string_view kind) const;

  // Validates the event; returns its sequence number (1-based).
  std::int64_t append_event(const FeedbackEvent& event);
  std::vector<FeedbackEvent> replay_events() const;

  // Writes a complete copy of the current state to an empty directory.
  void snapshot(const std::filesystem::path& target) const;
  static std::unique_ptr<Store> load(const std::filesystem::path& root) { return open(root); }

  // Every kind, record and event as one JSON value.
  Json dump_state() const;

  const std::optional<std::filesystem::path>& root() const noexcept { return root_; }

  static const std::vector<std::string_view>& known_kinds();

 private:
  explicit Store(std::optional<std::filesystem::path> root);

  void check_integrity(std::string_view kind, const Json& record) const;
  void write_record(std::string_view kind, const std::string& id, const Json& record);
  void write_event_line(std::int64_t seq, const Json& event);

  std::optional<std::filesystem::path> root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::map<std::string, Json>, std::less<>> entities_;
  std::vector<FeedbackEvent> events_;
};

template <typename T>
std::optional<T> get_as(const Store& store, std::string_view kind, std::string_view id) {
  auto j = store.get(kind, id);
  if (!j) return std::nullopt;
  return j->get<T>();
}

}  // namespace teamrec
