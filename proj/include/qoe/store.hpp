#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qoe/report_schema.hpp"

namespace qoe::store {

/// Append-only, durably persisted sequence of validated session reports.
/// One JSON envelope per line: {"seq": N, "ingested_at_ms": T, "report": {...}}.
/// A partial trailing line (interrupted append) is dropped on open; corruption
/// anywhere else is a StoreError.
class ReportStore {
 public:
  struct Record {
    std::uint64_t seq = 0;
    std::int64_t ingested_at_ms = 0;
    report::SessionReport report;
  };

  struct IngestResult {
    bool accepted = false;
    std::uint64_t seq = 0;  // valid when accepted
    std::vector<report::Violation> violations;
  };

  using Clock = std::function<std::int64_t()>;

  explicit ReportStore(std::filesystem::path path, Clock now_ms = {});
  ~ReportStore();

  ReportStore(const ReportStore&) = delete;
  ReportStore& operator=(const ReportStore&) = delete;

  /// Validates and appends. The line is flushed to disk before the call
  /// returns an accepted result. Rejected reports are not stored.
  IngestResult ingest(const report::SessionReport& report);

  /// Parses the body first; malformed text is a ParseError, validation
  /// violations are a rejected result.
  IngestResult ingest_text(std::string_view body);

  std::vector<Record> snapshot() const;
  std::optional<Record> find(std::uint64_t seq) const;
  std::size_t size() const;
  std::uint64_t last_seq() const;

  /// Bytes dropped from a partial trailing line during recovery (0 normally).
  std::size_t recovered_dropped_bytes() const { return dropped_bytes_; }

  const std::filesystem::path& path() const { return path_; }

 private:
  void load_or_recover();
  void append_line(const std::string& line);

  std::filesystem::path path_;
  Clock now_ms_;
  mutable std::mutex mutex_;
  std::vector<Record> records_;
  std::uint64_t next_seq_ = 1;
  int fd_ = -1;
  std::size_t dropped_bytes_ = 0;
};

}  // namespace qoe::store
