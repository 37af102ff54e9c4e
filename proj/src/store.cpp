#include "qoe/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace qoe::store {

namespace {

using nlohmann::ordered_json;

std::int64_t wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ReportStore::Record parse_envelope(const std::string& line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed store line");
  if (!j.is_object() || !j.contains("seq") || !j.contains("ingested_at_ms") ||
      !j.contains("report"))
    throw ParseError("store line is not a report envelope");
  ReportStore::Record rec;
  rec.seq = j.at("seq").get<std::uint64_t>();
  rec.ingested_at_ms = j.at("ingested_at_ms").get<std::int64_t>();
  rec.report = report::parse(j.at("report").dump());
  return rec;
}

}  // namespace

ReportStore::ReportStore(std::filesystem::path path, Clock now_ms)
    : path_(std::move(path)), now_ms_(now_ms ? std::move(now_ms) : wall_clock_ms) {
  load_or_recover();
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd_ < 0) throw StoreError("cannot open store for append: " + path_.string());
}

ReportStore::~ReportStore() {
  if (fd_ >= 0) ::close(fd_);
}

void ReportStore::load_or_recover() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // new store

  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      // A record exists iff its full line, terminator included, was written;
      // an interrupted append leaves this unterminated tail.
      dropped_bytes_ = content.size() - pos;
      std::cerr << "qoe store: dropping partial trailing record (" << dropped_bytes_
                << " bytes) in " << path_.string() << "\n";
      std::filesystem::resize_file(path_, pos);
      return;
    }
    const std::string line = content.substr(pos, nl - pos);
    try {
      Record rec = parse_envelope(line);
      if (rec.seq < next_seq_) throw StoreError("store sequence numbers not increasing");
      next_seq_ = rec.seq + 1;
      records_.push_back(std::move(rec));
    } catch (const ParseError& e) {
      throw StoreError("corrupt store record in " + path_.string() + ": " + e.what());
    }
    pos = nl + 1;
  }
}

void ReportStore::append_line(const std::string& line) {
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) throw StoreError("store append failed");
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw StoreError("store fsync failed");
}

ReportStore::IngestResult ReportStore::ingest(const report::SessionReport& rep) {
  IngestResult result;
  result.violations = report::validate(rep);
  if (!result.violations.empty()) return result;

  std::lock_guard lock(mutex_);
  Record rec;
  rec.seq = next_seq_;
  rec.ingested_at_ms = now_ms_();
  rec.report = rep;

  ordered_json envelope;
  envelope["seq"] = rec.seq;
  envelope["ingested_at_ms"] = rec.ingested_at_ms;
  envelope["report"] = nlohmann::ordered_json::parse(report::serialize(rep));
  append_line(envelope.dump() + "\n");

  ++next_seq_;
  records_.push_back(std::move(rec));
  result.accepted = true;
  result.seq = records_.back().seq;
  return result;
}

ReportStore::IngestResult ReportStore::ingest_text(std::string_view body) {
  return ingest(report::parse(body));
}

std::vector<ReportStore::Record> ReportStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::optional<ReportStore::Record> ReportStore::find(std::uint64_t seq) const {
  std::lock_guard lock(mutex_);
  for (const auto& rec : records_)
    if (rec.seq == seq) return rec;
  return std::nullopt;
}

std::size_t ReportStore::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

std::uint64_t ReportStore::last_seq() const {
  std::lock_guard lock(mutex_);
  return next_seq_ - 1;
}

}  // namespace qoe::store
