#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace footfall {

// Calendar day (YYYY-MM-DD) of an epoch-millisecond timestamp after shifting
// by a fixed timezone offset in minutes east of UTC.
std::string format_date(std::int64_t ts_ms, int tz_offset_minutes);

// Fixed %.6f rendering with trailing zeros trimmed; "-0" normalizes to "0".
std::string fmt_num(double v);

// One decimal place, Table-style summary columns.
std::string fmt_fixed1(double v);

// Staged report output: contents accumulate in memory and hit disk together,
// so a failed run leaves no partial report files behind.
class ReportSink {
 public:
  void add(std::string filename, std::string content);

  // Creates out_dir if needed and writes every staged file. On a write
  // failure the files already written by this call are removed before the
  // error propagates.
  void flush(const std::filesystem::path& out_dir) const;

  const std::map<std::string, std::string>& files() const { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace footfall
