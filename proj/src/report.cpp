#include "footfall/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace footfall {

namespace {

// days-since-epoch to civil date (Howard Hinnant's algorithm)
void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::string format_date(std::int64_t ts_ms, int tz_offset_minutes) {
  const std::int64_t shifted = ts_ms + static_cast<std::int64_t>(tz_offset_minutes) * 60000;
  const std::int64_t days = floor_div(shifted, 86400000);
  int y = 0, m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    auto last = s.find_last_not_of('0');
    if (last == dot) --last;
    s.erase(last + 1);
  }
  if (s == "-0") s = "0";
  return s;
}

std::string fmt_fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

void ReportSink::add(std::string filename, std::string content) {
  files_[std::move(filename)] = std::move(content);
}

void ReportSink::flush(const std::filesystem::path& out_dir) const {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files_) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) out << content;
    if (!out) {
      std::error_code ec;
      for (const auto& p : written) std::filesystem::remove(p, ec);
      std::filesystem::remove(path, ec);
      throw std::runtime_error("cannot write report file: " + path.string());
    }
    written.push_back(path);
  }
}

}  // namespace footfall
