#pragma once

// CSV output with a versioned schema line and a timestamp line:
//
//   # schema: <name>/<version>
//   # generated: <UTC timestamp>
//   col_a,col_b,...
//   1.2345678901234567,...
//
// Numbers carry 17 significant digits. Golden-file comparisons skip the
// `# generated:` line and nothing else.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eqcircle/cli/config.hpp"

namespace eqcircle::cli {

inline constexpr int csv_schema_version = 1;
inline constexpr const char* generated_prefix = "# generated:";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema, const std::vector<std::string>& columns)
      : path_(path), out_(path), width_(columns.size()) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
    out_ << "# schema: " << schema << '/' << csv_schema_version << '\n';
    out_ << generated_prefix << ' ' << utc_timestamp() << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != width_) throw IoError("row width mismatch in '" + path_.string() + "'");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
    if (!out_) throw IoError("write failed for '" + path_.string() + "'");
  }

  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

} // namespace eqcircle::cli
