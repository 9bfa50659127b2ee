#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace solvable_pg {

/// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_real(double x);

/// Comma-separated rows with `# key=value` metadata lines above the header.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value) { comment(key, format_real(value)); }
  /// One `# k1=v1 k2=v2` line, e.g. after the last row.
  void trailer(const std::vector<std::pair<std::string, std::string>>& items);
  void header(std::initializer_list<std::string> columns);
  void header(const std::vector<std::string>& columns);

  /// Cells are pre-formatted strings; use cell() to format numbers.
  void row(const std::vector<std::string>& cells);
  static std::string cell(double x) { return format_real(x); }
  static std::string cell(long long x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

std::uint32_t crc32_of(const std::string& bytes);
/// Throws IoError on failure.
std::uint32_t crc32_of_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Everything needed to re-run a command and verify its outputs.
struct RunManifest {
  std::vector<std::string> command_line;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;

  /// Adds checksums of every listed output (read from disk).
  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

}  // namespace solvable_pg
