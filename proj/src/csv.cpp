#include "solvable_pg/csv.hpp"

#include <boost/crc.hpp>
#include <boost/version.hpp>
#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/version.hpp"

namespace solvable_pg {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  out_ << "# " << key << '=' << value << '\n';
}

void CsvWriter::trailer(const std::vector<std::pair<std::string, std::string>>& items) {
  out_ << '#';
  for (const auto& [key, value] : items) out_ << ' ' << key << '=' << value;
  out_ << '\n';
}

void CsvWriter::header(std::initializer_list<std::string> columns) { header(std::vector<std::string>(columns)); }

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ && cells.size() != columns_) throw DimensionMismatch("CSV row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::uint32_t crc32_of(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::uint32_t crc32_of_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return crc32_of(buf.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command_line"] = command_line;
  j["config"] = config;
  j["seed"] = seed;
  j["versions"] = {{"solvable_pg", kVersion},
                   {"boost", BOOST_LIB_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  nlohmann::json files = nlohmann::json::array();
  for (const auto& path : outputs) {
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", crc32_of_file(path));
    files.push_back({{"path", path}, {"crc32", hex}});
  }
  j["outputs"] = files;
  return j;
}

void RunManifest::write(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

}  // namespace solvable_pg
