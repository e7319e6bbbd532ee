#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cglab/ensemble.hpp"

namespace cglab {

using json = nlohmann::ordered_json;

json config_to_json(const Configuration& cfg);
Configuration config_from_json(const json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// shortest round-trip decimal
std::string fmt_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct SvgOptions {
  double size = 480;
  std::string title;
  double circle_radius = 0;  // draw the centred circle if > 0
};

std::string svg_scatter(const std::vector<Complex>& pts, const SvgOptions& opt);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace cglab
