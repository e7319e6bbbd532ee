#include "cglab/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace cglab {

json config_to_json(const Configuration& cfg) {
  json j;
  j["n"] = cfg.n();
  if (std::isfinite(cfg.beta))
    j["beta"] = cfg.beta;
  else
    j["beta"] = nullptr;
  if (cfg.c) j["c"] = *cfg.c;
  j["seed"] = cfg.seed;
  j["provenance"] = to_string(cfg.provenance);
  json pts = json::array();
  for (Complex z : cfg.points) pts.push_back({z.real(), z.imag()});
  j["points"] = std::move(pts);
  return j;
}

Configuration config_from_json(const json& j) {
  try {
    Configuration cfg;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("configuration: points must be [x, y] pairs");
      cfg.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    if (j.contains("n") && j["n"].get<int>() != cfg.n()) throw ConfigError("configuration: n does not match points");
    const auto& b = j.at("beta");
    cfg.beta = b.is_null() ? std::numeric_limits<double>::infinity() : b.get<double>();
    if (j.contains("c")) cfg.c = j["c"].get<double>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.provenance = provenance_from_string(j.value("provenance", std::string("synthetic")));
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw ConfigError("csv: row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream s;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
    s << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return s.str();
}

std::string svg_scatter(const std::vector<Complex>& pts, const SvgOptions& opt) {
  double ext = opt.circle_radius;
  for (Complex z : pts) ext = std::max({ext, std::abs(z.real()), std::abs(z.imag())});
  if (ext == 0) ext = 1;
  ext *= 1.1;
  double half = opt.size / 2;
  auto X = [&](double x) { return fmt_double(std::round((half + x / ext * half) * 100) / 100); };
  auto Y = [&](double y) { return fmt_double(std::round((half - y / ext * half) * 100) / 100); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size << "\" height=\"" << opt.size
    << "\" viewBox=\"0 0 " << opt.size << " " << opt.size << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) s << "<text x=\"8\" y=\"18\" font-size=\"14\" font-family=\"sans-serif\">" << opt.title << "</text>\n";
  if (opt.circle_radius > 0)
    s << "<circle cx=\"" << X(0) << "\" cy=\"" << Y(0) << "\" r=\"" << fmt_double(opt.circle_radius / ext * half)
      << "\" fill=\"none\" stroke=\"#999\"/>\n";
  double dot = std::max(0.8, 0.35 * opt.size / std::sqrt(double(std::max<std::size_t>(pts.size(), 1))) / 4);
  for (Complex z : pts)
    s << "<circle cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag()) << "\" r=\"" << fmt_double(dot)
      << "\" fill=\"black\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw NumericalError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

}  // namespace cglab
