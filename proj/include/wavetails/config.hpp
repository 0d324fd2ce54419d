#pragma once

// Plain-text run configuration:
//
//   [potential]   shape, k, lambda | lambda_V0, r_min, table
//   [nonlinearity] p, b, epsilon
//   [data]        family, amplitude, radius, f, g, table
//   [grid]        dr, mesh_ratio, r_max, t_max, r_obs, series_stride,
//                 field_stride, field_r_stride, precision, amplitude_limit
//   [fit]         t1, t2
//
// `key = value` lines, `#` or `;` comments. Unknown sections or keys are
// errors that name the file, line and key.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/initdata.hpp"
#include "wavetails/model.hpp"

namespace wavetails {

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

using Section = std::map<std::string, Entry>;

class ConfigReader {
 public:
  ConfigReader(std::string origin, std::map<std::string, Section> sections)
      : origin_(std::move(origin)), sections_(std::move(sections)) {}

  bool has(const std::string& sec) const { return sections_.count(sec) > 0; }

  bool has(const std::string& sec, const std::string& key) const {
    auto it = sections_.find(sec);
    return it != sections_.end() && it->second.count(key) > 0;
  }

  double number(const std::string& sec, const std::string& key, double fallback) {
    if (!has(sec, key)) return fallback;
    return parse_number(sec, key, get(sec, key));
  }

  int integer(const std::string& sec, const std::string& key, int fallback) {
    if (!has(sec, key)) return fallback;
    const auto& e = get(sec, key);
    int v = 0;
    auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size()) fail(e.line, sec, key, "expected an integer");
    return v;
  }

  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
    if (!has(sec, key)) return fallback;
    return get(sec, key).value;
  }

  std::vector<double> numbers(const std::string& sec, const std::string& key, std::vector<double> fallback) {
    if (!has(sec, key)) return fallback;
    const auto& e = get(sec, key);
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(sec, key, {trim(item), e.line}));
    if (out.empty()) fail(e.line, sec, key, "expected a comma-separated list");
    return out;
  }

  [[noreturn]] void fail(int line, const std::string& sec, const std::string& key, const std::string& why) const {
    throw Error(ErrorKind::ConfigError, origin_ + ":" + std::to_string(line) + ": [" + sec + "] " + key + ": " + why);
  }

  int line_of(const std::string& sec, const std::string& key) const { return sections_.at(sec).at(key).line; }

  /// Reject keys that no reader asked about.
  void check_unused() const {
    for (const auto& [sec, entries] : sections_)
      for (const auto& [key, e] : entries)
        if (!used_.count(sec + "." + key))
          throw Error(ErrorKind::ConfigError, origin_ + ":" + std::to_string(e.line) + ": unknown key '" + key + "' in [" + sec + "]");
  }

  void allow(const std::string& sec, std::initializer_list<const char*> keys) {
    for (const char* k : keys) used_.insert(sec + "." + k);
  }

 private:
  const Entry& get(const std::string& sec, const std::string& key) { return sections_.at(sec).at(key); }

  double parse_number(const std::string& sec, const std::string& key, const Entry& e) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail(e.line, sec, key, "expected a number, got '" + e.value + "'");
    }
  }

  std::string origin_;
  std::map<std::string, Section> sections_;
  std::set<std::string> used_;
};

inline const std::set<std::string>& known_sections() {
  static const std::set<std::string> s{"potential", "nonlinearity", "data", "grid", "fit"};
  return s;
}

}  // namespace detail

/// Parses config text; `origin` names the source in diagnostics.
inline ModelConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
  std::map<std::string, detail::Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto cut = raw.find_first_of("#;");
    std::string line = detail::trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": malformed section header");
      current = detail::trim(line.substr(1, line.size() - 2));
      if (!detail::known_sections().count(current))
        throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": unknown section [" + current + "]");
      if (sections.count(current))
        throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (current.empty()) throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": key outside any section");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (sections[current].count(key))
      throw Error(ErrorKind::ConfigError, origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + current + "]");
    sections[current][key] = {value, lineno};
  }

  detail::ConfigReader rd(origin, std::move(sections));
  ModelConfig c;

  if (rd.has("potential")) {
    rd.allow("potential", {"shape", "k", "lambda", "lambda_V0", "r_min", "table"});
    PotentialSpec V;
    const std::string shape = rd.text("potential", "shape", "tanh-power");
    if (shape == "tanh-power") V.shape = PotentialShape::TanhPower;
    else if (shape == "pure-power") V.shape = PotentialShape::PurePower;
    else if (shape == "tabulated") V.shape = PotentialShape::Tabulated;
    else rd.fail(rd.line_of("potential", "shape"), "potential", "shape", "unknown shape '" + shape + "'");
    V.k = rd.number("potential", "k", 3.0);
    V.r_min = rd.number("potential", "r_min", 1.0);
    if (V.shape == PotentialShape::Tabulated) {
      if (!rd.has("potential", "table")) throw Error(ErrorKind::ConfigError, origin + ": [potential] tabulated shape needs 'table'");
      const std::string path = rd.text("potential", "table", "");
      std::ifstream f(path);
      if (!f) throw Error(ErrorKind::IoError, "cannot open potential table " + path);
      std::string row;
      std::getline(f, row);
      std::vector<double> rs, vs;
      while (std::getline(f, row)) {
        if (detail::trim(row).empty()) continue;
        std::replace(row.begin(), row.end(), ',', ' ');
        std::istringstream ss(row);
        double r, v;
        if (!(ss >> r >> v)) throw Error(ErrorKind::ConfigError, path + ": expected r,V rows");
        rs.push_back(r);
        vs.push_back(v);
      }
      if (rs.size() < 4 || rs.front() != 0.0) throw Error(ErrorKind::ConfigError, path + ": table must start at r = 0 with >= 4 rows");
      V.table = RadialProfile::sampled(rs[1] - rs[0], std::move(vs));
      V.table_path = path;
    }
    V.normalize();
    const bool has_l = rd.has("potential", "lambda"), has_lv = rd.has("potential", "lambda_V0");
    if (has_l && has_lv) rd.fail(rd.line_of("potential", "lambda_V0"), "potential", "lambda_V0", "give lambda or lambda_V0, not both");
    if (has_lv) V.lambda = rd.number("potential", "lambda_V0", 0.0) / V.V0;
    else V.lambda = rd.number("potential", "lambda", 0.0);
    c.potential = V;
  }

  if (rd.has("nonlinearity")) {
    rd.allow("nonlinearity", {"p", "b", "epsilon"});
    NonlinearitySpec F;
    F.p = rd.integer("nonlinearity", "p", 3);
    F.b = rd.numbers("nonlinearity", "b", {1.0});
    F.epsilon = rd.number("nonlinearity", "epsilon", 1.0);
    c.nonlinearity = F;
  }

  rd.allow("data", {"family", "amplitude", "radius", "f", "g", "table"});
  c.data.family = rd.text("data", "family", "paper-gaussian");
  c.data.amplitude = rd.number("data", "amplitude", 1.0);
  c.data.bump_radius = rd.number("data", "radius", 2.0);
  c.data.bump_f = rd.number("data", "f", 1.0);
  c.data.bump_g = rd.number("data", "g", 0.0);
  c.data.table_path = rd.text("data", "table", "");

  rd.allow("grid", {"dr", "mesh_ratio", "r_max", "t_max", "r_obs", "series_stride", "field_stride", "field_r_stride",
                    "precision", "amplitude_limit"});
  auto& g = c.grid;
  g.dr = rd.number("grid", "dr", g.dr);
  g.mesh_ratio = rd.number("grid", "mesh_ratio", g.mesh_ratio);
  g.t_max = rd.number("grid", "t_max", g.t_max);
  g.r_obs = rd.number("grid", "r_obs", g.r_obs);
  g.r_max = rd.number("grid", "r_max", 0.0);  // 0: derive from t_max and the data
  g.series_stride = rd.integer("grid", "series_stride", g.series_stride);
  g.field_stride = rd.integer("grid", "field_stride", g.field_stride);
  g.field_r_stride = rd.integer("grid", "field_r_stride", g.field_r_stride);
  g.amplitude_limit = rd.number("grid", "amplitude_limit", g.amplitude_limit);
  const std::string prec = rd.text("grid", "precision", "double");
  if (prec == "double") g.precision = Precision::Double;
  else if (prec == "extended") g.precision = Precision::Extended;
  else rd.fail(rd.line_of("grid", "precision"), "grid", "precision", "expected double or extended");

  if (rd.has("fit")) {
    rd.allow("fit", {"t1", "t2"});
    if (rd.has("fit", "t1") != rd.has("fit", "t2")) throw Error(ErrorKind::ConfigError, origin + ": [fit] needs both t1 and t2");
    if (rd.has("fit", "t1")) c.fit = FitWindow{rd.number("fit", "t1", 0.0), rd.number("fit", "t2", 0.0)};
  }

  rd.check_unused();
  return c;
}

inline ModelConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

/// Fills a zero r_max with the smallest causally safe value plus two cells.
inline void resolve_grid(ModelConfig& c, double support_radius) {
  if (c.grid.r_max <= 0.0) c.grid.r_max = required_r_max(c.grid.t_max, c.grid.r_obs, support_radius) + 2.0 * c.grid.dr;
}

/// Inverse of parse_config, used for manifests.
inline std::string format_config(const ModelConfig& c) {
  std::ostringstream o;
  o.precision(17);
  if (c.potential) {
    const auto& V = *c.potential;
    o << "[potential]\nshape = " << to_string(V.shape) << "\nk = " << V.k << "\nlambda = " << V.lambda << "\n";
    if (V.shape == PotentialShape::PurePower) o << "r_min = " << V.r_min << "\n";
    if (V.shape == PotentialShape::Tabulated) o << "table = " << V.table_path << "\n";
    o << "# V0 = " << V.V0 << ", lambda_V0 = " << V.lambda * V.V0 << "\n\n";
  }
  if (c.nonlinearity) {
    const auto& F = *c.nonlinearity;
    o << "[nonlinearity]\np = " << F.p << "\nb = ";
    for (std::size_t i = 0; i < F.b.size(); ++i) o << (i ? ", " : "") << F.b[i];
    o << "\nepsilon = " << F.epsilon << "\n\n";
  }
  o << "[data]\nfamily = " << c.data.family << "\namplitude = " << c.data.amplitude << "\n";
  if (c.data.family == "bump") o << "radius = " << c.data.bump_radius << "\nf = " << c.data.bump_f << "\ng = " << c.data.bump_g << "\n";
  if (c.data.family == "tabulated") o << "table = " << c.data.table_path << "\n";
  const auto& g = c.grid;
  o << "\n[grid]\ndr = " << g.dr << "\nmesh_ratio = " << g.mesh_ratio << "\nr_max = " << g.r_max << "\nt_max = " << g.t_max
    << "\nr_obs = " << g.r_obs << "\nseries_stride = " << g.series_stride << "\nfield_stride = " << g.field_stride
    << "\nfield_r_stride = " << g.field_r_stride << "\nprecision = " << (g.precision == Precision::Extended ? "extended" : "double")
    << "\namplitude_limit = " << g.amplitude_limit << "\n";
  if (c.fit) o << "\n[fit]\nt1 = " << c.fit->t1 << "\nt2 = " << c.fit->t2 << "\n";
  return o.str();
}

}  // namespace wavetails
