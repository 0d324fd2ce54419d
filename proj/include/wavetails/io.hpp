#pragma once

// CSV emission and the JSON run manifest.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavetails/error.hpp"
#include "wavetails/evolve.hpp"
#include "wavetails/fit.hpp"

namespace wavetails {

inline constexpr const char* kVersion = "0.1.0";

/// Fixed `%.17g` formatting keeps outputs bit-reproducible.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out_ << header << '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static std::string cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::filesystem::path path_;
  std::ofstream out_;
};

inline void write_series(const std::filesystem::path& path, const TimeSeries& s) {
  CsvWriter w(path, "t,u");
  for (std::size_t i = 0; i < s.size(); ++i) w.row(s.t[i], s.u[i]);
}

inline void write_field(const std::filesystem::path& path, const SpacetimeField& f) {
  CsvWriter w(path, "t,r,u");
  for (std::size_t n = 0; n < f.times.size(); ++n)
    for (std::size_t j = 0; j < f.w[n].size(); ++j) w.row(f.times[n], f.r(j), f.u(n, j));
}

inline void write_slope(const std::filesystem::path& path, const std::vector<SlopePoint>& curve) {
  CsvWriter w(path, "t,slope");
  for (const auto& p : curve) w.row(p.t, p.slope);
}

/// Reads a `t,u` CSV back into a series.
inline TimeSeries read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  TimeSeries s;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double t, u;
    if (std::sscanf(line.c_str(), "%lf,%lf", &t, &u) != 2)
      throw Error(ErrorKind::IoError, path.string() + ":" + std::to_string(lineno) + ": expected t,u");
    s.push(t, u);
  }
  return s;
}

/// Everything needed to trace a run: written even when the run fails.
class RunManifest {
 public:
  RunManifest(std::filesystem::path dir, std::string command)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = kVersion;
    doc_["outputs"] = nlohmann::json::array();
    doc_["warnings"] = nlohmann::json::array();
    doc_["status"] = "running";
  }

  nlohmann::json& doc() { return doc_; }
  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path output(const std::string& name) {
    doc_["outputs"].push_back(name);
    return dir_ / name;
  }

  void warn(const std::string& w) { doc_["warnings"].push_back(w); }

  void finish(const std::string& status, const std::string& error = "") {
    doc_["status"] = status;
    if (!error.empty()) doc_["error"] = error;
    doc_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["outputs"].push_back("manifest.json");
    std::ofstream f(dir_ / "manifest.json");
    f << doc_.dump(2) << '\n';
  }

 private:
  std::filesystem::path dir_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::json doc_;
};

}  // namespace wavetails
