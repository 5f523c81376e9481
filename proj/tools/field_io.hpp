#pragma once

// Field files: header `sheet,k,m,re,im`, one row per sample. Grid metadata
// lives in a sidecar `<path>.meta` with `key: value` lines.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <wormszego/wormszego.hpp>

namespace wormszego::io {

struct FieldFile
{
  double beta = 0.0;
  BoundaryField field;
};

inline std::string meta_path(const std::string &path) { return path + ".meta"; }

inline void write_field(const std::string &path, const BoundaryField &f, double beta)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << "sheet,k,m,re,im\n";
  char buf[128];
  for (int s = 0; s < 4; ++s)
    for (std::size_t m = 0; m < f.grid.theta.m_count; ++m)
      for (std::size_t k = 0; k < f.grid.x.n; ++k) {
        const cplx v = f.sheets[s].at(k, m);
        std::snprintf(buf, sizeof buf, "%d,%zu,%zu,%.17g,%.17g\n", s + 1, k, m, v.real(), v.imag());
        out << buf;
      }
  std::ofstream meta(meta_path(path));
  if (!meta)
    throw std::runtime_error("cannot write " + meta_path(path));
  std::snprintf(buf, sizeof buf, "beta: %.17g\nx_min: %.17g\nx_max: %.17g\n", beta, f.grid.x.x_min, f.grid.x.x_max);
  meta << buf << "n: " << f.grid.x.n << "\nM: " << f.grid.theta.m_count << "\n";
}

inline std::map<std::string, std::string> read_meta(const std::string &path)
{
  std::ifstream in(meta_path(path));
  if (!in)
    throw std::invalid_argument("missing sidecar " + meta_path(path));
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (line.empty() || line[0] == '#' || colon == std::string::npos)
      continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
  }
  for (const char *key : {"beta", "x_min", "x_max", "n", "M"})
    if (!kv.count(key))
      throw std::invalid_argument(std::string("sidecar lacks key ") + key);
  return kv;
}

inline FieldFile read_field(const std::string &path)
{
  const auto kv = read_meta(path);
  FieldFile ff;
  ff.beta = std::stod(kv.at("beta"));
  const Grid2 g{make_log_grid(std::stod(kv.at("x_min")), std::stod(kv.at("x_max")), std::stoul(kv.at("n"))),
                make_angular_grid(std::stoul(kv.at("M")))};
  ff.field = BoundaryField(g);

  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("sheet,k,m,re,im", 0) != 0)
    throw std::invalid_argument(path + ": expected header sheet,k,m,re,im");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r")
      continue;
    int s = 0;
    std::size_t k = 0, m = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%d,%zu,%zu,%lf,%lf", &s, &k, &m, &re, &im) != 5 || s < 1 || s > 4 || k >= g.x.n ||
        m >= g.theta.m_count)
      throw std::invalid_argument(path + ": malformed row " + std::to_string(row));
    ff.field.sheets[s - 1].at(k, m) = {re, im};
  }
  return ff;
}

} // namespace wormszego::io
