#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "minklab/scalar_field.hpp"

namespace minklab {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format: line 1 "# sphere-grid ntheta=<N> nphi=<M>", then N*M lines
// "i j value" in row-major order, full double precision.
inline void save_field(const ScalarField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const SphereGrid& g = *f.grid;
  out << "# sphere-grid ntheta=" << g.n_theta << " nphi=" << g.n_phi << "\n";
  char buf[64];
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, f(i, j));
      out << buf;
    }
}

inline ScalarField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  int N = 0, M = 0;
  if (std::sscanf(header.c_str(), "# sphere-grid ntheta=%d nphi=%d", &N, &M) != 2)
    throw ParseError(path + ":1: expected header '# sphere-grid ntheta=<N> nphi=<M>', got '" +
                     header + "'");
  auto grid = SphereGrid::build(N, M);
  ScalarField f(grid);
  std::string line;
  int lineno = 1;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      if (!std::getline(in, line))
        throw ParseError(path + ": unexpected end of file at line " + std::to_string(lineno + 1));
      ++lineno;
      int ri = -1, rj = -1;
      double v = 0.0;
      if (std::sscanf(line.c_str(), "%d %d %lf", &ri, &rj, &v) != 3 || ri != i || rj != j)
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected '" + std::to_string(i) +
                         " " + std::to_string(j) + " <value>', got '" + line + "'");
      f(i, j) = v;
    }
  return f;
}

}  // namespace minklab
