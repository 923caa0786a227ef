#pragma once

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <ostream>
#include <string>

#include "apwave/error.hpp"
#include "apwave/grid.hpp"

namespace apwave
{

/// Shortest round-trippable text form used by every data file: "%.17g".
inline std::string format_double(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Plain-text matrix: one line per x2 index, x1 values whitespace-separated.
inline void write_field_matrix(std::ostream& os, const Field& f, const PeriodicGrid& g)
{
  const int n1 = g.cells(0);
  const int n2 = g.dim() == 2 ? g.cells(1) : 1;
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) {
      if (i)
        os << ' ';
      os << format_double(f[g.index(i, j)]);
    }
    os << '\n';
  }
}

/// CSV with header x1,x2,value (x2 = 0 on 1D grids).
inline void write_field_csv(std::ostream& os, const Field& f, const PeriodicGrid& g)
{
  os << "x1,x2,value\n";
  const int n1 = g.cells(0);
  const int n2 = g.dim() == 2 ? g.cells(1) : 1;
  for (int j = 0; j < n2; ++j) {
    const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
    for (int i = 0; i < n1; ++i)
      os << format_double(g.center(0, i)) << ',' << format_double(y) << ','
         << format_double(f[g.index(i, j)]) << '\n';
  }
}

/// Writes <stem>.txt (matrix) and <stem>.csv next to each other.
inline void dump_field(const std::filesystem::path& stem, const Field& f, const PeriodicGrid& g)
{
  std::ofstream txt(stem.string() + ".txt", std::ios::binary);
  std::ofstream csv(stem.string() + ".csv", std::ios::binary);
  if (!txt || !csv)
    throw ConfigError("cannot write field dump " + stem.string());
  write_field_matrix(txt, f, g);
  write_field_csv(csv, f, g);
}

} // namespace apwave
