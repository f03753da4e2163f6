#pragma once

// Binary grid container and small CSV helpers.
//
// Layout (little-endian):
//   magic "MDG1" | u32 dim | u32 components | u64 ext[dim] | f64 h
//   | f64 origin[dim] | f64 values[size * components] (node-major, then
//   component) | mask bytes, 8 nodes per byte, LSB first.

#include <Eigen/Core>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdlab/grid.hpp"

namespace mdlab {

struct GridFileData {
  GridPtr grid;
  Eigen::MatrixXd values;  // size x components
};

namespace detail {

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("grid file: truncated");
  return v;
}

}  // namespace detail

inline void write_grid_binary(const std::string& path, const Grid& g,
                              const Eigen::MatrixXd& values) {
  if (values.rows() != g.size())
    throw std::invalid_argument("write_grid_binary: value rows != grid size");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_grid_binary: cannot open " + path);
  os.write("MDG1", 4);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(values.cols()));
  for (int d = 0; d < g.dim; ++d)
    detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(g.ext[d]));
  detail::put<double>(os, g.h);
  for (int d = 0; d < g.dim; ++d) detail::put<double>(os, g.origin[d]);
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    for (Eigen::Index i = 0; i < values.rows(); ++i) detail::put<double>(os, values(i, c));
  std::uint8_t byte = 0;
  for (Index i = 0; i < g.size(); ++i) {
    if (g.mask[i]) byte |= static_cast<std::uint8_t>(1u << (i % 8));
    if (i % 8 == 7 || i + 1 == g.size()) {
      detail::put<std::uint8_t>(os, byte);
      byte = 0;
    }
  }
  if (!os) throw std::runtime_error("write_grid_binary: write failed for " + path);
}

inline GridFileData read_grid_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_grid_binary: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "MDG1", 4) != 0)
    throw std::runtime_error("read_grid_binary: bad magic in " + path);
  auto g = std::make_shared<Grid>();
  g->dim = static_cast<int>(detail::get<std::uint32_t>(is));
  if (g->dim < 1 || g->dim > 3) throw std::runtime_error("read_grid_binary: bad dimension");
  const auto comps = detail::get<std::uint32_t>(is);
  if (comps < 1 || comps > 3) throw std::runtime_error("read_grid_binary: bad component count");
  g->ext = {1, 1, 1};
  for (int d = 0; d < g->dim; ++d)
    g->ext[d] = static_cast<Index>(detail::get<std::uint64_t>(is));
  g->h = detail::get<double>(is);
  g->origin.setZero();
  for (int d = 0; d < g->dim; ++d) g->origin[d] = detail::get<double>(is);
  const Index size = g->size();
  if (size <= 0 || size > (Index(1) << 32)) throw std::runtime_error("read_grid_binary: bad extents");
  Eigen::MatrixXd values(size, comps);
  for (std::uint32_t c = 0; c < comps; ++c)
    for (Index i = 0; i < size; ++i) values(i, c) = detail::get<double>(is);
  g->mask.assign(static_cast<std::size_t>(size), 0);
  for (Index i = 0; i < size; i += 8) {
    const auto byte = detail::get<std::uint8_t>(is);
    for (Index b = 0; b < 8 && i + b < size; ++b) g->mask[i + b] = (byte >> b) & 1u;
  }
  return {std::move(g), std::move(values)};
}

inline void write_grid_function(const std::string& path, const GridFunction& f) {
  write_grid_binary(path, *f.grid, f.v.matrix());
}

inline void write_grid_field(const std::string& path, const GridVectorField& w) {
  write_grid_binary(path, *w.grid, w.v);
}

inline GridFunction to_function(const GridFileData& d) {
  if (d.values.cols() != 1) throw std::invalid_argument("to_function: not a scalar file");
  return {d.grid, d.values.col(0).array()};
}

inline GridVectorField to_field(const GridFileData& d) {
  if (d.values.cols() != d.grid->dim)
    throw std::invalid_argument("to_field: components != grid dimension");
  return {d.grid, d.values};
}

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

}  // namespace mdlab
