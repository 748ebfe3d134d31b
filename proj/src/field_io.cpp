#include "sdlab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace sdlab {

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host expected");

void put_u64(std::ostream& out, std::uint64_t x) { out.write(reinterpret_cast<const char*>(&x), 8); }
void put_f64(std::ostream& out, double x) { out.write(reinterpret_cast<const char*>(&x), 8); }

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t x = 0;
  in.read(reinterpret_cast<char*>(&x), 8);
  return x;
}
double get_f64(std::istream& in) {
  double x = 0;
  in.read(reinterpret_cast<char*>(&x), 8);
  return x;
}

void put_header(std::ostream& out, const Grid& g) {
  put_u64(out, static_cast<std::uint64_t>(g.dim()));
  put_u64(out, static_cast<std::uint64_t>(g.points_per_dim()));
  put_f64(out, g.half_length());
}

template <typename Scalar>
void write_csv_impl(std::ostream& out, const Field<Scalar>& f) {
  const Grid& g = f.grid();
  for (int a = 0; a < g.dim(); ++a) out << "x" << (a + 1) << ",";
  out << "re,im\n";
  char buf[64];
  for (Index j = 0; j < f.size(); ++j) {
    const auto idx = g.unravel(j);
    for (int a = 0; a < g.dim(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g,", g.coordinate(idx[a]));
      out << buf;
    }
    const Complex z(f.values()[j]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
    out << buf;
  }
}

template <typename Scalar>
void write_binary_path(const std::string& path, const Field<Scalar>& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_field_binary(out, f);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_field_binary(std::ostream& out, const ComplexField& f) {
  put_header(out, f.grid());
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * 16));
}

void write_field_binary(std::ostream& out, const RealField& f) {
  put_header(out, f.grid());
  for (Index j = 0; j < f.size(); ++j) {
    put_f64(out, f.values()[j]);
    put_f64(out, 0.0);
  }
}

void write_field_binary(const std::string& path, const ComplexField& f) { write_binary_path(path, f); }
void write_field_binary(const std::string& path, const RealField& f) { write_binary_path(path, f); }

ComplexField read_field_binary(std::istream& in) {
  const auto n = get_u64(in);
  const auto N = get_u64(in);
  const double L = get_f64(in);
  if (!in) throw std::runtime_error("read_field_binary: truncated header");
  auto grid = make_grid(static_cast<int>(n), L, static_cast<Index>(N));
  ComplexArray values(grid->size());
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(grid->size() * 16));
  if (!in) throw std::runtime_error("read_field_binary: truncated payload");
  return ComplexField(grid, std::move(values));
}

ComplexField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_field_binary(in);
}

void write_field_csv(std::ostream& out, const ComplexField& f) { write_csv_impl(out, f); }
void write_field_csv(std::ostream& out, const RealField& f) { write_csv_impl(out, f); }

}  // namespace sdlab
