#pragma once

#include <iosfwd>
#include <string>

#include "sdlab/grid.hpp"

namespace sdlab {

// Binary layout: n, N as uint64 LE, L as float64 LE, then row-major
// interleaved (re, im) float64 LE. Real fields are written with im = 0.
void write_field_binary(std::ostream& out, const ComplexField& f);
void write_field_binary(std::ostream& out, const RealField& f);
void write_field_binary(const std::string& path, const ComplexField& f);
void write_field_binary(const std::string& path, const RealField& f);
ComplexField read_field_binary(std::istream& in);
ComplexField read_field_binary(const std::string& path);

// Columns x1..xn, re, im.
void write_field_csv(std::ostream& out, const ComplexField& f);
void write_field_csv(std::ostream& out, const RealField& f);

}  // namespace sdlab
