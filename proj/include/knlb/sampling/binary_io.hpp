#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "knlb/sampling/sampling.hpp"

namespace knlb::io {

// 32-byte little-endian header shared by every binary dump:
//   bytes  0..3   magic "KNLB"
//   bytes  4..5   format version (u16)
//   bytes  6..7   distribution tag (u16; 1 gaussian, 2 sphere, 0xFFFF matrix)
//   bytes  8..15  rows n (u64)
//   bytes 16..23  cols d (u64)
//   bytes 24..31  master seed (u64)
// followed by n * d float64 values, row-major.
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kMatrixDistributionTag = 0xFFFF;

struct BinaryHeader {
  std::uint16_t version = kFormatVersion;
  std::uint16_t distribution = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t seed = 0;
};

void write_header(std::ostream& os, const BinaryHeader& h);
BinaryHeader read_header(std::istream& is);

void write_f64(std::ostream& os, const double* v, std::size_t count);
void read_f64(std::istream& is, double* v, std::size_t count);

void write_data_matrix(std::ostream& os, const DataMatrix& x);
DataMatrix read_data_matrix(std::istream& is);

void write_data_matrix_file(const std::string& path, const DataMatrix& x);
DataMatrix read_data_matrix_file(const std::string& path);

}  // namespace knlb::io
