#include "knlb/sampling/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace knlb::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated binary dump");
  return v;
}

}  // namespace

void write_header(std::ostream& os, const BinaryHeader& h) {
  os.write("KNLB", 4);
  put<std::uint16_t>(os, h.version);
  put<std::uint16_t>(os, h.distribution);
  put<std::uint64_t>(os, h.rows);
  put<std::uint64_t>(os, h.cols);
  put<std::uint64_t>(os, h.seed);
}

BinaryHeader read_header(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "KNLB", 4) != 0) throw std::runtime_error("not a KNLB binary dump");
  BinaryHeader h;
  h.version = get<std::uint16_t>(is);
  if (h.version != kFormatVersion) throw std::runtime_error("unsupported KNLB format version");
  h.distribution = get<std::uint16_t>(is);
  h.rows = get<std::uint64_t>(is);
  h.cols = get<std::uint64_t>(is);
  h.seed = get<std::uint64_t>(is);
  return h;
}

void write_f64(std::ostream& os, const double* v, std::size_t count) {
  os.write(reinterpret_cast<const char*>(v), std::streamsize(count * sizeof(double)));
}

void read_f64(std::istream& is, double* v, std::size_t count) {
  is.read(reinterpret_cast<char*>(v), std::streamsize(count * sizeof(double)));
  if (!is) throw std::runtime_error("truncated binary dump");
}

void write_data_matrix(std::ostream& os, const DataMatrix& x) {
  write_header(os, {kFormatVersion, std::uint16_t(x.meta().distribution), x.rows(), x.cols(), x.meta().seed});
  write_f64(os, x.data(), x.rows() * x.cols());
}

DataMatrix read_data_matrix(std::istream& is) {
  const BinaryHeader h = read_header(is);
  if (h.distribution != std::uint16_t(DistributionKind::gaussian) &&
      h.distribution != std::uint16_t(DistributionKind::sphere))
    throw std::runtime_error("binary dump does not hold a data matrix");
  std::vector<double> v(h.rows * h.cols);
  read_f64(is, v.data(), v.size());
  return DataMatrix(h.rows, h.cols, std::move(v), {DistributionKind(h.distribution), h.seed, 0});
}

void write_data_matrix_file(const std::string& path, const DataMatrix& x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_data_matrix(os, x);
}

DataMatrix read_data_matrix_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_data_matrix(is);
}

}  // namespace knlb::io
