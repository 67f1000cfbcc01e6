#include "hetsense/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hetsense/error.hpp"

namespace hetsense {
namespace {

constexpr std::array<char, 4> kMagic{'H', 'S', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, bytes);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), bytes);
  require(bool(in), "truncated matrix file");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double d) { put_le(out, std::bit_cast<std::uint64_t>(d), 8); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le(in, 8)); }

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(std::remove_if(cell.begin(), cell.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               cell.end());
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    require(res.ec == std::errc() && res.ptr == cell.data() + cell.size(),
            "malformed CSV number '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

void write_binary(const std::filesystem::path& path, const MatrixFile& m) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), 4);
  put_le(out, kVersion, 4);
  put_le(out, std::uint64_t(m.data.rows()), 8);
  put_le(out, std::uint64_t(m.data.cols()), 8);
  put_f64(out, m.dt);
  for (Index c = 0; c < m.data.cols(); ++c)
    for (Index r = 0; r < m.data.rows(); ++r) put_f64(out, m.data(r, c));
  require(bool(out), "write failed for " + path.string());
}

MatrixFile read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  require(bool(in) && magic == kMagic, path.string() + " is not a matrix file");
  const auto version = get_le(in, 4);
  require(version == kVersion, "unsupported matrix file version");
  const auto rows = get_le(in, 8);
  const auto cols = get_le(in, 8);
  MatrixFile m;
  m.dt = get_f64(in);
  m.data.resize(Index(rows), Index(cols));
  for (Index c = 0; c < m.data.cols(); ++c)
    for (Index r = 0; r < m.data.rows(); ++r) m.data(r, c) = get_f64(in);
  return m;
}

void write_csv(const std::filesystem::path& path, const MatrixFile& m) {
  std::ofstream out(path);
  require(bool(out), "cannot open " + path.string() + " for writing");
  out << "rows,cols,dt\n"
      << m.data.rows() << ',' << m.data.cols() << ',' << format_double(m.dt) << '\n';
  for (Index r = 0; r < m.data.rows(); ++r) {
    for (Index c = 0; c < m.data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m.data(r, c));
    }
    out << '\n';
  }
  require(bool(out), "write failed for " + path.string());
}

MatrixFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(bool(in), "cannot open " + path.string());
  std::string line;
  require(bool(std::getline(in, line)), "empty CSV matrix file");
  require(bool(std::getline(in, line)), "CSV matrix file lacks header values");
  const auto header = parse_csv_line(line);
  require(header.size() == 3, "CSV header must hold rows,cols,dt");
  const auto rows = Index(header[0]);
  const auto cols = Index(header[1]);
  MatrixFile m;
  m.dt = header[2];
  m.data.resize(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    require(bool(std::getline(in, line)), "CSV matrix file has too few rows");
    const auto vals = parse_csv_line(line);
    require(Index(vals.size()) == cols, "CSV row has wrong number of columns");
    for (Index c = 0; c < cols; ++c) m.data(r, c) = vals[std::size_t(c)];
  }
  return m;
}

}  // namespace

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::Binary;
}

void write_matrix(const std::filesystem::path& path, const MatrixFile& m) {
  write_matrix(path, m, format_for_path(path));
}

void write_matrix(const std::filesystem::path& path, const MatrixFile& m,
                  MatrixFormat format) {
  if (format == MatrixFormat::Csv)
    write_csv(path, m);
  else
    write_binary(path, m);
}

MatrixFile read_matrix(const std::filesystem::path& path) {
  return format_for_path(path) == MatrixFormat::Csv ? read_csv(path) : read_binary(path);
}

void write_series(const std::filesystem::path& path, const SnapshotSeries& s) {
  s.validate();
  write_matrix(path, {s.matrix(), s.dt});
}

SnapshotSeries read_series(const std::filesystem::path& path) {
  const MatrixFile m = read_matrix(path);
  auto s = SnapshotSeries::from_matrix(m.data, m.dt);
  s.validate();
  return s;
}

}  // namespace hetsense
