#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "hetsense/workspace.hpp"

namespace hetsense {

/// Snapshot matrix file format.
///
/// A matrix with N rows and T+1 columns (one snapshot per column) plus the
/// sampling interval dt.
///
/// Binary (.bin, any extension other than .csv):
///   offset 0   4 bytes  magic "HSMX"
///   offset 4   u32      format version (1)
///   offset 8   u64      rows N
///   offset 16  u64      cols T+1
///   offset 24  f64      dt
///   offset 32  f64[N*(T+1)] values, column-major
/// Every integer and IEEE-754 double is stored little-endian regardless of
/// host byte order.
///
/// CSV (.csv):
///   line 1: "rows,cols,dt"
///   line 2: the three header values
///   then N lines of T+1 comma-separated values (row i of the matrix), written
///   with 17 significant digits so doubles round-trip exactly.
struct MatrixFile {
  Eigen::MatrixXd data;
  double dt = 1.0;
};

enum class MatrixFormat { Binary, Csv };

MatrixFormat format_for_path(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const MatrixFile& m);
void write_matrix(const std::filesystem::path& path, const MatrixFile& m,
                  MatrixFormat format);
MatrixFile read_matrix(const std::filesystem::path& path);

void write_series(const std::filesystem::path& path, const SnapshotSeries& s);
SnapshotSeries read_series(const std::filesystem::path& path);

}  // namespace hetsense
