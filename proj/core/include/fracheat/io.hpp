#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

namespace fracheat {

/// Shortest round-trip decimal form of x; byte-stable for identical inputs.
std::string format_double(double x);

/// A CSV table with a fixed header and double-valued columns.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<Eigen::VectorXd> columns;
};

/// Writes columns of equal length under the given header names.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns);

/// Reads a CSV produced by write_csv (or any header + numeric rows file).
CsvTable read_csv(const std::filesystem::path& path);

/// Piecewise-linear resampling of (x, y) samples onto query points; zero
/// outside [x.front(), x.back()].  x must be strictly increasing.
Eigen::VectorXd interp_linear_zero(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& query);

}  // namespace fracheat
