#include "fracheat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracheat {

std::string format_double(double x) {
  char buf[40];
  // %.17g round-trips every double; trim to shorter forms when exact
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<Eigen::VectorXd>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows)
      throw std::invalid_argument("write_csv: ragged columns");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << ',';
    out << header[j];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out << ',';
      out << format_double(columns[j][i]);
    }
    out << '\n';
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_csv: empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::vector<std::vector<double>> cols(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= cols.size())
        throw std::runtime_error("read_csv: row wider than header");
      cols[j++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (j != cols.size())
      throw std::runtime_error("read_csv: row narrower than header");
  }
  for (auto& c : cols)
    t.columns.push_back(Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
  return t;
}

Eigen::VectorXd interp_linear_zero(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& query) {
  if (x.size() != y.size() || x.size() < 1)
    throw std::invalid_argument("interp_linear_zero: bad sample arrays");
  for (Eigen::Index i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw std::invalid_argument("interp_linear_zero: x not increasing");
  Eigen::VectorXd out(query.size());
  for (Eigen::Index k = 0; k < query.size(); ++k) {
    const double q = query[k];
    if (q < x[0] || q > x[x.size() - 1]) {
      out[k] = 0.0;
      continue;
    }
    // binary search for the segment containing q
    Eigen::Index lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (x[mid] <= q ? lo : hi) = mid;
    }
    if (x.size() == 1) {
      out[k] = y[0];
    } else {
      const double w = (q - x[lo]) / (x[hi] - x[lo]);
      out[k] = (1.0 - w) * y[lo] + w * y[hi];
    }
  }
  return out;
}

}  // namespace fracheat
