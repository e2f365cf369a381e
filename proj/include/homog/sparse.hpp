#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Symmetric sparse matrix. Entries are accumulated as lower-triangle
/// triplets and compressed into a full-pattern CSR for products.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  static SparseSymmetric from_triplets(int n, const std::vector<Triplet>& ts) {
    SparseSymmetric m;
    m.n_ = n;
    std::map<std::pair<int, int>, double> acc;
    for (const auto& t : ts) {
      require(t.row >= 0 && t.row < n && t.col >= 0 && t.col < n,
              ErrorCode::dimension_mismatch, "triplet index out of range");
      int r = std::max(t.row, t.col);
      int c = std::min(t.row, t.col);
      acc[{r, c}] += t.value;
    }
    std::map<int, std::map<int, double>> rows;
    for (const auto& [rc, v] : acc) {
      rows[rc.first][rc.second] = v;
      if (rc.first != rc.second) rows[rc.second][rc.first] = v;
    }
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [r, cols] : rows)
      m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<int>(cols.size());
    for (int i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    m.col_idx_.resize(static_cast<std::size_t>(m.row_ptr_[n]));
    m.values_.resize(static_cast<std::size_t>(m.row_ptr_[n]));
    for (const auto& [r, cols] : rows) {
      int at = m.row_ptr_[r];
      for (const auto& [c, v] : cols) {
        m.col_idx_[static_cast<std::size_t>(at)] = c;
        m.values_[static_cast<std::size_t>(at)] = v;
        ++at;
      }
    }
    return m;
  }

  static SparseSymmetric diagonal(const std::vector<double>& d) {
    std::vector<Triplet> ts;
    ts.reserve(d.size());
    for (int i = 0; i < static_cast<int>(d.size()); ++i)
      ts.push_back({i, i, d[i]});
    return from_triplets(static_cast<int>(d.size()), ts);
  }

  int dim() const { return n_; }

  double entry(int i, int j) const {
    for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
      if (col_idx_[static_cast<std::size_t>(at)] == j)
        return values_[static_cast<std::size_t>(at)];
    return 0.0;
  }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
        s += values_[static_cast<std::size_t>(at)] *
             x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(at)])];
      y[static_cast<std::size_t>(i)] = s;
    }
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
  }

  double quadratic_form(const std::vector<double>& x) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      double row = 0.0;
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
        row += values_[static_cast<std::size_t>(at)] *
               x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(at)])];
      s += x[static_cast<std::size_t>(i)] * row;
    }
    return s;
  }

  std::vector<double> diagonal_values() const {
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = entry(i, i);
    return d;
  }

  bool is_diagonal() const {
    for (int i = 0; i < n_; ++i)
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
        if (col_idx_[static_cast<std::size_t>(at)] != i &&
            values_[static_cast<std::size_t>(at)] != 0.0)
          return false;
    return true;
  }

  int bandwidth() const {
    int w = 0;
    for (int i = 0; i < n_; ++i)
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
        w = std::max(w, std::abs(i - col_idx_[static_cast<std::size_t>(at)]));
    return w;
  }

  /// Coordinate text format: "n n nnz" then 1-based "i j value" lines for the
  /// lower triangle.
  void write_coordinate(std::ostream& os) const {
    int nnz = 0;
    for (int i = 0; i < n_; ++i)
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at)
        if (col_idx_[static_cast<std::size_t>(at)] <= i) ++nnz;
    os << n_ << " " << n_ << " " << nnz << "\n";
    char buf[64];
    for (int i = 0; i < n_; ++i) {
      for (int at = row_ptr_[i]; at < row_ptr_[i + 1]; ++at) {
        int j = col_idx_[static_cast<std::size_t>(at)];
        if (j > i) continue;
        std::snprintf(buf, sizeof(buf), "%.17g",
                      values_[static_cast<std::size_t>(at)]);
        os << (i + 1) << " " << (j + 1) << " " << buf << "\n";
      }
    }
  }

  static SparseSymmetric read_coordinate(std::istream& is) {
    int rows = 0, cols = 0, nnz = 0;
    is >> rows >> cols >> nnz;
    require(is.good() && rows == cols && rows > 0 && nnz >= 0,
            ErrorCode::io_failure, "malformed coordinate header");
    std::vector<Triplet> ts;
    ts.reserve(static_cast<std::size_t>(nnz));
    for (int k = 0; k < nnz; ++k) {
      int i = 0, j = 0;
      double v = 0.0;
      is >> i >> j >> v;
      require(!is.fail(), ErrorCode::io_failure, "malformed coordinate entry");
      ts.push_back({i - 1, j - 1, v});
    }
    return from_triplets(rows, ts);
  }

 private:
  int n_ = 0;
  std::vector<int> row_ptr_ = {0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

}  // namespace homog
