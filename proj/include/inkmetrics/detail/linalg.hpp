#pragma once

#include <cstddef>
#include <vector>

namespace ink {

/// Dense row-major matrix. Small sizes only (the metric table never exceeds
/// a few hundred rows by fourteen columns), so no blocking or views.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Mat transposed() const;
  Mat operator*(const Mat& rhs) const;

  std::vector<double> col(std::size_t j) const;
  std::vector<double> row(std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Mat vectors;                 // column j pairs with values[j]
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Deterministic and accurate to ~1e-14 on the small matrices used here.
EigenDecomposition jacobi_eigen_sym(const Mat& a, double tol = 1e-12,
                                    int max_sweeps = 128);

/// Solve a x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(Mat a, std::vector<double> b);

namespace detail {

struct Dim1Result {
  std::vector<double> scores;
  double variance_share = 0.0;
};

/// First principal component of a handful of columns: z-score, correlation
/// matrix, leading eigenvector. Zero-variance columns contribute nothing;
/// the score sign is chosen to correlate positively with align_col.
Dim1Result principal_dim1(const std::vector<std::vector<double>>& columns,
                          std::size_t align_col);

}  // namespace detail
}  // namespace ink
