#include "inkmetrics/detail/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ink {

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::operator*(const Mat& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("Mat multiply: shape mismatch");
  Mat out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      double v = (*this)(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
    }
  }
  return out;
}

std::vector<double> Mat::col(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<double> Mat::row(std::size_t i) const {
  std::vector<double> out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

EigenDecomposition jacobi_eigen_sym(const Mat& a, double tol, int max_sweeps) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi: matrix not square");
  std::size_t n = a.rows();
  Mat m = a;
  Mat v = Mat::identity(n);

  auto off_diag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diag() <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = m(p, q);
        if (std::fabs(apq) <= tol * 1e-4) continue;
        double app = m(p, p);
        double aqq = m(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m(k, p);
          double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m(p, k);
          double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p);
          double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return diag[i] > diag[j]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    // Fix the sign so the largest-magnitude entry is positive; keeps the
    // decomposition deterministic under benign input reorderings.
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mag = std::fabs(v(i, order[j]));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    double sign = v(arg, order[j]) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = sign * v(i, order[j]);
  }
  return out;
}

namespace detail {

Dim1Result principal_dim1(const std::vector<std::vector<double>>& columns,
                          std::size_t align_col) {
  std::size_t p = columns.size();
  if (p == 0 || columns[0].empty()) return {};
  std::size_t n = columns[0].size();

  Mat z(n, p);
  std::size_t live = 0;
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (double v : columns[j]) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : columns[j]) ss += (v - mean) * (v - mean);
    double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd > 0.0) {
      ++live;
      for (std::size_t i = 0; i < n; ++i) z(i, j) = (columns[j][i] - mean) / sd;
    }  // zero-variance columns stay at z = 0
  }

  Dim1Result out;
  out.scores.assign(n, 0.0);
  if (live == 0 || n < 2) return out;

  Mat corr(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += z(i, a) * z(i, b);
      corr(a, b) = corr(b, a) = s / static_cast<double>(n - 1);
    }

  EigenDecomposition eig = jacobi_eigen_sym(corr);
  double trace = 0.0;
  for (double v : eig.values) trace += std::max(v, 0.0);
  if (trace <= 0.0) return out;
  out.variance_share = std::max(eig.values[0], 0.0) / trace;

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += z(i, j) * eig.vectors(j, 0);
    out.scores[i] = s;
  }

  // Align sign with the requested column.
  if (align_col < p) {
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += out.scores[i] * z(i, align_col);
    if (cov < 0.0)
      for (double& v : out.scores) v = -v;
  }
  return out;
}

}  // namespace detail

std::vector<double> solve_linear(Mat a, std::vector<double> b) {
  std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (std::fabs(a(pivot, col)) < 1e-300)
      throw std::invalid_argument("solve: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace ink
