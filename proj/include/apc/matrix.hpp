#pragma once

#include <cstddef>
#include <vector>

#include "apc/util.hpp"

namespace apc {

// Row-major dense matrix of doubles. All model arithmetic runs at 64 bits.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// Non-owning view of a row-major block inside a flat parameter vector.
struct MatView {
  double* p = nullptr;
  int rows = 0;
  int cols = 0;

  double* row(int i) const { return p + static_cast<std::size_t>(i) * cols; }
  double& at(int i, int j) const { return p[static_cast<std::size_t>(i) * cols + j]; }
  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

struct ConstMatView {
  const double* p = nullptr;
  int rows = 0;
  int cols = 0;

  const double* row(int i) const { return p + static_cast<std::size_t>(i) * cols; }
  double at(int i, int j) const { return p[static_cast<std::size_t>(i) * cols + j]; }
  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// y += x * W, with x of length `in` and W of shape in x out.
inline void mat_vec_acc(const double* x, ConstMatView w, double* y) {
  for (int i = 0; i < w.rows; ++i) {
    double xi = x[i];
    if (xi == 0.0) continue;
    axpy(xi, w.row(i), y, w.cols);
  }
}

// y += x * W^T, with x of length `out` and W of shape in x out.
inline void mat_vec_t_acc(const double* x, ConstMatView w, double* y) {
  for (int i = 0; i < w.rows; ++i) y[i] += dot(w.row(i), x, w.cols);
}

}  // namespace apc
