#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "fraclap/linalg.hpp"

namespace fraclap {

struct GridSpec {
  double a = 0.0, b = 1.0;
  int M = 2, d = 1;
  double h = 0.5;
  int n_x = 0;  // -1 when M-1 is not a power of two (classical paths only)

  int points_per_dim() const { return M - 1; }
  long total_points() const {
    long t = 1;
    for (int k = 0; k < d; ++k) t *= points_per_dim();
    return t;
  }
  bool quantum_compatible() const { return n_x >= 0; }
};

inline GridSpec make_grid(double a, double b, int M, int d) {
  if (!(b > a)) throw dimension_error("domain endpoints must satisfy b > a");
  if (M < 2) throw dimension_error("at least two subintervals required");
  if (d < 1) throw dimension_error("dimension must be positive");
  GridSpec spec;
  spec.a = a;
  spec.b = b;
  spec.M = M;
  spec.d = d;
  spec.h = (b - a) / M;
  spec.n_x = is_pow2(M - 1) ? ilog2(M - 1) : -1;
  return spec;
}

struct GridFunction {
  VectorXd values;
  GridSpec spec;
};

inline MatrixXd shift_plus(int n) {
  MatrixXd s = MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) s(i + 1, i) = 1.0;
  return s;
}

inline MatrixXd shift_minus(int n) { return shift_plus(n).transpose(); }

inline MatrixXd laplacian_1d(const GridSpec& spec) {
  const int n = spec.points_per_dim();
  const double w = 1.0 / (spec.h * spec.h);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 * w;
    if (i + 1 < n) {
      a(i, i + 1) = -w;
      a(i + 1, i) = -w;
    }
  }
  return a;
}

constexpr long kDenseDimCap = 1L << 12;

inline MatrixXd laplacian_dd_dense(const GridSpec& spec) {
  const long total = spec.total_points();
  if (total > kDenseDimCap) throw dimension_error("dense assembly exceeds the dimension cap");
  const MatrixXd a1 = laplacian_1d(spec);
  const int n = spec.points_per_dim();
  MatrixXd out = MatrixXd::Zero(total, total);
  for (int axis = 0; axis < spec.d; ++axis) {
    MatrixXd term = MatrixXd::Identity(1, 1);
    // factor order slowest-first: I^(d-1-axis) x A x I^(axis); axis 0 is fastest
    for (int k = spec.d - 1; k >= 0; --k) {
      const MatrixXd& f =
          (k == axis) ? a1 : MatrixXd(MatrixXd::Identity(n, n));
      term = kron(term, f).eval();
    }
    out += term;
  }
  return out;
}

inline VectorXd apply_laplacian_dd(const GridSpec& spec, const VectorXd& v) {
  const MatrixXd a1 = laplacian_1d(spec);
  const int n = spec.points_per_dim();
  VectorXd out = VectorXd::Zero(v.size());
  long stride = 1;
  for (int axis = 0; axis < spec.d; ++axis) {
    VectorXd part = v;
    apply_along_axis(a1, part, n, stride);
    out += part;
    stride *= n;
  }
  return out;
}

struct SineEigenpairs {
  VectorXd d;  // ascending 1d eigenvalues
  MatrixXd p;  // symmetric orthogonal sine matrix
};

inline SineEigenpairs sine_eigenpairs(const GridSpec& spec) {
  const int n = spec.points_per_dim();
  const int m = spec.M;
  SineEigenpairs out;
  out.d.resize(n);
  out.p.resize(n, n);
  const double pi = std::numbers::pi;
  for (int j = 1; j <= n; ++j) {
    const double sj = std::sin(pi * j / (2.0 * m));
    out.d(j - 1) = 4.0 / (spec.h * spec.h) * sj * sj;
    for (int k = 1; k <= n; ++k)
      out.p(j - 1, k - 1) = std::sqrt(2.0 / m) * std::sin(pi * j * k / m);
  }
  return out;
}

// eigenvalues of the Kronecker sum, lexicographic over (j_1, ..., j_d), j_1 fastest
inline VectorXd kron_sum_eigenvalues(const GridSpec& spec) {
  const VectorXd d1 = sine_eigenpairs(spec).d;
  const int n = spec.points_per_dim();
  VectorXd out(spec.total_points());
  for (long idx = 0; idx < out.size(); ++idx) {
    long rem = idx;
    double acc = 0.0;
    for (int k = 0; k < spec.d; ++k) {
      acc += d1(rem % n);
      rem /= n;
    }
    out(idx) = acc;
  }
  return out;
}

using ScalarField = std::function<double(const VectorXd&)>;

inline GridFunction sample_rhs(const ScalarField& f, const GridSpec& spec) {
  const int n = spec.points_per_dim();
  GridFunction gf;
  gf.spec = spec;
  gf.values.resize(spec.total_points());
  VectorXd x(spec.d);
  for (long idx = 0; idx < gf.values.size(); ++idx) {
    long rem = idx;
    for (int k = 0; k < spec.d; ++k) {
      x(k) = spec.a + (rem % n + 1) * spec.h;
      rem /= n;
    }
    gf.values(idx) = f(x);
  }
  return gf;
}

inline double discrete_l2_norm(const GridFunction& u) {
  return std::pow(u.spec.h, u.spec.d / 2.0) * u.values.norm();
}

inline ScalarField field_sin(const GridSpec& spec) {
  return [spec](const VectorXd& x) {
    double v = 1.0;
    for (int k = 0; k < x.size(); ++k)
      v *= std::sin(std::numbers::pi * (x(k) - spec.a) / (spec.b - spec.a));
    return v;
  };
}

inline ScalarField field_ones() {
  return [](const VectorXd&) { return 1.0; };
}

inline ScalarField field_zero() {
  return [](const VectorXd&) { return 0.0; };
}

inline ScalarField field_gaussian_bump(const GridSpec& spec) {
  return [spec](const VectorXd& x) {
    const double c = 0.5 * (spec.a + spec.b);
    double q = 0.0;
    for (int k = 0; k < x.size(); ++k) q += (x(k) - c) * (x(k) - c);
    return std::exp(-50.0 * q);
  };
}

}  // namespace fraclap
