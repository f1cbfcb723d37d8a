#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fraclap/errors.hpp"

namespace fraclap {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

inline bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline long next_pow2(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline int ilog2(long n) {
  int k = 0;
  while ((1L << k) < n) ++k;
  return k;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = decltype(typename A::Scalar{} * typename B::Scalar{});
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>
      svd(m);
  return svd.singularValues()(0);
}

// exp(c * H) for Hermitian H
inline MatrixXcd expm_hermitian(const MatrixXcd& h, cd c) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  VectorXcd phases = (c * es.eigenvalues().array().cast<cd>()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline MatrixXcd expm_hermitian(const MatrixXd& h, cd c) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  VectorXcd phases = (c * es.eigenvalues().array().cast<cd>()).exp();
  return es.eigenvectors().cast<cd>() * phases.asDiagonal() *
         es.eigenvectors().transpose().cast<cd>();
}

// applies op to every length-len fiber along the axis with the given stride
template <typename Scalar>
void apply_along_axis(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& op,
                      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, long len, long stride) {
  const long total = v.size();
  const long block = len * stride;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fiber(len);
  for (long base = 0; base < total; base += block)
    for (long off = 0; off < stride; ++off) {
      for (long i = 0; i < len; ++i) fiber(i) = v(base + off + i * stride);
      fiber = (op * fiber).eval();
      for (long i = 0; i < len; ++i) v(base + off + i * stride) = fiber(i);
    }
}

// least-squares slope of y against x
inline double fit_slope(const VectorXd& x, const VectorXd& y) {
  const double xm = x.mean(), ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  return (x.array() - xm).cwiseProduct(y.array() - ym).sum() / sxx;
}

inline double fit_r2(const VectorXd& x, const VectorXd& y) {
  const double slope = fit_slope(x, y);
  const double icpt = y.mean() - slope * x.mean();
  const double ss_res = (y.array() - slope * x.array() - icpt).square().sum();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

}  // namespace fraclap
