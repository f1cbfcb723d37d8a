#pragma once

#include <cmath>

#include "fraclap/blockenc.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/ratapprox.hpp"

namespace fraclap {

struct CombinedSystem {
  MatrixXd h, h_tilde;
  VectorXd f, f_tilde, c_tilde;
  int n_r = 0, n_x = 0, d = 1;
  GridSpec spec;
  RationalModel model;
  long block_len() const { return spec.total_points(); }
  long n_blocks() const { return 1L << n_r; }
};

inline CombinedSystem build_combined(const GridSpec& spec, const RationalModel& model,
                                     const GridFunction& f) {
  if (!spec.quantum_compatible())
    throw dimension_error("interior point count must be a power of two");
  const long n_r_terms = std::max(1, model.n_r);
  if (!is_pow2(n_r_terms)) throw dimension_error("term count must be a power of two");
  const long n = spec.total_points();
  if (f.values.size() != n) throw dimension_error("right-hand side length mismatch");
  if (n_r_terms * n > kDenseDimCap)
    throw dimension_error("combined system exceeds the dense dimension cap");

  CombinedSystem sys;
  sys.spec = spec;
  sys.model = model;
  sys.d = spec.d;
  sys.n_x = spec.n_x;
  sys.n_r = ilog2(n_r_terms);

  VectorXd b = VectorXd::Zero(n_r_terms);
  for (int l = 0; l < model.n_r; ++l) b(l) = model.b(l);
  const MatrixXd a = laplacian_dd_dense(spec);
  sys.h = kron(MatrixXd::Identity(n_r_terms, n_r_terms), a) +
          kron(MatrixXd(b.asDiagonal()), MatrixXd::Identity(n, n));
  const long nh = n_r_terms * n;
  sys.h_tilde = MatrixXd::Identity(2 * nh, 2 * nh);
  sys.h_tilde.topLeftCorner(nh, nh) = sys.h;

  sys.f.resize(nh);
  for (long l = 0; l < n_r_terms; ++l) sys.f.segment(l * n, n) = f.values;
  sys.c_tilde = VectorXd::Zero(2 * n_r_terms);
  for (int l = 0; l < model.n_r; ++l) sys.c_tilde(l) = model.c(l);
  sys.c_tilde(n_r_terms) = model.c_inf;
  sys.f_tilde = VectorXd::Zero(2 * nh);
  for (long l = 0; l < 2 * n_r_terms; ++l)
    if (sys.c_tilde(l) != 0.0) sys.f_tilde.segment(l * n, n) = sys.c_tilde(l) * f.values;
  return sys;
}

// the identity half is passed through, so trailing blocks stay exactly zero
inline VectorXd solve_tilde(const CombinedSystem& sys) {
  const long nh = sys.h.rows();
  VectorXd x(2 * nh);
  x.head(nh) = Eigen::PartialPivLU<MatrixXd>(sys.h).solve(sys.f_tilde.head(nh));
  x.tail(nh) = sys.f_tilde.tail(nh);
  return x;
}

inline GridFunction recover_hadamard(const VectorXd& u_tilde, const CombinedSystem& sys) {
  const long n = sys.block_len(), nb = 2 * sys.n_blocks();
  if (u_tilde.size() != nb * n) throw dimension_error("solution vector length mismatch");
  GridFunction out;
  out.spec = sys.spec;
  out.values = VectorXd::Zero(n);
  for (long l = 0; l < nb; ++l) out.values += u_tilde.segment(l * n, n);
  return out;
}

struct Eta1Estimate {
  double measured = 0.0;
  double bound = 0.0;
};

inline Eta1Estimate eta1_estimate(const VectorXd& u_tilde, const VectorXd& u_h,
                                  const RationalModel& model, int d) {
  if (model.n_active < 1) throw structure_error("estimate needs at least one pole term");
  const double un = u_h.norm();
  if (un <= 0.0) throw recovery_error("zero solution has no repetition estimate");
  const double n_r_terms = static_cast<double>(std::max(1, model.n_r));
  const double c_norm = std::sqrt(model.c.squaredNorm() + model.c_inf * model.c_inf);
  Eta1Estimate est;
  est.measured = std::sqrt(2.0 * n_r_terms) * u_tilde.norm() / un;
  est.bound = std::sqrt(2.0 * n_r_terms) * c_norm * (model.b_min() + 8.0 * d) / model.c(0);
  if (est.measured > est.bound * (1.0 + 1e-6))
    throw bound_error(est.bound - est.measured, "repetition estimate exceeds its bound");
  return est;
}

}  // namespace fraclap
