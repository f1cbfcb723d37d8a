#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fraclap/qop.hpp"
#include "fraclap/refsolve.hpp"
#include "fraclap/system.hpp"

namespace fraclap {

enum class TrotterDepth { outer, inner, full };

struct SchrodConfig {
  double t = 0.0;  // evolution time; nonpositive requests the accuracy-driven default
  double r = 9.0;
  long n_p = 64;
  long n_t = 0;  // 0 selects exact evolution
  double p_star = 0.5;
  double delta = 1e-2;
  TrotterDepth depth = TrotterDepth::outer;
  double dp() const { return 2.0 * std::numbers::pi * r / static_cast<double>(n_p); }
  double p_at(long k) const { return -std::numbers::pi * r + k * dp(); }
};

inline void validate(const SchrodConfig& cfg) {
  if (std::exp(-std::numbers::pi * cfg.r) > 1e-12)
    throw structure_error("warping radius too small for the cutoff");
  if (cfg.n_p < 2 || !is_pow2(cfg.n_p)) throw structure_error("p grid must be a power of two");
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0) throw structure_error("accuracy must lie in (0,1)");
}

struct HamiltonianFactors {
  MatrixXd h_f;      // [[-H~, I/T],[0, 0]]
  MatrixXd h1;       // Hermitian part
  MatrixXcd h2;      // H_f = h1 + i h2
  MatrixXd h_tilde;
  double t = 1.0;
  // pieces for the factorized Trotter step; empty unless built from a system
  MatrixXd a_dd;
  VectorXd b;
  long n_terms = 0;
  long dim() const { return h_f.rows(); }
};

inline HamiltonianFactors build_augmented(const MatrixXd& h_tilde, double t) {
  if (t <= 0.0) throw structure_error("evolution time must be positive");
  const long n = h_tilde.rows();
  HamiltonianFactors fac;
  fac.t = t;
  fac.h_tilde = h_tilde;
  fac.h_f = MatrixXd::Zero(2 * n, 2 * n);
  fac.h_f.topLeftCorner(n, n) = -h_tilde;
  fac.h_f.topRightCorner(n, n) = MatrixXd::Identity(n, n) / t;
  fac.h1 = 0.5 * (fac.h_f + fac.h_f.transpose());
  fac.h2 = MatrixXcd::Zero(2 * n, 2 * n);
  fac.h2.topRightCorner(n, n) = cd(0, -0.5 / t) * MatrixXcd::Identity(n, n);
  fac.h2.bottomLeftCorner(n, n) = cd(0, 0.5 / t) * MatrixXcd::Identity(n, n);
  return fac;
}

inline HamiltonianFactors build_augmented(const CombinedSystem& sys, double t) {
  HamiltonianFactors fac = build_augmented(sys.h_tilde, t);
  fac.a_dd = laplacian_dd_dense(sys.spec);
  fac.b = VectorXd::Zero(sys.n_blocks());
  for (int l = 0; l < sys.model.n_r; ++l) fac.b(l) = sys.model.b(l);
  fac.n_terms = sys.n_blocks();
  return fac;
}

inline VectorXd fourier_modes(const SchrodConfig& cfg) {
  VectorXd mu(cfg.n_p);
  for (long l = 0; l < cfg.n_p; ++l)
    mu(l) = (static_cast<double>(l) - 0.5 * cfg.n_p) / cfg.r;
  return mu;
}

struct WarpedState {
  VectorXcd amplitudes;  // |p point> (x) |augmentation> (x) |system>
  double t = 0.0;
  long n_p = 0;
  long block = 0;
  Eigen::Ref<const VectorXcd> at(long k) const {
    return amplitudes.segment(k * block, block);
  }
};

inline WarpedState init_warped(const HamiltonianFactors& fac, const SchrodConfig& cfg,
                               const VectorXd& f_tilde) {
  validate(cfg);
  if (2 * f_tilde.size() != fac.dim()) throw dimension_error("source vector length mismatch");
  VectorXcd vf0 = VectorXcd::Zero(fac.dim());
  vf0.tail(f_tilde.size()) = fac.t * f_tilde.cast<cd>();
  WarpedState st;
  st.n_p = cfg.n_p;
  st.block = fac.dim();
  st.amplitudes.resize(cfg.n_p * st.block);
  for (long k = 0; k < cfg.n_p; ++k)
    st.amplitudes.segment(k * st.block, st.block) = std::exp(-std::abs(cfg.p_at(k))) * vf0;
  return st;
}

namespace detail {

// basis matrix entries are (-1)^j omega^(jl); inverse carries the 1/N_p factor
inline VectorXcd phi_transform(const VectorXcd& amps, long n_p, long block, bool inverse) {
  std::vector<cd> w(n_p);
  for (long q = 0; q < n_p; ++q) {
    const double ang = 2.0 * std::numbers::pi * q / static_cast<double>(n_p);
    w[q] = cd(std::cos(ang), std::sin(ang));
  }
  VectorXcd out = VectorXcd::Zero(amps.size());
  for (long l = 0; l < n_p; ++l) {
    auto acc = out.segment(l * block, block);
    for (long j = 0; j < n_p; ++j) {
      cd c = w[(j * l) % n_p];
      if ((inverse ? j : l) & 1) c = -c;
      if (inverse) c = std::conj(c) / static_cast<double>(n_p);
      acc += c * amps.segment(j * block, block);
    }
  }
  return out;
}

}  // namespace detail

inline VectorXcd to_coefficients(const WarpedState& st) {
  return detail::phi_transform(st.amplitudes, st.n_p, st.block, true);
}

inline VectorXcd from_coefficients(const VectorXcd& coeffs, long n_p, long block) {
  return detail::phi_transform(coeffs, n_p, block, false);
}

inline WarpedState evolve_exact(const WarpedState& st, const HamiltonianFactors& fac,
                                const SchrodConfig& cfg) {
  const double tau = cfg.t - st.t;
  const VectorXd mu = fourier_modes(cfg);
  VectorXcd coeffs = to_coefficients(st);
  for (long l = 0; l < st.n_p; ++l) {
    const MatrixXcd g = mu(l) * fac.h1.cast<cd>() - fac.h2;
    coeffs.segment(l * st.block, st.block) =
        expm_hermitian(g, cd(0, -tau)) * coeffs.segment(l * st.block, st.block);
  }
  WarpedState out = st;
  out.amplitudes = from_coefficients(coeffs, st.n_p, st.block);
  out.t = cfg.t;
  return out;
}

// (I (x) W^(-N_p/2)) SEL(W) through controlled powers of W
inline QOpPtr select_oracle(const MatrixXcd& w, int n_p_qubits) {
  const int nc = ilog2(w.rows());
  const int nq = n_p_qubits + nc;
  std::vector<QOpPtr> chain;
  MatrixXcd pw = w;
  for (int j = 0; j < n_p_qubits; ++j) {
    chain.push_back(controlled_chunk(nq, nc + j, make_dense(pw)));
    pw = (pw * pw).eval();
  }
  MatrixXcd half = w;
  for (int j = 1; j < n_p_qubits; ++j) half = (half * half).eval();
  chain.push_back(tensor(make_identity(n_p_qubits), adjoint_of(make_dense(half))));
  std::reverse(chain.begin(), chain.end());
  return product(std::move(chain));
}

namespace detail {

inline MatrixXcd trotter_w(const HamiltonianFactors& fac, double r, TrotterDepth depth) {
  if (depth == TrotterDepth::outer) return expm_hermitian(fac.h1, cd(0, r));
  const long n = fac.dim() / 2;
  const double rp = r / (2.0 * fac.t);
  MatrixXcd u1 = MatrixXcd::Zero(fac.dim(), fac.dim());
  u1.topLeftCorner(n, n) = std::cos(rp) * MatrixXcd::Identity(n, n);
  u1.bottomRightCorner(n, n) = std::cos(rp) * MatrixXcd::Identity(n, n);
  u1.topRightCorner(n, n) = cd(0, std::sin(rp)) * MatrixXcd::Identity(n, n);
  u1.bottomLeftCorner(n, n) = cd(0, std::sin(rp)) * MatrixXcd::Identity(n, n);
  MatrixXcd eh;
  if (depth == TrotterDepth::inner) {
    eh = expm_hermitian(fac.h_tilde, cd(0, -r));
  } else {
    if (fac.a_dd.size() == 0)
      throw dimension_error("factorized stepping needs the assembled system");
    const long nb = fac.n_terms, ng = fac.a_dd.rows(), nh = nb * ng;
    const MatrixXcd ea = expm_hermitian(fac.a_dd, cd(0, -r));
    MatrixXcd eb = MatrixXcd::Zero(nh, nh);
    for (long l = 0; l < nb; ++l) {
      const cd ph = std::exp(cd(0, -r * fac.b(l)));
      eb.block(l * ng, l * ng, ng, ng) = ph * ea;
    }
    eh = MatrixXcd::Identity(2 * nh, 2 * nh);
    eh.topLeftCorner(nh, nh) = eb;
    eh.bottomRightCorner(nh, nh) *= std::exp(cd(0, -r));
  }
  MatrixXcd u2 = MatrixXcd::Identity(fac.dim(), fac.dim());
  u2.topLeftCorner(n, n) = eh;
  return u2 * u1;
}

}  // namespace detail

inline WarpedState evolve_trotter(const WarpedState& st, const HamiltonianFactors& fac,
                                  const SchrodConfig& cfg, TrotterDepth depth) {
  if (cfg.n_t < 1) throw structure_error("step count must be positive");
  const double tau = cfg.t - st.t;
  const double dt = tau / static_cast<double>(cfg.n_t);
  const double r = -dt / cfg.r;
  const double a = dt / (2.0 * fac.t);
  const int npq = ilog2(st.n_p);
  const int nc = ilog2(st.block);

  const QOpPtr v1 = select_oracle(detail::trotter_w(fac, r, depth), npq);
  MatrixXcd ry(2, 2);
  ry << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
  const QOpPtr v2 =
      tensor(make_identity(npq), tensor(make_dense(std::move(ry)), make_identity(nc - 1)));

  VectorXcd coeffs = to_coefficients(st);
  for (long step = 0; step < cfg.n_t; ++step) {
    v1->apply_to(coeffs, false);
    v2->apply_to(coeffs, false);
  }
  WarpedState out = st;
  out.amplitudes = from_coefficients(coeffs, st.n_p, st.block);
  out.t = cfg.t;
  return out;
}

struct VfRecovery {
  MatrixXcd candidates;  // one column per admissible grid point
  VectorXd p;
  VectorXcd consensus;
  long k0 = 0;
  double spread4 = 0.0;
  double boundary_ratio = 0.0;
};

inline VfRecovery recover_vf(const WarpedState& st, const SchrodConfig& cfg) {
  std::vector<long> ks;
  long k0 = -1;
  for (long k = 0; k < st.n_p; ++k) {
    const double p = cfg.p_at(k);
    if (p > cfg.p_star) {
      ks.push_back(k);
      if (k0 < 0 && p >= cfg.p_star + cfg.dp()) k0 = k;
    }
  }
  if (ks.empty() || k0 < 0) throw recovery_error("no grid points above the threshold");
  VfRecovery rec;
  rec.candidates.resize(st.block, static_cast<long>(ks.size()));
  rec.p.resize(static_cast<long>(ks.size()));
  long col0 = 0;
  for (long i = 0; i < static_cast<long>(ks.size()); ++i) {
    rec.p(i) = cfg.p_at(ks[i]);
    rec.candidates.col(i) = std::exp(rec.p(i)) * st.at(ks[i]);
    if (ks[i] == k0) col0 = i;
  }
  rec.k0 = k0;
  rec.consensus = rec.candidates.col(col0);
  const double cn = rec.consensus.norm();
  const double amax = st.amplitudes.cwiseAbs().maxCoeff();
  if (cn < 1e-250 || amax <= 0.0)
    throw recovery_error("recovered amplitudes below the numerical floor");
  for (long j = 1; j <= 4 && col0 + j < rec.candidates.cols(); ++j)
    rec.spread4 = std::max(rec.spread4,
                           (rec.candidates.col(col0 + j) - rec.consensus).norm() / cn);
  rec.boundary_ratio = st.at(0).cwiseAbs().maxCoeff() / amax;
  return rec;
}

struct PipelineReport {
  double t = 0.0, r = 0.0, delta = 0.0;
  long n_p = 0, n_t = 0;
  TrotterDepth depth = TrotterDepth::outer;
  double steady_rel_error = 0.0;  // against the classical solve
  double err_vs_uh = 0.0;         // discrete norm against the reference recovery
  double spread4 = 0.0;
  double boundary_ratio = 0.0;
  double t0_identity_dev = 0.0;
  bool doubled = false;
};

struct PipelineResult {
  GridFunction u_q;
  PipelineReport report;
};

inline PipelineResult run_pipeline(const GridSpec& spec, const RationalModel& model,
                                   const GridFunction& f, SchrodConfig cfg) {
  CombinedSystem sys = build_combined(spec, model, f);
  PipelineResult res;
  res.u_q.spec = spec;
  res.u_q.values = VectorXd::Zero(spec.total_points());
  if (sys.f_tilde.norm() == 0.0) {
    res.report.n_p = cfg.n_p;
    return res;
  }
  if (cfg.t <= 0.0)
    cfg.t = condition_number_Htilde(spec, model).norm_inv * std::log(1.0 / cfg.delta);
  validate(cfg);
  const HamiltonianFactors fac = build_augmented(sys, cfg.t);
  VectorXcd vf0 = VectorXcd::Zero(fac.dim());
  vf0.tail(sys.f_tilde.size()) = cfg.t * sys.f_tilde.cast<cd>();

  WarpedState st0;
  double t0_dev = 0.0;
  bool doubled = false;
  for (;;) {
    st0 = init_warped(fac, cfg, sys.f_tilde);
    const VfRecovery rec0 = recover_vf(st0, cfg);
    t0_dev = 0.0;
    for (long i = 0; i < rec0.candidates.cols(); ++i)
      t0_dev = std::max(t0_dev,
                        (rec0.candidates.col(i) - vf0).norm() / vf0.norm());
    if (t0_dev <= 1e-8 || cfg.n_p >= (1L << 14)) break;
    cfg.n_p *= 2;  // spectral resolution guard
    doubled = true;
  }

  const WarpedState stT = cfg.n_t == 0 ? evolve_exact(st0, fac, cfg)
                                       : evolve_trotter(st0, fac, cfg, cfg.depth);
  const VfRecovery rec = recover_vf(stT, cfg);
  const long nh = sys.h_tilde.rows();
  const VectorXcd v_t = rec.consensus.head(nh);
  const VectorXd x = solve_tilde(sys);
  res.report.t = cfg.t;
  res.report.r = cfg.r;
  res.report.delta = cfg.delta;
  res.report.n_p = cfg.n_p;
  res.report.n_t = cfg.n_t;
  res.report.depth = cfg.depth;
  res.report.steady_rel_error = (v_t - x.cast<cd>()).norm() / x.norm();
  res.report.spread4 = rec.spread4;
  res.report.boundary_ratio = rec.boundary_ratio;
  res.report.t0_identity_dev = t0_dev;
  res.report.doubled = doubled;

  res.u_q = recover_hadamard(VectorXd(v_t.real()), sys);
  GridFunction diff = res.u_q;
  diff.values -= rational_solution(model, spec, f).values;
  res.report.err_vs_uh = discrete_l2_norm(diff);
  return res;
}

}  // namespace fraclap
