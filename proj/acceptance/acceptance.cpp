// Acceptance harness: prints one verdict line per criterion with the measured
// values and the pinned tolerances, then a summary. Exit status is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fraclap/fraclap.hpp>

namespace {

using namespace fraclap;
using clock_type = std::chrono::steady_clock;

int failures = 0;

double elapsed(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void verdict(int idx, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << detail << '\n';
  if (!ok) ++failures;
}

template <typename F>
void criterion(int idx, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(idx, false, std::string("unexpected exception: ") + e.what());
  }
}

// shared instance for the combined-system criteria: s=0.5 fitted on the
// spectrum enclosure of the 8-interior-point grid, four terms
RationalModel combined_instance_model(const GridSpec& spec) {
  return fit_model(0.5, enclosure_lo(spec), enclosure_hi(spec), 1e-5);
}

RationalModel log_spaced_poles(const GridSpec& spec, int n_r) {
  const double lo = enclosure_lo(spec), hi = enclosure_hi(spec);
  RationalModel m;
  m.b = VectorXd(n_r);
  for (int l = 0; l < n_r; ++l)
    m.b(l) = n_r == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(l) / (n_r - 1));
  m.c = VectorXd::Ones(n_r);
  m.n_active = m.n_r = n_r;
  m.s = 0.5;
  m.lo = lo;
  m.hi = hi;
  return m;
}

RationalModel zero_shift_pole() {
  RationalModel m;
  m.b = VectorXd::Zero(1);
  m.c = VectorXd::Ones(1);
  m.n_active = m.n_r = 1;
  m.s = 0.5;
  m.lo = 1.0;
  m.hi = 100.0;
  return m;
}

// criterion 1: second order convergence of the fitted solver against the
// continuum solution, d=1, s=0.5, sine data, five grid levels, under 5 s
void criterion_1() {
  const auto t0 = clock_type::now();
  const ConvergenceStudy study = convergence_study(0.5, 1, {8, 16, 32, 64, 128});
  const double el = elapsed(t0);
  const bool ok = study.observed_order >= 1.8 && study.observed_order <= 2.2 && el < 5.0;
  verdict(1, ok,
          "observed order " + fmt(study.observed_order) + " (required [1.8,2.2]), " +
              fmt(el) + " s (limit 5)");
}

// criterion 2: fit quality at s in {0.25,0.5,0.75} on [1,1e4]; sup error at or
// below 1e-6 with at most 16 terms, and log sup error decays linearly in the
// term count with r2 at least 0.95, under 5 s
void criterion_2() {
  const auto t0 = clock_type::now();
  int worst_terms = 0;
  double worst_sup = 0.0, worst_slope = -1e300, worst_r2 = 1.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const RationalModel m = fit_model(s, 1.0, 1e4, 1e-6);
    worst_terms = std::max(worst_terms, m.n_active);
    worst_sup = std::max(worst_sup, m.sup_err);
    std::vector<double> xs, ys;
    for (int k = 2; k <= 16; ++k) {
      const BarycentricForm form = aaa_fit(s, 1.0, 1e4, 0.0, k, 10000, false);
      const RationalModel mk = to_partial_fractions(form, s, 1.0, 1e4);
      const double err = sup_error(mk);
      if (err > 0.0 && mk.n_active > 0) {
        xs.push_back(static_cast<double>(mk.n_active));
        ys.push_back(std::log(err));
      }
      // the decay regression covers the range down to the accuracy target;
      // past it the fit bottoms out in sampling noise
      if (err > 0.0 && err <= 1e-6) break;
    }
    const VectorXd x = Eigen::Map<const VectorXd>(xs.data(), static_cast<long>(xs.size()));
    const VectorXd y = Eigen::Map<const VectorXd>(ys.data(), static_cast<long>(ys.size()));
    worst_slope = std::max(worst_slope, fit_slope(x, y));
    worst_r2 = std::min(worst_r2, fit_r2(x, y));
  }
  const double el = elapsed(t0);
  const bool ok = worst_terms <= 16 && worst_sup <= 1e-6 && worst_slope < 0.0 &&
                  worst_r2 >= 0.95 && el < 5.0;
  verdict(2, ok,
          "sup error " + fmt(worst_sup) + " (limit 1e-6) at " + std::to_string(worst_terms) +
              " terms (limit 16), decay slope " + fmt(worst_slope) + ", r2 " + fmt(worst_r2) +
              " (required >= 0.95), " + fmt(el) + " s (limit 5)");
}

// criterion 3: blocks of the combined solve match the per shift solves scaled
// by the residues within 1e-10; padding blocks are exactly zero
void criterion_3() {
  const GridSpec spec = make_grid(0.0, 1.0, 9, 1);
  const RationalModel model = combined_instance_model(spec);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const VectorXd x = solve_tilde(sys);
  const long n = sys.block_len();
  const long nr = model.n_r;
  double max_dev = 0.0;
  for (long l = 0; l < nr; ++l) {
    const GridFunction ul = solve_shifted(spec, model.b(l), f);
    max_dev = std::max(max_dev, (x.segment(l * n, n) - model.c(l) * ul.values).norm());
  }
  const bool cinf_exact = (x.segment(nr * n, n).array() == (model.c_inf * f.values).array()).all();
  bool tail_zero = true;
  for (long l = nr + 1; l < 2 * nr; ++l)
    tail_zero = tail_zero && (x.segment(l * n, n).array() == 0.0).all();
  const bool ok = max_dev <= 1e-10 && cinf_exact && tail_zero;
  verdict(3, ok,
          "max block deviation " + fmt(max_dev) + " (tol 1e-10), constant block exact: " +
              (cinf_exact ? "yes" : "no") + ", padding blocks zero: " + (tail_zero ? "yes" : "no"));
}

// criterion 4: branch summation of the combined solution reproduces the
// rational solve within 1e-12, under 1 s
void criterion_4() {
  const auto t0 = clock_type::now();
  const GridSpec spec = make_grid(0.0, 1.0, 9, 1);
  const RationalModel model = combined_instance_model(spec);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const GridFunction u_sum = recover_hadamard(solve_tilde(sys), sys);
  const GridFunction u_rat = rational_solution(model, spec, f);
  const double rel = (u_sum.values - u_rat.values).norm() / u_rat.values.norm();
  const double el = elapsed(t0);
  const bool ok = rel <= 1e-12 && el < 1.0;
  verdict(4, ok, "relative deviation " + fmt(rel) + " (tol 1e-12), " + fmt(el) + " s (limit 1)");
}

// criterion 5: every pipeline block encoding over M-1 in {2,4,8}, d in {1,2},
// N_r in {1,2,4} verifies within 1e-9, its scale respects twice the structural
// bound, and the stencil encoding is queried exactly d times
void criterion_5() {
  double max_eps = 0.0;
  double min_alpha_margin = 1e300;
  bool tally_ok = true;
  for (int d : {1, 2}) {
    for (int m_sub : {3, 5, 9}) {
      const GridSpec spec = make_grid(0.0, 1.0, m_sub, d);
      const long n = spec.total_points();
      const MatrixXd a_dense = laplacian_dd_dense(spec);
      const BlockEncoding lap = be_laplacian_dd(spec);
      max_eps = std::max(max_eps, verify_block_encoding(lap, a_dense));
      for (int nr : {1, 2, 4}) {
        const RationalModel model = log_spaced_poles(spec, nr);
        const BlockEncoding diag = be_diagonal_B(model);
        max_eps = std::max(max_eps, verify_block_encoding(diag, MatrixXd(model.b.asDiagonal())));
        const BlockEncoding be = be_Htilde(spec, model);
        MatrixXd h = kron(MatrixXd::Identity(nr, nr), a_dense) +
                     kron(MatrixXd(model.b.asDiagonal()), MatrixXd::Identity(n, n));
        MatrixXd h_tilde = MatrixXd::Identity(2 * nr * n, 2 * nr * n);
        h_tilde.topLeftCorner(nr * n, nr * n) = h;
        max_eps = std::max(max_eps, verify_block_encoding(be, h_tilde));
        const double bound = 2.0 * (4.0 * d / (spec.h * spec.h) + model.b_max());
        min_alpha_margin = std::min(min_alpha_margin, bound - be.alpha);
        tally_ok = tally_ok && be.tally_lap == d;
      }
    }
  }
  const bool ok = max_eps <= 1e-9 && min_alpha_margin >= 0.0 && tally_ok;
  verdict(5, ok,
          "max encoding error " + fmt(max_eps) + " (tol 1e-9), min scale margin " +
              fmt(min_alpha_margin) + ", stencil query tally matches d: " +
              (tally_ok ? "yes" : "no"));
}

// criterion 6: with all shifts zero the condition number grows like h^-2
// (slope 2.0 within 0.1) and the inverse norm equals 1 within 1e-10
void criterion_6() {
  const RationalModel model = zero_shift_pole();
  const std::vector<int> ms = {4, 8, 16, 32};
  VectorXd lh(4), lk(4);
  double max_ninv_dev = 0.0;
  for (size_t i = 0; i < ms.size(); ++i) {
    const GridSpec spec = make_grid(0.0, 1.0, ms[i], 1);
    const ConditionNumbers cn = condition_number_Htilde(spec, model);
    lh(static_cast<long>(i)) = std::log(1.0 / spec.h);
    lk(static_cast<long>(i)) = std::log(cn.kappa);
    max_ninv_dev = std::max(max_ninv_dev, std::abs(cn.norm_inv - 1.0));
  }
  const double slope = fit_slope(lh, lk);
  const bool ok = std::abs(slope - 2.0) <= 0.1 && max_ninv_dev <= 1e-10;
  verdict(6, ok,
          "log condition slope " + fmt(slope) + " (required 2.0 +- 0.1), inverse norm deviation " +
              fmt(max_ninv_dev) + " (tol 1e-10)");
}

// criterion 7: both norm bound inequalities hold with nonnegative slack on 20
// randomized fitted models across d in {1,2}
void criterion_7() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> sdist(0.2, 0.8);
  double min_slack = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = trial % 2 + 1;
    const GridSpec spec = make_grid(0.0, 1.0, d == 1 ? 9 : 5, d);
    const double s = sdist(rng);
    const RationalModel model = fit_model(s, enclosure_lo(spec), enclosure_hi(spec), 1e-7);
    const GridFunction f = sample_rhs(field_sin(spec), spec);
    const NormBoundsReport rep = norm_bounds_check(model, spec, f);
    min_slack = std::min({min_slack, rep.upper_slack, rep.lower_slack});
  }
  const bool ok = min_slack >= 0.0;
  verdict(7, ok, "min slack over 20 trials " + fmt(min_slack) + " (required >= 0)");
}

// criterion 8: exact per mode evolution of the dilated system at the accuracy
// driven time recovers the combined solve within 3e-2 relative, under 60 s
void criterion_8() {
  const auto t0 = clock_type::now();
  const GridSpec spec = make_grid(0.0, 1.0, 9, 1);
  const RationalModel model = combined_instance_model(spec);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const VectorXd x_ref = solve_tilde(sys);
  const double t = condition_number_Htilde(spec, model).norm_inv * std::log(100.0);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.r = 9.0;
  cfg.n_p = 64;
  cfg.n_t = 0;
  cfg.delta = 1e-2;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const WarpedState stt = evolve_exact(st0, fac, cfg);
  const VfRecovery rec = recover_vf(stt, cfg);
  const long n_tilde = sys.f_tilde.size();
  const double rel =
      (rec.consensus.head(n_tilde) - x_ref.cast<cd>()).norm() / x_ref.norm();
  const double el = elapsed(t0);
  const bool ok = rel <= 3e-2 && el < 60.0;
  verdict(8, ok,
          "recovered state relative error " + fmt(rel) + " (tol 3e-2) at t = " + fmt(t) +
              ", n_p = 64, " + fmt(el) + " s (limit 60)");
}

// criterion 9: first order Trotter error against exact evolution (slope 1.0
// within 0.2 over four halvings) and the inner factorization gap is also
// first order
void criterion_9() {
  const GridSpec spec = make_grid(0.0, 6.0, 3, 1);
  RationalModel model;
  model.b = VectorXd::Ones(1);
  model.c = VectorXd::Ones(1);
  model.n_active = model.n_r = 1;
  model.s = 0.5;
  model.lo = 1.0;
  model.hi = enclosure_hi(spec);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const double t = std::log(1000.0);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.r = 9.0;
  cfg.n_p = 32;
  cfg.delta = 1e-3;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const WarpedState exact = evolve_exact(st0, fac, cfg);
  const double ref = exact.amplitudes.norm();
  VectorXd ln(5), le(5), lg(5);
  long n_t = 8;
  for (int i = 0; i < 5; ++i, n_t *= 2) {
    SchrodConfig scfg = cfg;
    scfg.n_t = n_t;
    const WarpedState outer = evolve_trotter(st0, fac, scfg, TrotterDepth::outer);
    const WarpedState inner = evolve_trotter(st0, fac, scfg, TrotterDepth::inner);
    ln(i) = std::log(static_cast<double>(n_t));
    le(i) = std::log((outer.amplitudes - exact.amplitudes).norm() / ref);
    lg(i) = std::log((outer.amplitudes - inner.amplitudes).norm() / ref);
  }
  const double order_outer = -fit_slope(ln, le);
  const double order_gap = -fit_slope(ln, lg);
  const bool ok = std::abs(order_outer - 1.0) <= 0.2 && std::abs(order_gap - 1.0) <= 0.2;
  verdict(9, ok,
          "Trotter order " + fmt(order_outer) + " (required 1.0 +- 0.2), factorization gap order " +
              fmt(order_gap) + " (required 1.0 +- 0.2)");
}

// criterion 10: unwarping at t=0 reproduces the initial state to 1e-10 at
// every positive momentum point, and at t=T the candidate columns agree to
// 1e-3 relative on the criterion 8 instance
void criterion_10() {
  const GridSpec spec = make_grid(0.0, 1.0, 9, 1);
  const RationalModel model = combined_instance_model(spec);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const double t = condition_number_Htilde(spec, model).norm_inv * std::log(100.0);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.r = 9.0;
  cfg.n_p = 64;
  cfg.n_t = 0;
  cfg.delta = 1e-2;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  VectorXcd vf0 = VectorXcd::Zero(fac.dim());
  vf0.tail(sys.f_tilde.size()) = fac.t * sys.f_tilde.cast<cd>();
  const double vn = vf0.norm();
  double max_dev = 0.0;
  for (long k = 0; k < cfg.n_p; ++k) {
    if (cfg.p_at(k) <= 0.0) continue;
    max_dev = std::max(max_dev, (std::exp(cfg.p_at(k)) * st0.at(k) - vf0).norm() / vn);
  }
  const WarpedState stt = evolve_exact(st0, fac, cfg);
  const VfRecovery rec = recover_vf(stt, cfg);
  const bool ok = max_dev <= 1e-10 && rec.spread4 <= 1e-3;
  verdict(10, ok,
          "t=0 identity deviation " + fmt(max_dev) + " (tol 1e-10), t=T candidate spread " +
              fmt(rec.spread4) + " (tol 1e-3)");
}

}  // namespace

int main() {
  std::cout << std::setprecision(6);
  criterion(1, criterion_1);
  criterion(2, criterion_2);
  criterion(3, criterion_3);
  criterion(4, criterion_4);
  criterion(5, criterion_5);
  criterion(6, criterion_6);
  criterion(7, criterion_7);
  criterion(8, criterion_8);
  criterion(9, criterion_9);
  criterion(10, criterion_10);
  std::cout << "criteria passed: " << (10 - failures) << "/10" << '\n';
  return failures;
}
