#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/ratapprox.hpp"

namespace fraclap {

// spectrum enclosure of the Kronecker-sum operator
inline double enclosure_lo(const GridSpec& spec) {
  const double w = spec.b - spec.a;
  return 8.0 * spec.d / (w * w);
}

inline double enclosure_hi(const GridSpec& spec) { return 4.0 * spec.d / (spec.h * spec.h); }

namespace detail {

template <typename Filter>
GridFunction spectral_apply(const GridSpec& spec, const GridFunction& f, Filter filter) {
  const SineEigenpairs eig = sine_eigenpairs(spec);
  const int n = spec.points_per_dim();
  GridFunction out;
  out.spec = spec;
  out.values = f.values;
  long stride = 1;
  for (int axis = 0; axis < spec.d; ++axis) {
    apply_along_axis(eig.p, out.values, n, stride);
    stride *= n;
  }
  const VectorXd lam = kron_sum_eigenvalues(spec);
  for (long i = 0; i < out.values.size(); ++i) out.values(i) *= filter(lam(i));
  stride = 1;
  for (int axis = 0; axis < spec.d; ++axis) {
    apply_along_axis(eig.p, out.values, n, stride);
    stride *= n;
  }
  return out;
}

}  // namespace detail

inline GridFunction solve_shifted(const GridSpec& spec, double b_shift, const GridFunction& f) {
  if (b_shift < 0.0) throw structure_error("shift must be nonnegative");
  return detail::spectral_apply(spec, f, [b_shift](double lam) { return 1.0 / (lam + b_shift); });
}

inline GridFunction rational_solution(const RationalModel& model, const GridSpec& spec,
                                      const GridFunction& f) {
  GridFunction out;
  out.spec = spec;
  out.values = model.c_inf * f.values;
  for (int l = 0; l < model.n_active; ++l)
    out.values += model.c(l) * solve_shifted(spec, model.b(l), f).values;
  return out;
}

inline GridFunction spectral_fractional_reference(const GridSpec& spec, double s,
                                                  const GridFunction& f) {
  if (!(s > 0.0 && s <= 1.0)) throw structure_error("exponent must lie in (0,1]");
  return detail::spectral_apply(spec, f, [s](double lam) { return std::pow(lam, -s); });
}

struct ConvergenceRow {
  int m = 0;
  double h = 0.0, error = 0.0, order = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double observed_order = 0.0;
};

// continuum oracle for sine-product data: (dpi^2/w^2)^(-s) times the data
inline ConvergenceStudy convergence_study(double s, int d, const std::vector<int>& m_list,
                                          double fit_tol = 1e-9,
                                          const ScalarField* general_f = nullptr,
                                          double domain_a = 0.0, double domain_b = 1.0) {
  if (m_list.size() < 3) throw dimension_error("convergence study needs at least 3 grid levels");
  ConvergenceStudy study;
  const double pi = std::numbers::pi;
  for (int m : m_list) {
    const GridSpec spec = make_grid(domain_a, domain_b, m, d);
    const RationalModel model =
        fit_model(s, enclosure_lo(spec), enclosure_hi(spec), fit_tol);
    GridFunction f, exact;
    if (general_f == nullptr) {
      f = sample_rhs(field_sin(spec), spec);
      const double w = domain_b - domain_a;
      const double lam = d * pi * pi / (w * w);
      exact = f;
      exact.values *= std::pow(lam, -s);
    } else {
      f = sample_rhs(*general_f, spec);
      const GridSpec fine = make_grid(domain_a, domain_b, 4 * m, d);
      const GridFunction ufine =
          spectral_fractional_reference(fine, s, sample_rhs(*general_f, fine));
      exact.spec = spec;
      exact.values.resize(spec.total_points());
      const int n = spec.points_per_dim(), nf = fine.points_per_dim();
      for (long idx = 0; idx < exact.values.size(); ++idx) {
        long rem = idx, fidx = 0, fs = 1;
        for (int k = 0; k < d; ++k) {
          fidx += (4 * (rem % n + 1) - 1) * fs;
          fs *= nf;
          rem /= n;
        }
        exact.values(idx) = ufine.values(fidx);
      }
    }
    const GridFunction u = rational_solution(model, spec, f);
    GridFunction diff = u;
    diff.values -= exact.values;
    ConvergenceRow row;
    row.m = m;
    row.h = spec.h;
    row.error = discrete_l2_norm(diff);
    study.rows.push_back(row);
  }
  for (size_t i = 1; i < study.rows.size(); ++i)
    study.rows[i].order = std::log(study.rows[i - 1].error / study.rows[i].error) /
                          std::log(study.rows[i - 1].h / study.rows[i].h);
  VectorXd lh(study.rows.size()), le(study.rows.size());
  for (size_t i = 0; i < study.rows.size(); ++i) {
    lh(i) = std::log(study.rows[i].h);
    le(i) = std::log(study.rows[i].error);
  }
  study.observed_order = fit_slope(lh, le);
  return study;
}

struct ConditionNumbers {
  double kappa = 1.0;
  double bound = 1.0;
  double norm_inv = 1.0;  // of the block-diagonal extension
};

inline ConditionNumbers condition_number_Htilde(const GridSpec& spec,
                                                const RationalModel& model) {
  if (spec.total_points() * std::max(model.n_r, 1) > kDenseDimCap)
    throw dimension_error("spectrum enumeration exceeds the dimension cap");
  const VectorXd lam = kron_sum_eigenvalues(spec);
  double lo = 1.0, hi = 1.0;
  for (int l = 0; l < model.n_r; ++l)
    for (long i = 0; i < lam.size(); ++i) {
      lo = std::min(lo, lam(i) + model.b(l));
      hi = std::max(hi, lam(i) + model.b(l));
    }
  ConditionNumbers out;
  out.norm_inv = 1.0 / lo;
  out.kappa = hi / lo;
  out.bound = model.b_max() + enclosure_hi(spec);
  return out;
}

struct NormBoundsReport {
  double upper_lhs = 0.0, upper_rhs = 0.0;
  double lower_lhs = 0.0, lower_rhs = 0.0;
  double upper_slack = 0.0, lower_slack = 0.0;
};

inline NormBoundsReport norm_bounds_check(const RationalModel& model, const GridSpec& spec,
                                          const GridFunction& f) {
  for (int l = 0; l < model.n_active; ++l)
    if (model.c(l) <= 0.0) throw structure_error("norm bounds require positive residues");
  NormBoundsReport rep;
  const double fnorm = f.values.norm();
  double usq = model.c_inf * model.c_inf * fnorm * fnorm;
  for (int l = 0; l < model.n_active; ++l) {
    const double un = solve_shifted(spec, model.b(l), f).values.norm();
    usq += model.c(l) * model.c(l) * un * un;
  }
  rep.upper_lhs = std::sqrt(usq);
  rep.upper_rhs = std::sqrt(model.c.squaredNorm() + model.c_inf * model.c_inf) * fnorm;
  rep.lower_lhs = rational_solution(model, spec, f).values.norm();
  rep.lower_rhs = model.n_active
                      ? model.c(0) / (model.b_min() + enclosure_lo(spec)) * fnorm
                      : 0.0;
  rep.upper_slack = rep.upper_rhs - rep.upper_lhs;
  rep.lower_slack = rep.lower_lhs - rep.lower_rhs;
  const double tol = 1e-12 * std::max(1.0, fnorm);
  if (rep.upper_slack < -tol || rep.lower_slack < -tol)
    throw bound_error(std::min(rep.upper_slack, rep.lower_slack),
                      "solution norm bound violated");
  return rep;
}

struct SolveReport {
  double h = 0.0;
  int d = 1;
  int n_r = 0;
  double s = 0.0;
  double error_vs_oracle = 0.0;
  double observed_order = 0.0;
  double kappa = 1.0;
  double norm_u_tilde = 0.0;
  double norm_u_h = 0.0;
  double eta1_measured = 0.0;
  double eta1_bound = 0.0;
};

}  // namespace fraclap
