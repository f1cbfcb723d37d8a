#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fraclap/linalg.hpp"

namespace fraclap {

struct BarycentricForm {
  VectorXd z, f, w;  // support points, values, unit-norm weights
  int m = 0;
  double achieved_residual = 0.0;
  bool converged = false;

  double eval(double x) const {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < m; ++j) {
      const double dx = x - z(j);
      if (dx == 0.0) return f(j);
      num += w(j) * f(j) / dx;
      den += w(j) / dx;
    }
    return num / den;
  }
};

struct RationalModel {
  VectorXd b, c;  // ascending poles, residues; padded length n_r
  double c_inf = 0.0;
  int n_active = 0;
  int n_r = 0;
  double s = 0.0;
  double lo = 0.0, hi = 0.0;
  double sup_err = 0.0;

  double eval(double x) const {
    double acc = c_inf;
    for (int l = 0; l < n_active; ++l) acc += c(l) / (x + b(l));
    return acc;
  }
  double b_max() const { return n_r ? b(n_r - 1) : 0.0; }
  double b_min() const { return n_r ? b(0) : 0.0; }
};

inline VectorXd log_uniform_grid(double lo, double hi, int n) {
  VectorXd g(n);
  if (n == 1 || lo == hi) {
    g.setConstant(lo);
    return g.head(1).eval();
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g(i) = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
  return g;
}

inline BarycentricForm aaa_fit(double s, double lo, double hi, double tol, int max_order,
                               int n_samples = 10000, bool throw_on_max_order = true) {
  if (!(s > 0.0 && s < 1.0)) throw structure_error("exponent s must lie in (0,1)");
  if (!(lo > 0.0 && hi >= lo)) throw structure_error("fit interval must be positive");
  if (max_order < 1) throw structure_error("max_order must be at least 1");

  const VectorXd Z = log_uniform_grid(lo, hi, n_samples);
  const int n = int(Z.size());
  VectorXd F(n);
  for (int i = 0; i < n; ++i) F(i) = std::pow(Z(i), -s);

  std::vector<int> rest(n);
  std::iota(rest.begin(), rest.end(), 0);
  std::vector<int> supp;
  VectorXd R = VectorXd::Constant(n, F.mean());
  VectorXd w;
  double err = 0.0;
  bool converged = false;

  for (int m = 1; m <= max_order; ++m) {
    int pick = 0;
    double best = -1.0;
    for (int i : rest) {
      const double r = std::abs(F(i) - R(i));
      if (r > best) {
        best = r;
        pick = i;
      }
    }
    supp.push_back(pick);
    rest.erase(std::find(rest.begin(), rest.end(), pick));

    const int nr = int(rest.size());
    if (nr == 0) {
      w = VectorXd::Zero(m);
      w(m - 1) = 1.0;
      err = 0.0;
      converged = true;
      break;
    }
    MatrixXd L(nr, m);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < m; ++j)
        L(i, j) = (F(rest[i]) - F(supp[j])) / (Z(rest[i]) - Z(supp[j]));
    Eigen::BDCSVD<MatrixXd> svd(L, Eigen::ComputeThinV);
    w = svd.matrixV().col(m - 1);

    err = 0.0;
    for (int i = 0; i < nr; ++i) {
      double num = 0.0, den = 0.0;
      for (int j = 0; j < m; ++j) {
        const double dx = Z(rest[i]) - Z(supp[j]);
        num += w(j) * F(supp[j]) / dx;
        den += w(j) / dx;
      }
      R(rest[i]) = num / den;
      err = std::max(err, std::abs(F(rest[i]) - R(rest[i])));
    }
    if (err <= tol) {
      converged = true;
      break;
    }
  }

  BarycentricForm form;
  form.m = int(supp.size());
  form.z.resize(form.m);
  form.f.resize(form.m);
  for (int j = 0; j < form.m; ++j) {
    form.z(j) = Z(supp[j]);
    form.f(j) = F(supp[j]);
  }
  form.w = w / w.norm();
  form.achieved_residual = err;
  form.converged = converged;
  if (!converged && throw_on_max_order)
    throw fit_error(err, form.m, "aaa fit did not reach tolerance at max order");
  return form;
}

inline RationalModel to_partial_fractions(const BarycentricForm& form, double s = 0.0,
                                          double lo = 0.0, double hi = 0.0) {
  const int m = form.m;
  std::vector<double> poles;
  if (m > 1) {
    MatrixXd E = MatrixXd::Zero(m + 1, m + 1), B = MatrixXd::Zero(m + 1, m + 1);
    for (int j = 0; j < m; ++j) {
      E(0, j + 1) = form.w(j);
      E(j + 1, 0) = 1.0;
      E(j + 1, j + 1) = form.z(j);
      B(j + 1, j + 1) = 1.0;
    }
    Eigen::GeneralizedEigenSolver<MatrixXd> ges(E, B);
    const auto& alphas = ges.alphas();
    const auto& betas = ges.betas();
    const double beta_scale = betas.cwiseAbs().maxCoeff();
    for (int k = 0; k < alphas.size(); ++k) {
      if (std::abs(betas(k)) <= 1e-12 * beta_scale) continue;
      const cd lam = alphas(k) / betas(k);
      if (std::abs(lam.imag()) > 1e-10 * std::max(1.0, std::abs(lam)))
        throw structure_error("complex pole in partial-fraction conversion");
      poles.push_back(lam.real());
    }
  }

  std::vector<double> res(poles.size());
  for (size_t k = 0; k < poles.size(); ++k) {
    double num = 0.0, dden = 0.0;
    for (int j = 0; j < m; ++j) {
      const double dx = poles[k] - form.z(j);
      num += form.w(j) * form.f(j) / dx;
      dden -= form.w(j) / (dx * dx);
    }
    res[k] = num / dden;
  }

  const double wsum = form.w.sum();
  double c_inf = wsum == 0.0 ? 0.0 : form.w.dot(form.f) / wsum;

  double cnorm = 0.0;
  for (double r : res) cnorm += r * r;
  cnorm = std::sqrt(cnorm);
  std::vector<std::pair<double, double>> kept;  // (b, c)
  for (size_t k = 0; k < poles.size(); ++k) {
    if (std::abs(res[k]) < 1e-13 * cnorm) continue;
    kept.emplace_back(-poles[k], res[k]);
  }
  const double scale = std::max(1.0, cnorm);
  for (auto& [bk, ck] : kept) {
    if (bk < 0.0) {
      if (bk > -1e-12 * std::max(1.0, std::abs(bk)))
        bk = 0.0;
      else
        throw structure_error("Stieltjes structure violated: negative pole shift");
    }
    if (ck <= 0.0) throw structure_error("Stieltjes structure violated: nonpositive residue");
  }
  if (c_inf < 0.0) {
    if (c_inf > -1e-12 * scale)
      c_inf = 0.0;
    else
      throw structure_error("Stieltjes structure violated: negative constant term");
  }
  std::sort(kept.begin(), kept.end());

  RationalModel model;
  model.n_active = int(kept.size());
  model.n_r = model.n_active ? int(next_pow2(model.n_active)) : 0;
  model.b.resize(model.n_r);
  model.c = VectorXd::Zero(model.n_r);
  for (int l = 0; l < model.n_active; ++l) {
    model.b(l) = kept[l].first;
    model.c(l) = kept[l].second;
  }
  for (int l = model.n_active; l < model.n_r; ++l) model.b(l) = kept.back().first;
  model.c_inf = c_inf;
  model.s = s;
  model.lo = lo;
  model.hi = hi;
  return model;
}

inline double evaluate_rational(const RationalModel& model, double x) { return model.eval(x); }

inline double sup_error(const RationalModel& model, int n_samples = 10000) {
  const VectorXd grid = log_uniform_grid(model.lo, model.hi, n_samples);
  double worst = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(std::pow(grid(i), -model.s) - model.eval(grid(i))));
  return worst;
}

inline RationalModel fit_model(double s, double lo, double hi, double tol,
                               int max_order = 40, int n_samples = 10000,
                               bool strict = true) {
  BarycentricForm form = aaa_fit(s, lo, hi, tol, max_order, n_samples, strict);
  RationalModel model = to_partial_fractions(form, s, lo, hi);
  model.sup_err = sup_error(model);
  return model;
}

}  // namespace fraclap
