#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <fraclap/grid.hpp>
#include <fraclap/ratapprox.hpp>
#include <fraclap/refsolve.hpp>

using namespace fraclap;
using Catch::Approx;

namespace {

RationalModel single_pole(double b0, double c0, double cinf = 0.0) {
  RationalModel m;
  m.b = VectorXd::Constant(1, b0);
  m.c = VectorXd::Constant(1, c0);
  m.c_inf = cinf;
  m.n_active = 1;
  m.n_r = 1;
  m.s = 0.5;
  m.lo = 1.0;
  m.hi = 100.0;
  return m;
}

GridFunction eigenmode(const GridSpec& spec, int j) {
  const SineEigenpairs eig = sine_eigenpairs(spec);
  GridFunction f;
  f.spec = spec;
  f.values = eig.p.col(j);
  return f;
}

}  // namespace

TEST_CASE("shifted solve on an eigenvector") {
  const GridSpec g = make_grid(0.0, 1.0, 8, 1);
  const SineEigenpairs eig = sine_eigenpairs(g);
  for (int j : {0, 3, 6}) {
    const GridFunction f = eigenmode(g, j);
    const GridFunction u = solve_shifted(g, 3.0, f);
    const VectorXd expected = f.values / (eig.d(j) + 3.0);
    REQUIRE((u.values - expected).cwiseAbs().maxCoeff() < 1e-13);
  }
  REQUIRE_THROWS_AS(solve_shifted(g, -1.0, eigenmode(g, 0)), structure_error);
}

TEST_CASE("shifted solve matches a dense factorization") {
  for (int d : {1, 2}) {
    const GridSpec g = make_grid(0.0, 1.0, 6, d);
    const GridFunction f = sample_rhs(field_gaussian_bump(g), g);
    const double shift = 2.5;
    const GridFunction u = solve_shifted(g, shift, f);

    const MatrixXd a = laplacian_dd_dense(g);
    const long n = g.total_points();
    const VectorXd dense =
        (a + shift * MatrixXd::Identity(n, n)).partialPivLu().solve(f.values);
    REQUIRE((u.values - dense).cwiseAbs().maxCoeff() < 1e-10);

    const VectorXd residual =
        apply_laplacian_dd(g, u.values) + shift * u.values - f.values;
    REQUIRE(residual.norm() < 1e-10 * f.values.norm());
  }
}

TEST_CASE("zero data stays zero") {
  const GridSpec g = make_grid(0.0, 1.0, 8, 1);
  const GridFunction z = sample_rhs(field_zero(), g);
  REQUIRE(solve_shifted(g, 1.0, z).values.norm() == 0.0);
  REQUIRE(spectral_fractional_reference(g, 0.5, z).values.norm() == 0.0);
}

TEST_CASE("rational solution degenerate models") {
  const GridSpec g = make_grid(0.0, 1.0, 8, 1);
  const GridFunction f = sample_rhs(field_sin(g), g);

  RationalModel constant;
  constant.c_inf = 1.0;
  const GridFunction uc = rational_solution(constant, g, f);
  REQUIRE((uc.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  const RationalModel inv = single_pole(0.0, 1.0);
  const GridFunction ui = rational_solution(inv, g, f);
  const GridFunction direct = solve_shifted(g, 0.0, f);
  REQUIRE((ui.values - direct.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spectral reference limits") {
  const GridSpec g = make_grid(0.0, 1.0, 8, 1);
  const GridFunction f = sample_rhs(field_gaussian_bump(g), g);
  const GridFunction u1 = spectral_fractional_reference(g, 1.0, f);
  const GridFunction inv = solve_shifted(g, 0.0, f);
  REQUIRE((u1.values - inv.values).cwiseAbs().maxCoeff() < 1e-13);

  const SineEigenpairs eig = sine_eigenpairs(g);
  const GridFunction mode = eigenmode(g, 2);
  const GridFunction um = spectral_fractional_reference(g, 0.5, mode);
  const VectorXd expected = mode.values * std::pow(eig.d(2), -0.5);
  REQUIRE((um.values - expected).cwiseAbs().maxCoeff() < 1e-13);

  REQUIRE_THROWS_AS(spectral_fractional_reference(g, 0.0, f), structure_error);
  REQUIRE_THROWS_AS(spectral_fractional_reference(g, 1.5, f), structure_error);
}

TEST_CASE("second order convergence for sine data") {
  const ConvergenceStudy study = convergence_study(0.5, 1, {8, 16, 32, 64, 128});
  REQUIRE(study.rows.size() == 5);
  const double frozen[] = {1.4528e-3, 3.6197e-4, 9.0416e-5, 2.2597e-5, 5.6481e-6};
  for (size_t i = 0; i < 5; ++i) {
    CAPTURE(i, study.rows[i].error);
    REQUIRE(study.rows[i].error == Approx(frozen[i]).epsilon(0.02));
  }
  REQUIRE(study.observed_order > 1.95);
  REQUIRE(study.observed_order < 2.05);

  REQUIRE_THROWS_AS(convergence_study(0.5, 1, {8, 16}), dimension_error);
}

TEST_CASE("general data path against a refined reference") {
  const ScalarField f = field_sin(make_grid(0.0, 1.0, 8, 1));
  const ConvergenceStudy study = convergence_study(0.5, 1, {8, 16, 32}, 1e-9, &f);
  const double frozen[] = {1.4528e-3, 3.6197e-4, 9.0416e-5};
  for (size_t i = 0; i < 3; ++i) {
    CAPTURE(i, study.rows[i].error);
    REQUIRE(study.rows[i].error == Approx(frozen[i]).epsilon(0.15));
  }
  REQUIRE(study.observed_order > 1.9);
  REQUIRE(study.observed_order < 2.1);
}

TEST_CASE("convergence away from the unit domain") {
  const ConvergenceStudy study = convergence_study(0.5, 1, {8, 16, 32}, 1e-9, nullptr, 0.0, 6.0);
  REQUIRE(study.observed_order > 1.9);
  REQUIRE(study.observed_order < 2.1);

  const ConvergenceStudy study2 = convergence_study(0.5, 2, {4, 8, 16});
  REQUIRE(study2.observed_order > 1.8);
  REQUIRE(study2.observed_order < 2.2);
}

TEST_CASE("condition numbers of the extended operator") {
  const GridSpec g = make_grid(0.0, 1.0, 4, 1);
  const RationalModel zero_shift = single_pole(0.0, 1.0);
  const ConditionNumbers cn = condition_number_Htilde(g, zero_shift);
  REQUIRE(cn.kappa == Approx(54.627416997969522));
  REQUIRE(cn.norm_inv == Approx(1.0));
  REQUIRE(cn.bound == Approx(4.0 / (g.h * g.h)));

  VectorXd lh(4), lk(4);
  int i = 0;
  for (int m : {4, 8, 16, 32}) {
    const GridSpec gm = make_grid(0.0, 1.0, m, 1);
    const ConditionNumbers c = condition_number_Htilde(gm, zero_shift);
    REQUIRE(c.norm_inv == Approx(1.0));
    lh(i) = std::log(1.0 / gm.h);
    lk(i) = std::log(c.kappa);
    ++i;
  }
  const double slope = fit_slope(lh, lk);
  REQUIRE(slope > 1.9);
  REQUIRE(slope < 2.1);

  RationalModel empty;
  REQUIRE(condition_number_Htilde(g, empty).kappa == Approx(1.0));
}

TEST_CASE("norm bounds hold for fitted models") {
  const GridSpec g = make_grid(0.0, 1.0, 16, 1);
  const RationalModel model = fit_model(0.5, enclosure_lo(g), enclosure_hi(g), 1e-8);
  const GridFunction f = sample_rhs(field_sin(g), g);
  const NormBoundsReport rep = norm_bounds_check(model, g, f);
  REQUIRE(rep.upper_slack >= 0.0);
  REQUIRE(rep.lower_slack >= 0.0);
  REQUIRE(rep.upper_lhs > 0.0);
  REQUIRE(rep.lower_rhs > 0.0);
}

TEST_CASE("norm bound violation is detected") {
  const GridSpec g = make_grid(0.0, 1.0, 4, 1);
  const RationalModel model = single_pole(0.0, 1.0);
  const GridFunction top = eigenmode(g, 2);  // largest eigenvalue
  REQUIRE_THROWS_AS(norm_bounds_check(model, g, top), bound_error);

  RationalModel bad = model;
  bad.c(0) = -1.0;
  REQUIRE_THROWS_AS(norm_bounds_check(bad, g, eigenmode(g, 0)), structure_error);

  const GridFunction z = sample_rhs(field_zero(), g);
  REQUIRE_NOTHROW(norm_bounds_check(model, g, z));
}
