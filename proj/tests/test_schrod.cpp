#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <fraclap/grid.hpp>
#include <fraclap/ratapprox.hpp>
#include <fraclap/schrod.hpp>
#include <fraclap/system.hpp>

using namespace fraclap;
using Catch::Approx;

namespace {

RationalModel unit_pole() {
  RationalModel m;
  m.b = VectorXd::Constant(1, 1.0);
  m.c = VectorXd::Constant(1, 1.0);
  m.n_active = m.n_r = 1;
  return m;
}

GridFunction step_data(const GridSpec& g) {
  GridFunction f;
  f.spec = g;
  f.values = VectorXd(2);
  f.values << 1.0, 0.5;
  return f;
}

MatrixXcd random_unitary(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(dist(rng), dist(rng));
  return Eigen::HouseholderQR<MatrixXcd>(a).householderQ();
}

}  // namespace

TEST_CASE("augmented hamiltonian layout") {
  const MatrixXd scalar = MatrixXd::Ones(1, 1);
  const HamiltonianFactors fac = build_augmented(scalar, 1.0);
  REQUIRE(fac.dim() == 2);
  REQUIRE(fac.h_f(0, 0) == -1.0);
  REQUIRE(fac.h_f(0, 1) == 1.0);
  REQUIRE(fac.h_f(1, 0) == 0.0);
  REQUIRE(fac.h_f(1, 1) == 0.0);
  REQUIRE(fac.h1(0, 1) == Approx(0.5));
  REQUIRE(fac.h1(1, 0) == Approx(0.5));
  REQUIRE(fac.h2(0, 1) == cd(0.0, -0.5));
  REQUIRE(fac.h2(1, 0) == cd(0.0, 0.5));

  const MatrixXcd recon = fac.h1.cast<cd>() + cd(0, 1) * fac.h2;
  REQUIRE((recon - fac.h_f.cast<cd>()).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((fac.h2 - fac.h2.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-14);

  REQUIRE_THROWS_AS(build_augmented(scalar, 0.0), structure_error);
}

TEST_CASE("fourier modes are symmetric and increasing") {
  SchrodConfig cfg;
  cfg.n_p = 16;
  cfg.r = 9.0;
  const VectorXd mu = fourier_modes(cfg);
  REQUIRE(mu.size() == 16);
  REQUIRE(mu(8) == 0.0);
  REQUIRE(mu(0) == Approx(-8.0 / 9.0));
  for (long l = 1; l < 16; ++l) REQUIRE(mu(l) > mu(l - 1));
}

TEST_CASE("configuration validation") {
  SchrodConfig cfg;
  cfg.t = 1.0;
  REQUIRE_NOTHROW(validate(cfg));
  SchrodConfig small = cfg;
  small.r = 8.0;
  REQUIRE_THROWS_AS(validate(small), structure_error);
  SchrodConfig odd = cfg;
  odd.n_p = 48;
  REQUIRE_THROWS_AS(validate(odd), structure_error);
  odd.n_p = 1;
  REQUIRE_THROWS_AS(validate(odd), structure_error);
  SchrodConfig acc = cfg;
  acc.delta = 0.0;
  REQUIRE_THROWS_AS(validate(acc), structure_error);
  acc.delta = 1.0;
  REQUIRE_THROWS_AS(validate(acc), structure_error);
}

TEST_CASE("warped initial state") {
  const HamiltonianFactors fac = build_augmented(MatrixXd::Ones(1, 1), 2.0);
  SchrodConfig cfg;
  cfg.t = 2.0;
  cfg.n_p = 64;
  const VectorXd f1 = VectorXd::Ones(1);
  const WarpedState st = init_warped(fac, cfg, f1);
  REQUIRE(st.block == 2);
  REQUIRE(st.amplitudes.size() == 128);

  // p = 0 sits exactly in the middle of the grid
  REQUIRE(cfg.p_at(32) == 0.0);
  REQUIRE(st.at(32)(0) == cd(0.0, 0.0));
  REQUIRE(st.at(32)(1) == cd(2.0, 0.0));
  // symmetric decay in both directions
  for (long k : {1L, 5L, 20L})
    REQUIRE(std::abs(st.at(32 - k)(1) - st.at(32 + k)(1)) < 1e-15);
  // the boundary amplitude is negligible by construction
  REQUIRE(st.at(0).cwiseAbs().maxCoeff() < 1e-12 * st.amplitudes.cwiseAbs().maxCoeff());

  REQUIRE_THROWS_AS(init_warped(fac, cfg, VectorXd::Ones(2)), dimension_error);
}

TEST_CASE("coefficient transform round trip") {
  const long n_p = 16, block = 3;
  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  WarpedState st;
  st.n_p = n_p;
  st.block = block;
  st.amplitudes.resize(n_p * block);
  for (long i = 0; i < st.amplitudes.size(); ++i)
    st.amplitudes(i) = cd(dist(rng), dist(rng));

  const VectorXcd coeffs = to_coefficients(st);
  const VectorXcd back = from_coefficients(coeffs, n_p, block);
  REQUIRE((back - st.amplitudes).cwiseAbs().maxCoeff() < 1e-12);

  // a single mode expands with alternating-sign twiddle factors
  VectorXcd single = VectorXcd::Zero(n_p * block);
  single(2 * block) = 1.0;  // mode l = 2, first block entry
  const VectorXcd amps = from_coefficients(single, n_p, block);
  const cd w = std::exp(cd(0, 2.0 * std::numbers::pi * 2.0 / n_p));
  REQUIRE(std::abs(amps(0) - cd(1, 0)) < 1e-14);
  REQUIRE(std::abs(amps(block) + w) < 1e-14);
  REQUIRE(std::abs(amps(2 * block) - w * w) < 1e-14);
}

TEST_CASE("exact evolution over zero time is the identity") {
  const HamiltonianFactors fac = build_augmented(MatrixXd::Ones(1, 1), 1.0);
  SchrodConfig cfg;
  cfg.t = 1.0;
  cfg.n_p = 64;
  WarpedState st = init_warped(fac, cfg, VectorXd::Ones(1));
  st.t = 1.0;  // already at the target time
  const WarpedState out = evolve_exact(st, fac, cfg);
  REQUIRE((out.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() <
          1e-13 * st.amplitudes.cwiseAbs().maxCoeff());
}

TEST_CASE("exact evolution is unitary per mode") {
  const GridSpec g = make_grid(0.0, 6.0, 3, 1);
  const GridFunction f = step_data(g);
  const CombinedSystem sys = build_combined(g, unit_pole(), f);
  const double t = std::log(100.0);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.n_p = 32;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const WarpedState stT = evolve_exact(st0, fac, cfg);

  const VectorXcd c0 = to_coefficients(st0);
  const VectorXcd cT = to_coefficients(stT);
  for (long l = 0; l < cfg.n_p; ++l) {
    const double n0 = c0.segment(l * st0.block, st0.block).norm();
    const double nT = cT.segment(l * st0.block, st0.block).norm();
    REQUIRE(nT == Approx(n0).margin(1e-10 * c0.norm()));
  }

  // single-mode data stays in its mode
  VectorXcd single = VectorXcd::Zero(cfg.n_p * st0.block);
  single.segment(3 * st0.block, st0.block).setConstant(cd(0.3, -0.1));
  WarpedState sm = st0;
  sm.amplitudes = from_coefficients(single, cfg.n_p, st0.block);
  const VectorXcd evolved = to_coefficients(evolve_exact(sm, fac, cfg));
  for (long l = 0; l < cfg.n_p; ++l) {
    if (l == 3) continue;
    REQUIRE(evolved.segment(l * st0.block, st0.block).norm() <
            1e-12 * evolved.segment(3 * st0.block, st0.block).norm());
  }
}

TEST_CASE("scalar decay matches the closed form") {
  const double delta = 1e-2;
  const double t = std::log(1.0 / delta);
  const HamiltonianFactors fac = build_augmented(MatrixXd::Ones(1, 1), t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.n_p = 1024;
  const WarpedState st0 = init_warped(fac, cfg, VectorXd::Ones(1));
  const WarpedState stT = evolve_exact(st0, fac, cfg);
  const VfRecovery rec = recover_vf(stT, cfg);

  // v(T) = 1 - exp(-T) for unit eigenvalue and unit source
  const double expected = 1.0 - delta;
  REQUIRE(std::abs(rec.consensus(0) - cd(expected, 0.0)) / expected < 1e-3);
  REQUIRE(std::abs(rec.consensus(1) - cd(t, 0.0)) / t < 1e-3);
  REQUIRE(std::abs(rec.consensus(0) - cd(1.0, 0.0)) < 1.05 * delta);
  REQUIRE(rec.spread4 < 1e-3);
  REQUIRE(rec.boundary_ratio < 1e-5);

  // a coarser p grid resolves the warping less sharply
  SchrodConfig coarse = cfg;
  coarse.n_p = 64;
  const WarpedState c0 = init_warped(fac, coarse, VectorXd::Ones(1));
  const VfRecovery crec = recover_vf(evolve_exact(c0, fac, coarse), coarse);
  REQUIRE(crec.spread4 > rec.spread4);
}

TEST_CASE("select oracle applies signed powers") {
  const MatrixXcd w = random_unitary(2, 17);
  const int npq = 3;
  const QOpPtr sel = select_oracle(w, npq);
  REQUIRE(sel->nq == npq + 1);

  MatrixXcd winv = w.adjoint();
  VectorXcd psi(2);
  psi << cd(0.6, 0.2), cd(-0.3, 0.7);
  psi.normalize();
  for (long l = 0; l < 8; ++l) {
    VectorXcd in = VectorXcd::Zero(16);
    in.segment(2 * l, 2) = psi;
    const VectorXcd out = sel->apply(in);
    MatrixXcd pw = MatrixXcd::Identity(2, 2);
    const long e = l - 4;
    for (long q = 0; q < std::abs(e); ++q) pw = (e > 0 ? w : winv) * pw;
    CAPTURE(l);
    REQUIRE((out.segment(2 * l, 2) - pw * psi).cwiseAbs().maxCoeff() < 1e-12);
    // nothing leaks into other branches
    VectorXcd leak = out;
    leak.segment(2 * l, 2).setZero();
    REQUIRE(leak.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("trotter stepping converges to the exact flow") {
  const GridSpec g = make_grid(0.0, 6.0, 3, 1);
  const GridFunction f = step_data(g);
  const CombinedSystem sys = build_combined(g, unit_pole(), f);
  const double t = std::log(1000.0);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.n_p = 32;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const WarpedState exact = evolve_exact(st0, fac, cfg);
  const double ref = exact.amplitudes.norm();

  const std::vector<long> steps = {8, 16, 32, 64, 128, 256};
  VectorXd ln(steps.size()), louter(steps.size()), lgap(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) {
    SchrodConfig scfg = cfg;
    scfg.n_t = steps[i];
    const WarpedState outer = evolve_trotter(st0, fac, scfg, TrotterDepth::outer);
    const WarpedState inner = evolve_trotter(st0, fac, scfg, TrotterDepth::inner);
    ln(i) = std::log(static_cast<double>(steps[i]));
    louter(i) = std::log((outer.amplitudes - exact.amplitudes).norm() / ref);
    lgap(i) = std::log((outer.amplitudes - inner.amplitudes).norm() / ref);
  }
  const double outer_order = -fit_slope(ln, louter);
  CAPTURE(louter);
  REQUIRE(outer_order > 0.9);
  REQUIRE(outer_order < 1.1);
  const double gap_order = -fit_slope(ln, lgap);
  REQUIRE(gap_order > 0.8);
  REQUIRE(gap_order < 1.2);

  // the factorized step is an exact rewrite of the inner one
  SchrodConfig scfg = cfg;
  scfg.n_t = 16;
  const WarpedState inner = evolve_trotter(st0, fac, scfg, TrotterDepth::inner);
  const WarpedState full = evolve_trotter(st0, fac, scfg, TrotterDepth::full);
  REQUIRE((inner.amplitudes - full.amplitudes).cwiseAbs().maxCoeff() < 1e-12 * ref);

  SchrodConfig zero = cfg;
  zero.n_t = 0;
  REQUIRE_THROWS_AS(evolve_trotter(st0, fac, zero, TrotterDepth::outer), structure_error);

  const HamiltonianFactors bare = build_augmented(sys.h_tilde, t);
  const WarpedState stb = init_warped(bare, cfg, sys.f_tilde);
  REQUIRE_THROWS_AS(evolve_trotter(stb, bare, scfg, TrotterDepth::full), dimension_error);
}

TEST_CASE("phase kick rotation matches the exponential") {
  const double a = 0.37;
  MatrixXcd ry(2, 2);
  ry << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
  MatrixXcd sy(2, 2);
  sy << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
  const MatrixXcd ex = expm_hermitian(sy, cd(0, a));
  REQUIRE((ry - ex).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("recovery at time zero returns the prepared data") {
  const GridSpec g = make_grid(0.0, 6.0, 3, 1);
  const GridFunction f = step_data(g);
  const CombinedSystem sys = build_combined(g, unit_pole(), f);
  const double t = 2.0;
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.n_p = 64;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const VfRecovery rec = recover_vf(st0, cfg);

  VectorXcd vf0 = VectorXcd::Zero(fac.dim());
  vf0.tail(sys.f_tilde.size()) = t * sys.f_tilde.cast<cd>();
  for (long i = 0; i < rec.candidates.cols(); ++i)
    REQUIRE((rec.candidates.col(i) - vf0).norm() < 1e-10 * vf0.norm());
  REQUIRE(rec.spread4 < 1e-10);

  SchrodConfig far = cfg;
  far.p_star = 4.0 * std::numbers::pi * cfg.r;
  REQUIRE_THROWS_AS(recover_vf(st0, far), recovery_error);
  SchrodConfig edge = cfg;
  edge.p_star = std::numbers::pi * cfg.r - 1.5 * cfg.dp();
  REQUIRE_THROWS_AS(recover_vf(st0, edge), recovery_error);

  WarpedState dead = st0;
  dead.amplitudes.setZero();
  REQUIRE_THROWS_AS(recover_vf(dead, cfg), recovery_error);
}

TEST_CASE("pipeline reaches the requested accuracy") {
  const GridSpec g = make_grid(0.0, 6.0, 3, 1);
  const GridFunction f = step_data(g);
  const RationalModel m = unit_pole();

  SchrodConfig cfg;
  cfg.delta = 1e-3;
  cfg.n_p = 1024;
  const PipelineResult res = run_pipeline(g, m, f, cfg);
  REQUIRE(res.report.t == Approx(std::log(1000.0)));
  REQUIRE(res.report.steady_rel_error < 1.05e-3);
  REQUIRE(res.report.steady_rel_error > 1e-5);
  REQUIRE(res.report.boundary_ratio < 1e-4);
  REQUIRE(res.report.t0_identity_dev < 1e-10);
  REQUIRE_FALSE(res.report.doubled);
  REQUIRE(res.report.n_p == 1024);

  const GridFunction direct = rational_solution(m, g, f);
  REQUIRE(res.report.err_vs_uh < 0.01);
  REQUIRE((res.u_q.values - direct.values).norm() < 0.01 * direct.values.norm());

  SchrodConfig loose = cfg;
  loose.delta = 1e-1;
  loose.n_p = 256;
  const PipelineResult coarse = run_pipeline(g, m, f, loose);
  REQUIRE(coarse.report.steady_rel_error < 0.105);
  REQUIRE(coarse.report.steady_rel_error > res.report.steady_rel_error);
}

TEST_CASE("pipeline with zero data short-circuits") {
  const GridSpec g = make_grid(0.0, 6.0, 3, 1);
  const GridFunction z = sample_rhs(field_zero(), g);
  SchrodConfig cfg;
  cfg.delta = 1e-2;
  const PipelineResult res = run_pipeline(g, unit_pole(), z, cfg);
  REQUIRE(res.u_q.values.norm() == 0.0);
  REQUIRE(res.report.steady_rel_error == 0.0);
  REQUIRE(res.report.n_p == cfg.n_p);
}
