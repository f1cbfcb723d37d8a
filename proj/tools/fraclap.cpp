#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fraclap/fraclap.hpp>
#include <fraclap/io.hpp>

namespace {

using namespace fraclap;
using nlohmann::json;

json maybe_config(const std::string& path) {
  return path.empty() ? json::object() : load_json(path);
}

// command line wins over the config file, which wins over the defaults
template <typename T>
void fallback(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
  if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw structure_error("cannot parse integer list entry '" + item + "'");
    }
    if (used != item.size()) throw structure_error("trailing junk in list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw structure_error("empty integer list");
  return out;
}

GridFunction load_csv_field(const std::string& path, const GridSpec& spec) {
  std::ifstream is(path);
  if (!is) throw structure_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const size_t cut = line.find_last_of(',');
    const std::string cell = cut == std::string::npos ? line : line.substr(cut + 1);
    try {
      size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used == 0) continue;
      values.push_back(v);
    } catch (const std::exception&) {
      continue;  // header or annotation row
    }
  }
  if (static_cast<long>(values.size()) != spec.total_points())
    throw dimension_error("sampled field has " + std::to_string(values.size()) +
                          " values, grid needs " + std::to_string(spec.total_points()));
  GridFunction f;
  f.spec = spec;
  f.values = Eigen::Map<const VectorXd>(values.data(), static_cast<long>(values.size()));
  return f;
}

GridFunction make_field(const std::string& name, const GridSpec& spec) {
  if (name == "sin") return sample_rhs(field_sin(spec), spec);
  if (name == "ones") return sample_rhs(field_ones(), spec);
  if (name == "gaussian-bump") return sample_rhs(field_gaussian_bump(spec), spec);
  if (name == "zero" || name == "zeros") return sample_rhs(field_zero(), spec);
  return load_csv_field(name, spec);
}

TrotterDepth parse_depth(const std::string& name) {
  if (name == "outer") return TrotterDepth::outer;
  if (name == "inner") return TrotterDepth::inner;
  if (name == "full") return TrotterDepth::full;
  throw structure_error("unknown evolution depth '" + name + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw structure_error("cannot open " + path);
  os << std::setprecision(17);
  return os;
}

RationalModel synthetic_model(const GridSpec& spec, int n_r) {
  if (n_r < 1 || !is_pow2(static_cast<long>(n_r)))
    throw structure_error("term count must be a positive power of two");
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

struct FitArgs {
  double s = 0.5, tol = 1e-8;
  std::vector<double> interval = {1.0, 1e4};
  std::string out = "model.json", config;
};

int run_fit(const FitArgs& a) {
  const RationalModel model = fit_model(a.s, a.interval.at(0), a.interval.at(1), a.tol);
  save_json(a.out, model_to_json(model));
  std::cout << "fit: n_active=" << model.n_active << " n_r=" << model.n_r
            << " sup_error=" << model.sup_err << " -> " << a.out << '\n';
  return 0;
}

struct SolveArgs {
  double s = 0.5, tol = 1e-8;
  int d = 1, m = 16;
  std::vector<double> domain = {0.0, 1.0};
  std::string field = "sin", out_prefix = "solve", config;
};

int run_solve(const SolveArgs& a) {
  const GridSpec spec = make_grid(a.domain.at(0), a.domain.at(1), a.m, a.d);
  const RationalModel model = fit_model(a.s, enclosure_lo(spec), enclosure_hi(spec), a.tol);
  const GridFunction f = make_field(a.field, spec);
  const GridFunction u = rational_solution(model, spec, f);
  GridFunction diff = u;
  diff.values -= spectral_fractional_reference(spec, a.s, f).values;

  SolveReport rep;
  rep.h = spec.h;
  rep.d = spec.d;
  rep.n_r = model.n_r;
  rep.s = a.s;
  rep.error_vs_oracle = discrete_l2_norm(diff);
  rep.norm_u_h = u.values.norm();
  const long terms = std::max(1, model.n_r);
  if (spec.total_points() * terms <= kDenseDimCap)
    rep.kappa = condition_number_Htilde(spec, model).kappa;
  if (spec.quantum_compatible() && 2 * terms * spec.total_points() <= kDenseDimCap &&
      rep.norm_u_h > 0.0) {
    const CombinedSystem sys = build_combined(spec, model, f);
    const VectorXd u_tilde = solve_tilde(sys);
    rep.norm_u_tilde = u_tilde.norm();
    const Eta1Estimate est = eta1_estimate(u_tilde, u.values, model, spec.d);
    rep.eta1_measured = est.measured;
    rep.eta1_bound = est.bound;
  }

  auto csv = open_out(a.out_prefix + "_solution.csv");
  gridfunction_to_csv(u, csv);
  save_json(a.out_prefix + "_report.json", report_to_json(rep));
  std::cout << "solve: error_vs_oracle=" << rep.error_vs_oracle << " kappa=" << rep.kappa
            << " -> " << a.out_prefix << "_{solution.csv,report.json}" << '\n';
  return 0;
}

struct VerifyBeArgs {
  int d = 1, m = 5, n_r = 2;
  std::vector<double> domain = {0.0, 1.0};
  std::string out = "be.json", config;
};

int run_verify_be(const VerifyBeArgs& a) {
  const GridSpec spec = make_grid(a.domain.at(0), a.domain.at(1), a.m, a.d);
  const RationalModel model = synthetic_model(spec, a.n_r);
  const long n = spec.total_points();
  if (2 * a.n_r * n > kDenseDimCap)
    throw dimension_error("verification target exceeds the dense dimension cap");

  const BlockEncoding be = be_Htilde(spec, model);
  const MatrixXd add = laplacian_dd_dense(spec);
  MatrixXd h = kron(MatrixXd::Identity(a.n_r, a.n_r), add);
  VectorXd bdiag = model.b;
  h += kron(MatrixXd(bdiag.asDiagonal()), MatrixXd::Identity(n, n));
  MatrixXd htilde = MatrixXd::Identity(2 * a.n_r * n, 2 * a.n_r * n);
  htilde.topLeftCorner(a.n_r * n, a.n_r * n) = h;

  const double eps = verify_block_encoding(be, htilde);
  const double defect = unitarity_defect(be);
  const double alpha_bound = 2.0 * (4.0 * spec.d / (spec.h * spec.h) + model.b_max());

  json j = be_to_json(be, eps);
  j["unitarity_defect"] = defect;
  j["alpha_bound"] = alpha_bound;
  j["alpha_within_bound"] = be.alpha <= alpha_bound;
  save_json(a.out, j);
  std::cout << "verify-be: eps=" << eps << " alpha=" << be.alpha << " m=" << be.m
            << " defect=" << defect << " -> " << a.out << '\n';
  if (eps > 1e-9 || be.alpha > alpha_bound || defect > 1e-10)
    throw bound_error(1e-9 - eps, "block encoding failed verification");
  return 0;
}

struct SchrodArgs {
  int d = 1, m = 3;
  long n_p = 64, n_t = 0;
  double s = 0.5, tol = 1e-8, delta = 1e-2, t = 0.0, r = 9.0;
  std::vector<double> domain = {0.0, 1.0};
  std::string field = "sin", depth = "outer", out = "schrod.json", config;
};

int run_schrod(const SchrodArgs& a) {
  const GridSpec spec = make_grid(a.domain.at(0), a.domain.at(1), a.m, a.d);
  const RationalModel model = fit_model(a.s, enclosure_lo(spec), enclosure_hi(spec), a.tol);
  const GridFunction f = make_field(a.field, spec);
  SchrodConfig cfg;
  cfg.t = a.t;
  cfg.r = a.r;
  cfg.n_p = a.n_p;
  cfg.n_t = a.n_t;
  cfg.delta = a.delta;
  cfg.depth = parse_depth(a.depth);
  const PipelineResult res = run_pipeline(spec, model, f, cfg);
  save_json(a.out, pipeline_to_json(res.report));
  std::cout << "schrod: steady_rel_error=" << res.report.steady_rel_error
            << " err_vs_uh=" << res.report.err_vs_uh << " n_p=" << res.report.n_p << " -> "
            << a.out << '\n';
  return 0;
}

struct BenchArgs {
  std::string study = "convergence";
  double s = 0.5, tol = 1e-9, t = 0.0, delta = 1e-3, r = 9.0;
  int d = 1, trials = 20;
  unsigned seed = 1;
  long n_p = 32, n_t0 = 8;
  std::vector<double> domain = {0.0, 1.0};
  std::vector<double> interval = {1.0, 1e4};
  std::string m_list = "8,16,32,64";
  std::string out = "bench.csv", config;
};

int bench_convergence(const BenchArgs& a) {
  const ConvergenceStudy study = convergence_study(a.s, a.d, parse_int_list(a.m_list), a.tol,
                                                   nullptr, a.domain.at(0), a.domain.at(1));
  auto os = open_out(a.out);
  study_to_csv(study, os);
  std::cout << "bench convergence: observed order = " << study.observed_order << " -> "
            << a.out << '\n';
  return 0;
}

int bench_conditioning(const BenchArgs& a) {
  RationalModel zero_shift;
  zero_shift.b = VectorXd::Zero(1);
  zero_shift.c = VectorXd::Ones(1);
  zero_shift.n_active = zero_shift.n_r = 1;
  const std::vector<int> ms = parse_int_list(a.m_list);
  auto os = open_out(a.out);
  os << "M,h,kappa,norm_inv\n";
  VectorXd lh(static_cast<long>(ms.size())), lk(static_cast<long>(ms.size()));
  for (size_t i = 0; i < ms.size(); ++i) {
    const GridSpec spec = make_grid(a.domain.at(0), a.domain.at(1), ms[i], a.d);
    const ConditionNumbers cn = condition_number_Htilde(spec, zero_shift);
    os << ms[i] << ',' << spec.h << ',' << cn.kappa << ',' << cn.norm_inv << '\n';
    lh(static_cast<long>(i)) = std::log(1.0 / spec.h);
    lk(static_cast<long>(i)) = std::log(cn.kappa);
  }
  std::cout << "bench conditioning: log-kappa slope = " << fit_slope(lh, lk) << " -> " << a.out
            << '\n';
  return 0;
}

int bench_rational_decay(const BenchArgs& a) {
  auto os = open_out(a.out);
  os << "order,n_r,sup_error\n";
  std::vector<double> lm, le;
  for (int m = 2; m <= 16; ++m) {
    const BarycentricForm form =
        aaa_fit(a.s, a.interval.at(0), a.interval.at(1), 0.0, m, 10000, false);
    RationalModel model = to_partial_fractions(form, a.s, a.interval.at(0), a.interval.at(1));
    model.sup_err = sup_error(model);
    os << m << ',' << model.n_r << ',' << model.sup_err << '\n';
    if (model.sup_err > 0.0) {
      lm.push_back(static_cast<double>(m));
      le.push_back(std::log(model.sup_err));
    }
  }
  const VectorXd x = Eigen::Map<const VectorXd>(lm.data(), static_cast<long>(lm.size()));
  const VectorXd y = Eigen::Map<const VectorXd>(le.data(), static_cast<long>(le.size()));
  std::cout << "bench rational-decay: log-error slope = " << fit_slope(x, y)
            << " r2 = " << fit_r2(x, y) << " -> " << a.out << '\n';
  return 0;
}

int bench_trotter(const BenchArgs& a) {
  const std::vector<int> ms = parse_int_list(a.m_list);
  const GridSpec spec = make_grid(a.domain.at(0), a.domain.at(1), ms.at(0), a.d);
  const RationalModel model = fit_model(a.s, enclosure_lo(spec), enclosure_hi(spec), 1e-6);
  const GridFunction f = sample_rhs(field_sin(spec), spec);
  const CombinedSystem sys = build_combined(spec, model, f);
  const double t =
      a.t > 0.0 ? a.t : condition_number_Htilde(spec, model).norm_inv * std::log(1.0 / a.delta);
  const HamiltonianFactors fac = build_augmented(sys, t);
  SchrodConfig cfg;
  cfg.t = t;
  cfg.r = a.r;
  cfg.n_p = a.n_p;
  cfg.delta = a.delta;
  const WarpedState st0 = init_warped(fac, cfg, sys.f_tilde);
  const WarpedState exact = evolve_exact(st0, fac, cfg);
  const double ref = exact.amplitudes.norm();

  auto os = open_out(a.out);
  os << "n_t,err_outer,err_inner\n";
  VectorXd ln(5), lo(5);
  long n_t = a.n_t0;
  for (int i = 0; i < 5; ++i, n_t *= 2) {
    SchrodConfig scfg = cfg;
    scfg.n_t = n_t;
    const double eo =
        (evolve_trotter(st0, fac, scfg, TrotterDepth::outer).amplitudes - exact.amplitudes)
            .norm() /
        ref;
    const double ei =
        (evolve_trotter(st0, fac, scfg, TrotterDepth::inner).amplitudes - exact.amplitudes)
            .norm() /
        ref;
    os << n_t << ',' << eo << ',' << ei << '\n';
    ln(i) = std::log(static_cast<double>(n_t));
    lo(i) = std::log(eo);
  }
  std::cout << "bench trotter: order = " << -fit_slope(ln, lo) << " -> " << a.out << '\n';
  return 0;
}

int bench_norm_bounds(const BenchArgs& a) {
  std::mt19937 rng(a.seed);
  std::uniform_real_distribution<double> sdist(0.2, 0.8);
  auto os = open_out(a.out);
  os << "trial,d,s,n_r,upper_slack,lower_slack\n";
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < a.trials; ++trial) {
    const int d = (trial % 2) + 1;
    const GridSpec spec = make_grid(0.0, 1.0, d == 1 ? 9 : 5, d);
    const double s = sdist(rng);
    const RationalModel model = fit_model(s, enclosure_lo(spec), enclosure_hi(spec), 1e-7);
    const GridFunction f = sample_rhs(field_sin(spec), spec);
    const NormBoundsReport rep = norm_bounds_check(model, spec, f);
    os << trial << ',' << d << ',' << s << ',' << model.n_r << ',' << rep.upper_slack << ','
       << rep.lower_slack << '\n';
    worst = std::min({worst, rep.upper_slack, rep.lower_slack});
  }
  std::cout << "bench norm-bounds: min slack = " << worst << " over " << a.trials
            << " trials -> " << a.out << '\n';
  return 0;
}

int run_bench(const BenchArgs& a) {
  if (a.study == "convergence") return bench_convergence(a);
  if (a.study == "conditioning") return bench_conditioning(a);
  if (a.study == "rational-decay") return bench_rational_decay(a);
  if (a.study == "trotter") return bench_trotter(a);
  if (a.study == "norm-bounds") return bench_norm_bounds(a);
  throw structure_error("unknown study '" + a.study + "'");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("FRACLAP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"rational-approximation solver for the spectral fractional laplacian"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit a partial-fraction model of x^(-s)");
  auto* fit_s = fit->add_option("--s", fit_args.s, "fractional exponent in (0,1)");
  auto* fit_iv = fit->add_option("--interval", fit_args.interval, "fit interval lo hi")
                     ->expected(2);
  auto* fit_tol = fit->add_option("--tol", fit_args.tol, "target sup error");
  auto* fit_out = fit->add_option("--out", fit_args.out, "model JSON path");
  fit->add_option("--config", fit_args.config, "JSON config file");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "classical rational-sum solve with references");
  auto* solve_s = solve->add_option("--s", solve_args.s, "fractional exponent in (0,1)");
  auto* solve_d = solve->add_option("--d", solve_args.d, "spatial dimension");
  auto* solve_m = solve->add_option("--M", solve_args.m, "subintervals per axis");
  auto* solve_dom = solve->add_option("--domain", solve_args.domain, "domain endpoints a b")
                        ->expected(2);
  auto* solve_f = solve->add_option("--f", solve_args.field,
                                    "right-hand side: sin|ones|gaussian-bump|zero|CSV path");
  auto* solve_tol = solve->add_option("--tol", solve_args.tol, "fit tolerance");
  auto* solve_out =
      solve->add_option("--out-prefix", solve_args.out_prefix, "output path prefix");
  solve->add_option("--config", solve_args.config, "JSON config file");

  VerifyBeArgs be_args;
  auto* vbe = app.add_subcommand("verify-be", "verify the extended-system block encoding");
  auto* vbe_d = vbe->add_option("--d", be_args.d, "spatial dimension");
  auto* vbe_m = vbe->add_option("--M", be_args.m, "subintervals per axis (M-1 a power of two)");
  auto* vbe_nr = vbe->add_option("--n-r", be_args.n_r, "pole count (power of two)");
  auto* vbe_dom = vbe->add_option("--domain", be_args.domain, "domain endpoints a b")
                      ->expected(2);
  auto* vbe_out = vbe->add_option("--out", be_args.out, "encoding report JSON path");
  vbe->add_option("--config", be_args.config, "JSON config file");

  SchrodArgs schrod_args;
  auto* sch = app.add_subcommand("schrod", "dilated-system evolution pipeline");
  auto* sch_d = sch->add_option("--d", schrod_args.d, "spatial dimension");
  auto* sch_m = sch->add_option("--M", schrod_args.m, "subintervals per axis");
  auto* sch_dom = sch->add_option("--domain", schrod_args.domain, "domain endpoints a b")
                      ->expected(2);
  auto* sch_s = sch->add_option("--s", schrod_args.s, "fractional exponent in (0,1)");
  auto* sch_tol = sch->add_option("--tol", schrod_args.tol, "fit tolerance");
  auto* sch_delta = sch->add_option("--delta", schrod_args.delta, "target accuracy in (0,1)");
  auto* sch_np = sch->add_option("--n-p", schrod_args.n_p, "momentum grid size (power of two)");
  auto* sch_nt = sch->add_option("--n-t", schrod_args.n_t, "Trotter steps; 0 = exact");
  auto* sch_t = sch->add_option("--T", schrod_args.t, "evolution time; 0 = accuracy-driven");
  auto* sch_r = sch->add_option("--R", schrod_args.r, "warping radius");
  auto* sch_depth =
      sch->add_option("--depth", schrod_args.depth, "Trotter factorization: outer|inner|full");
  auto* sch_f = sch->add_option("--f", schrod_args.field,
                                "right-hand side: sin|ones|gaussian-bump|zero|CSV path");
  auto* sch_out = sch->add_option("--out", schrod_args.out, "pipeline report JSON path");
  sch->add_option("--config", schrod_args.config, "JSON config file");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "reproducible study tables");
  auto* bn_study = bench->add_option(
      "--study", bench_args.study,
      "convergence|conditioning|rational-decay|trotter|norm-bounds");
  auto* bn_s = bench->add_option("--s", bench_args.s, "fractional exponent in (0,1)");
  auto* bn_d = bench->add_option("--d", bench_args.d, "spatial dimension");
  auto* bn_ml = bench->add_option("--M-list,--M", bench_args.m_list,
                                  "comma-separated subinterval counts");
  auto* bn_dom = bench->add_option("--domain", bench_args.domain, "domain endpoints a b")
                     ->expected(2);
  auto* bn_iv = bench->add_option("--interval", bench_args.interval, "fit interval lo hi")
                    ->expected(2);
  auto* bn_tol = bench->add_option("--tol", bench_args.tol, "fit tolerance");
  auto* bn_t = bench->add_option("--T", bench_args.t, "evolution time; 0 = accuracy-driven");
  auto* bn_delta = bench->add_option("--delta", bench_args.delta, "target accuracy");
  auto* bn_r = bench->add_option("--R", bench_args.r, "warping radius");
  auto* bn_np = bench->add_option("--n-p", bench_args.n_p, "momentum grid size");
  auto* bn_nt0 = bench->add_option("--n-t", bench_args.n_t0, "initial Trotter step count");
  auto* bn_trials = bench->add_option("--trials", bench_args.trials, "randomized trials");
  auto* bn_seed = bench->add_option("--seed", bench_args.seed, "random seed");
  auto* bn_out = bench->add_option("--out", bench_args.out, "CSV output path");
  bench->add_option("--config", bench_args.config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) {
      const json cfg = maybe_config(fit_args.config);
      fallback(fit_s, cfg, "s", fit_args.s);
      fallback(fit_iv, cfg, "interval", fit_args.interval);
      fallback(fit_tol, cfg, "tol", fit_args.tol);
      fallback(fit_out, cfg, "out", fit_args.out);
      return run_fit(fit_args);
    }
    if (*solve) {
      const json cfg = maybe_config(solve_args.config);
      fallback(solve_s, cfg, "s", solve_args.s);
      fallback(solve_d, cfg, "d", solve_args.d);
      fallback(solve_m, cfg, "M", solve_args.m);
      fallback(solve_dom, cfg, "domain", solve_args.domain);
      fallback(solve_f, cfg, "f", solve_args.field);
      fallback(solve_tol, cfg, "tol", solve_args.tol);
      fallback(solve_out, cfg, "out_prefix", solve_args.out_prefix);
      return run_solve(solve_args);
    }
    if (*vbe) {
      const json cfg = maybe_config(be_args.config);
      fallback(vbe_d, cfg, "d", be_args.d);
      fallback(vbe_m, cfg, "M", be_args.m);
      fallback(vbe_nr, cfg, "n_r", be_args.n_r);
      fallback(vbe_dom, cfg, "domain", be_args.domain);
      fallback(vbe_out, cfg, "out", be_args.out);
      return run_verify_be(be_args);
    }
    if (*sch) {
      const json cfg = maybe_config(schrod_args.config);
      fallback(sch_d, cfg, "d", schrod_args.d);
      fallback(sch_m, cfg, "M", schrod_args.m);
      fallback(sch_dom, cfg, "domain", schrod_args.domain);
      fallback(sch_s, cfg, "s", schrod_args.s);
      fallback(sch_tol, cfg, "tol", schrod_args.tol);
      fallback(sch_delta, cfg, "delta", schrod_args.delta);
      fallback(sch_np, cfg, "n_p", schrod_args.n_p);
      fallback(sch_nt, cfg, "n_t", schrod_args.n_t);
      fallback(sch_t, cfg, "T", schrod_args.t);
      fallback(sch_r, cfg, "R", schrod_args.r);
      fallback(sch_depth, cfg, "depth", schrod_args.depth);
      fallback(sch_f, cfg, "f", schrod_args.field);
      fallback(sch_out, cfg, "out", schrod_args.out);
      return run_schrod(schrod_args);
    }
    const json cfg = maybe_config(bench_args.config);
    fallback(bn_study, cfg, "study", bench_args.study);
    fallback(bn_s, cfg, "s", bench_args.s);
    fallback(bn_d, cfg, "d", bench_args.d);
    fallback(bn_ml, cfg, "M_list", bench_args.m_list);
    fallback(bn_dom, cfg, "domain", bench_args.domain);
    fallback(bn_iv, cfg, "interval", bench_args.interval);
    fallback(bn_tol, cfg, "tol", bench_args.tol);
    fallback(bn_t, cfg, "T", bench_args.t);
    fallback(bn_delta, cfg, "delta", bench_args.delta);
    fallback(bn_r, cfg, "R", bench_args.r);
    fallback(bn_np, cfg, "n_p", bench_args.n_p);
    fallback(bn_nt0, cfg, "n_t", bench_args.n_t0);
    fallback(bn_trials, cfg, "trials", bench_args.trials);
    fallback(bn_seed, cfg, "seed", bench_args.seed);
    fallback(bn_out, cfg, "out", bench_args.out);
    return run_bench(bench_args);
  } catch (const structure_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"category", "config"}}.dump() << '\n';
    return 2;
  } catch (const dimension_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"category", "config"}}.dump() << '\n';
    return 2;
  } catch (const fit_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()},
                                {"category", "numerical"},
                                {"achieved", e.achieved}}
                     .dump()
              << '\n';
    return 3;
  } catch (const bound_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()},
                                {"category", "numerical"},
                                {"slack", e.slack}}
                     .dump()
              << '\n';
    return 3;
  } catch (const recovery_error& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"category", "numerical"}}.dump() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"category", "runtime"}}.dump() << '\n';
    return 3;
  }
}
