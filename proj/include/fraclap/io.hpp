#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fraclap/blockenc.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/ratapprox.hpp"
#include "fraclap/refsolve.hpp"
#include "fraclap/schrod.hpp"

namespace fraclap {

constexpr int kSchemaVersion = 1;

inline nlohmann::json model_to_json(const RationalModel& model) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "rational_model";
  j["s"] = model.s;
  j["interval"] = {model.lo, model.hi};
  j["poles"] = std::vector<double>(model.b.data(), model.b.data() + model.b.size());
  j["residues"] = std::vector<double>(model.c.data(), model.c.data() + model.c.size());
  j["c_inf"] = model.c_inf;
  j["sup_error"] = model.sup_err;
  j["n_r"] = model.n_r;
  j["n_active"] = model.n_active;
  return j;
}

inline RationalModel model_from_json(const nlohmann::json& j) {
  RationalModel model;
  model.s = j.at("s").get<double>();
  model.lo = j.at("interval").at(0).get<double>();
  model.hi = j.at("interval").at(1).get<double>();
  const auto poles = j.at("poles").get<std::vector<double>>();
  const auto res = j.at("residues").get<std::vector<double>>();
  if (poles.size() != res.size()) throw structure_error("pole and residue counts differ");
  model.b = Eigen::Map<const VectorXd>(poles.data(), poles.size());
  model.c = Eigen::Map<const VectorXd>(res.data(), res.size());
  model.c_inf = j.at("c_inf").get<double>();
  model.sup_err = j.value("sup_error", 0.0);
  model.n_r = j.at("n_r").get<int>();
  model.n_active = j.at("n_active").get<int>();
  return model;
}

inline nlohmann::json report_to_json(const SolveReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "solve_report";
  j["h"] = rep.h;
  j["d"] = rep.d;
  j["n_r"] = rep.n_r;
  j["s"] = rep.s;
  j["error_vs_oracle"] = rep.error_vs_oracle;
  j["observed_order"] = rep.observed_order;
  j["kappa"] = rep.kappa;
  j["norm_u_tilde"] = rep.norm_u_tilde;
  j["norm_u_h"] = rep.norm_u_h;
  j["eta1_measured"] = rep.eta1_measured;
  j["eta1_bound"] = rep.eta1_bound;
  return j;
}

inline nlohmann::json be_to_json(const BlockEncoding& be, double eps_measured) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "block_encoding";
  j["alpha"] = be.alpha;
  j["m"] = be.m;
  j["n_sys"] = be.n_sys;
  j["eps_declared"] = be.eps;
  j["eps_measured"] = eps_measured;
  j["target_dim"] = be.target_dim;
  j["tally"] = {{"laplacian", be.tally_lap}, {"diagonal", be.tally_diag}};
  return j;
}

inline const char* depth_name(TrotterDepth depth) {
  switch (depth) {
    case TrotterDepth::outer: return "outer";
    case TrotterDepth::inner: return "inner";
    default: return "full";
  }
}

inline nlohmann::json pipeline_to_json(const PipelineReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "pipeline_report";
  j["t"] = rep.t;
  j["r"] = rep.r;
  j["delta"] = rep.delta;
  j["n_p"] = rep.n_p;
  j["n_t"] = rep.n_t;
  j["evolution"] = rep.n_t == 0 ? "exact" : depth_name(rep.depth);
  j["steady_rel_error"] = rep.steady_rel_error;
  j["err_vs_uh"] = rep.err_vs_uh;
  j["spread4"] = rep.spread4;
  j["boundary_ratio"] = rep.boundary_ratio;
  j["t0_identity_dev"] = rep.t0_identity_dev;
  j["n_p_doubled"] = rep.doubled;
  return j;
}

inline void study_to_csv(const ConvergenceStudy& study, std::ostream& os) {
  os << "M,h,error,order\n" << std::setprecision(17);
  for (const auto& row : study.rows)
    os << row.m << ',' << row.h << ',' << row.error << ',' << row.order << '\n';
}

inline void gridfunction_to_csv(const GridFunction& g, std::ostream& os) {
  const int n = g.spec.points_per_dim();
  os << std::setprecision(17);
  for (int k = 0; k < g.spec.d; ++k) os << 'x' << k + 1 << ',';
  os << "value\n";
  for (long idx = 0; idx < g.values.size(); ++idx) {
    long rem = idx;
    for (int k = 0; k < g.spec.d; ++k) {
      os << g.spec.a + (rem % n + 1) * g.spec.h << ',';
      rem /= n;
    }
    os << g.values(idx) << '\n';
  }
}

inline void write_matrix_bin(const std::string& path, const MatrixXcd& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw structure_error("cannot open " + path);
  const std::int64_t rows = m.rows(), cols = m.cols(), complex_flag = 1;
  os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  os.write(reinterpret_cast<const char*>(&complex_flag), sizeof complex_flag);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof re);
      os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw structure_error("cannot open " + path);
  os << j.dump(2) << '\n';
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw structure_error("cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw structure_error("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace fraclap
