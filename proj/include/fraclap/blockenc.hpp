#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/qop.hpp"
#include "fraclap/ratapprox.hpp"

namespace fraclap {

struct BlockEncoding {
  QOpPtr u;
  double alpha = 1.0;
  int m = 0;
  int n_sys = 0;
  double eps = 0.0;
  long target_dim = 1;
  int tally_lap = 0;
  int tally_diag = 0;
  int nq() const { return m + n_sys; }
};

// orthogonal matrix whose first column is v (normalized)
inline MatrixXd completion_unitary(const VectorXd& v) {
  const long n = v.size();
  VectorXd w = v.normalized();
  MatrixXd q = MatrixXd::Identity(n, n);
  w(0) -= 1.0;
  const double r2 = w.squaredNorm();
  if (r2 > 1e-28) q -= (2.0 / r2) * (w * w.transpose());
  return q;
}

inline BlockEncoding be_identity(int n_sys) {
  BlockEncoding be;
  be.u = make_identity(n_sys);
  be.n_sys = n_sys;
  be.target_dim = 1L << n_sys;
  return be;
}

namespace detail {

// op on (slow, fast) lifted over an untouched middle register
inline QOpPtr embed_mid(QOpPtr op, int n_slow, int n_mid, int n_fast) {
  if (op->nq != n_slow + n_fast) throw dimension_error("embedded register size mismatch");
  if (n_mid == 0) return op;
  if (n_slow == 0) return tensor(make_identity(n_mid), op);
  std::vector<int> perm(n_slow + n_mid + n_fast);
  for (int p = 0; p < n_fast; ++p) perm[p] = p;
  for (int p = n_fast; p < n_fast + n_slow; ++p) perm[p] = p + n_mid;
  for (int p = n_fast + n_slow; p < n_fast + n_slow + n_mid; ++p) perm[p] = p - n_slow;
  QOpPtr pi = permute(perm);
  return product({adjoint_of(pi), tensor(make_identity(n_mid), op), pi});
}

}  // namespace detail

inline BlockEncoding be_laplacian_1d(const GridSpec& spec) {
  if (!spec.quantum_compatible())
    throw dimension_error("interior point count must be a power of two");
  const int nx = spec.n_x;
  const long n2 = 1L << (nx + 1);
  MatrixXcd c = MatrixXcd::Zero(n2, n2);
  for (long j = 0; j < n2; ++j) c((j + 1) % n2, j) = 1.0;  // shift with a wrap flag
  QOpPtr cyc = make_dense(c);
  VectorXd prep(4);
  prep << std::sqrt(0.5), 0.5, 0.5, 0.0;
  QOpPtr p = make_dense(completion_unitary(prep));
  QOpPtr pw = tensor(p, make_identity(nx + 1));
  std::vector<QOpPtr> branches = {make_identity(nx + 1), scaled(-1.0, cyc),
                                  scaled(-1.0, adjoint_of(cyc)), make_identity(nx + 1)};
  BlockEncoding be;
  be.u = product({adjoint_of(pw), select(std::move(branches)), pw});
  be.alpha = 4.0 / (spec.h * spec.h);
  be.m = 3;
  be.n_sys = nx;
  be.target_dim = 1L << nx;
  be.tally_lap = 1;
  return be;
}

inline BlockEncoding be_diagonal_B(const RationalModel& model) {
  const int nr = model.n_r > 0 ? ilog2(model.n_r) : 0;
  const long n = 1L << nr;
  VectorXd b = VectorXd::Zero(n);
  for (int l = 0; l < model.n_r; ++l) b(l) = model.b(l);
  const double alpha = b.maxCoeff() > 0.0 ? b.maxCoeff() : 1.0;
  MatrixXcd u = MatrixXcd::Zero(2 * n, 2 * n);
  for (long i = 0; i < n; ++i) {
    const double di = b(i) / alpha;
    const double si = std::sqrt(std::max(0.0, 1.0 - di * di));
    u(i, i) = di;
    u(i, n + i) = si;
    u(n + i, i) = si;
    u(n + i, n + i) = -di;
  }
  BlockEncoding be;
  be.u = make_dense(std::move(u));
  be.alpha = alpha;
  be.m = 1;
  be.n_sys = nr;
  be.target_dim = n;
  be.tally_diag = 1;
  return be;
}

inline BlockEncoding be_add(const std::vector<BlockEncoding>& parts) {
  if (parts.empty()) throw dimension_error("empty sum");
  if (parts.size() == 1) return parts[0];
  const int n = parts[0].n_sys;
  int m_sum = 0;
  int m_max = 0;
  for (const auto& p : parts) {
    if (p.n_sys != n) throw dimension_error("summands must share system size");
    m_sum += p.m;
    m_max = std::max(m_max, p.m);
  }
  const int kp = ilog2(next_pow2(static_cast<long>(parts.size())));
  const int mt = m_sum - kp;
  if (mt < m_max) throw structure_error("ancilla budget too small for exact composition");
  double asum = 0.0;
  for (const auto& p : parts) asum += p.alpha;
  VectorXd prep = VectorXd::Zero(1L << kp);
  for (size_t i = 0; i < parts.size(); ++i) prep(i) = std::sqrt(parts[i].alpha / asum);
  std::vector<QOpPtr> branches;
  for (const auto& p : parts) branches.push_back(tensor(make_identity(mt - p.m), p.u));
  while (branches.size() < (1UL << kp)) branches.push_back(make_identity(mt + n));
  QOpPtr pw = tensor(make_dense(completion_unitary(prep)), make_identity(mt + n));
  BlockEncoding be;
  be.u = product({adjoint_of(pw), select(std::move(branches)), pw});
  be.alpha = asum;
  be.m = m_sum;
  be.n_sys = n;
  be.target_dim = parts[0].target_dim;
  double eps = parts[0].eps, acc = parts[0].alpha;
  be.tally_lap = parts[0].tally_lap;
  be.tally_diag = parts[0].tally_diag;
  for (size_t i = 1; i < parts.size(); ++i) {
    eps = acc * parts[i].eps + parts[i].alpha * eps;
    acc += parts[i].alpha;
    be.tally_lap += parts[i].tally_lap;
    be.tally_diag += parts[i].tally_diag;
  }
  be.eps = eps;
  return be;
}

inline BlockEncoding be_multiply(const BlockEncoding& a, const BlockEncoding& b) {
  if (a.n_sys != b.n_sys) throw dimension_error("factors must share system size");
  const int n = a.n_sys;
  QOpPtr u1 = detail::embed_mid(a.u, a.m, b.m, n);
  QOpPtr u2 = tensor(make_identity(a.m), b.u);
  BlockEncoding be;
  be.u = product({u1, u2});
  be.alpha = a.alpha * b.alpha;
  be.m = a.m + b.m;
  be.n_sys = n;
  be.target_dim = a.target_dim;
  be.eps = a.alpha * b.eps + b.alpha * a.eps;
  be.tally_lap = a.tally_lap + b.tally_lap;
  be.tally_diag = a.tally_diag + b.tally_diag;
  return be;
}

inline BlockEncoding be_tensor(const BlockEncoding& a, const BlockEncoding& b) {
  QOpPtr u1 = detail::embed_mid(tensor(a.u, make_identity(b.n_sys)), a.m, b.m,
                                a.n_sys + b.n_sys);
  QOpPtr u2 =
      tensor(make_identity(a.m), detail::embed_mid(b.u, b.m, a.n_sys, b.n_sys));
  BlockEncoding be;
  be.u = product({u1, u2});
  be.alpha = a.alpha * b.alpha;
  be.m = a.m + b.m;
  be.n_sys = a.n_sys + b.n_sys;
  be.target_dim = a.target_dim * b.target_dim;
  be.eps = a.alpha * b.eps + b.alpha * a.eps;
  be.tally_lap = a.tally_lap + b.tally_lap;
  be.tally_diag = a.tally_diag + b.tally_diag;
  return be;
}

inline BlockEncoding be_dagger(const BlockEncoding& a) {
  BlockEncoding be = a;
  be.u = adjoint_of(a.u);
  return be;
}

// encodes diag(A, I) on one extra system qubit
inline BlockEncoding be_controlled_diag(const BlockEncoding& a) {
  const int n = a.n_sys, m = a.m;
  const double at = std::max(a.alpha, 1.0);
  auto rot = [](double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    MatrixXcd r(2, 2);
    r << c, -s, s, c;
    return make_dense(std::move(r));
  };
  QOpPtr b0 = product({tensor(rot(a.alpha / at), make_identity(m + n)),
                       tensor(make_identity(1), a.u)});
  QOpPtr b1 = tensor(rot(1.0 / at), make_identity(m + n));
  // move the control qubit above the ancillas, branch, move it back
  std::vector<int> perm(m + n + 2);
  for (int p = 0; p < n; ++p) perm[p] = p;
  for (int p = n; p <= n + m; ++p) perm[p] = p + 1;
  perm[n + m + 1] = n;
  QOpPtr pi = permute(perm);
  BlockEncoding be;
  be.u = product({adjoint_of(pi), select({std::move(b0), std::move(b1)}), pi});
  be.alpha = at;
  be.m = m + 1;
  be.n_sys = n + 1;
  be.target_dim = 2 * a.target_dim;
  be.eps = a.eps;
  be.tally_lap = a.tally_lap;
  be.tally_diag = a.tally_diag;
  return be;
}

inline BlockEncoding be_laplacian_dd(const GridSpec& spec) {
  const BlockEncoding a1 = be_laplacian_1d(spec);
  std::vector<BlockEncoding> terms;
  for (int axis = 0; axis < spec.d; ++axis) {
    BlockEncoding t = be_tensor(be_identity(spec.n_x * (spec.d - 1 - axis)),
                                be_tensor(a1, be_identity(spec.n_x * axis)));
    terms.push_back(std::move(t));
  }
  return be_add(terms);
}

inline BlockEncoding be_Htilde(const GridSpec& spec, const RationalModel& model) {
  const int nr = model.n_r > 0 ? ilog2(model.n_r) : 0;
  const BlockEncoding h = be_add(
      {be_tensor(be_identity(nr), be_laplacian_dd(spec)),
       be_tensor(be_diagonal_B(model), be_identity(spec.n_x * spec.d))});
  return be_controlled_diag(h);
}

inline double verify_block_encoding(const BlockEncoding& be, const MatrixXcd& target) {
  if (target.rows() != target.cols() || target.rows() != be.target_dim ||
      be.target_dim != (1L << be.n_sys))
    throw dimension_error("target size does not match the encoding");
  const MatrixXcd block = extract_block(*be.u, be.target_dim);
  return spectral_norm(MatrixXcd(target - be.alpha * block));
}

inline double verify_block_encoding(const BlockEncoding& be, const MatrixXd& target) {
  return verify_block_encoding(be, MatrixXcd(target.cast<cd>()));
}

// max deviation of U†U from the identity, probed on random states above the cap
inline double unitarity_defect(const BlockEncoding& be, int probes = 8, unsigned seed = 7) {
  if (be.u->nq <= 10) {
    const MatrixXcd u = to_matrix(*be.u);
    return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols()))
        .cwiseAbs()
        .maxCoeff();
  }
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    VectorXcd x(be.u->dim());
    for (long i = 0; i < x.size(); ++i) x(i) = cd(dist(gen), dist(gen));
    x /= x.norm();
    const VectorXcd y = be.u->apply(be.u->apply(x), true);
    worst = std::max(worst, (y - x).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace fraclap
