#pragma once

#include <memory>
#include <vector>

#include "fraclap/linalg.hpp"

namespace fraclap {

// composable unitaries acting on statevectors, fastest qubit = lowest bit
struct QOp {
  int nq;
  explicit QOp(int n) : nq(n) {
    if (n < 0) throw dimension_error("negative qubit count");
  }
  virtual ~QOp() = default;
  long dim() const { return 1L << nq; }
  virtual bool trivial() const { return false; }
  virtual void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const = 0;
  VectorXcd apply(const VectorXcd& v, bool adjoint = false) const {
    if (v.size() != dim()) throw dimension_error("statevector length mismatch");
    VectorXcd out = v;
    apply_to(out, adjoint);
    return out;
  }
};

using QOpPtr = std::shared_ptr<const QOp>;

struct IdentityOp final : QOp {
  explicit IdentityOp(int n) : QOp(n) {}
  bool trivial() const override { return true; }
  void apply_to(Eigen::Ref<VectorXcd>, bool) const override {}
};

struct DenseOp final : QOp {
  MatrixXcd u;
  explicit DenseOp(MatrixXcd m) : QOp(ilog2(m.rows())), u(std::move(m)) {
    if (u.rows() != u.cols() || u.rows() != dim())
      throw dimension_error("operator must be square with power-of-two size");
  }
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    v = adjoint ? (u.adjoint() * v).eval() : (u * v).eval();
  }
};

struct ScaledOp final : QOp {
  cd s;
  QOpPtr inner;
  ScaledOp(cd scale, QOpPtr op) : QOp(op->nq), s(scale), inner(std::move(op)) {}
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    inner->apply_to(v, adjoint);
    v *= adjoint ? std::conj(s) : s;
  }
};

struct AdjointOp final : QOp {
  QOpPtr inner;
  explicit AdjointOp(QOpPtr op) : QOp(op->nq), inner(std::move(op)) {}
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    inner->apply_to(v, !adjoint);
  }
};

// a on the slow register, b on the fast one
struct TensorOp final : QOp {
  QOpPtr a, b;
  TensorOp(QOpPtr slow, QOpPtr fast)
      : QOp(slow->nq + fast->nq), a(std::move(slow)), b(std::move(fast)) {}
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    const long rows = b->dim(), cols = a->dim();
    if (!b->trivial())
      for (long c = 0; c < cols; ++c) b->apply_to(v.segment(c * rows, rows), adjoint);
    if (!a->trivial()) {
      VectorXcd fiber(cols);
      for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) fiber(c) = v(c * rows + r);
        a->apply_to(fiber, adjoint);
        for (long c = 0; c < cols; ++c) v(c * rows + r) = fiber(c);
      }
    }
  }
};

// matrix product order: ops[0] * ops[1] * ... acts right to left
struct ProductOp final : QOp {
  std::vector<QOpPtr> ops;
  explicit ProductOp(std::vector<QOpPtr> fs)
      : QOp(fs.empty() ? 0 : fs[0]->nq), ops(std::move(fs)) {
    for (const auto& f : ops)
      if (f->nq != nq) throw dimension_error("product factors must share qubit count");
  }
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    if (adjoint)
      for (const auto& f : ops) f->apply_to(v, true);
    else
      for (auto it = ops.rbegin(); it != ops.rend(); ++it) (*it)->apply_to(v, false);
  }
};

// branch register is the slowest; branch i acts on the fast register
struct SelectOp final : QOp {
  std::vector<QOpPtr> branches;
  explicit SelectOp(std::vector<QOpPtr> bs)
      : QOp(ilog2(static_cast<long>(bs.size())) + bs.at(0)->nq), branches(std::move(bs)) {
    const long nb = static_cast<long>(branches.size());
    if (nb != (1L << ilog2(nb))) throw dimension_error("branch count must be a power of two");
    for (const auto& b : branches)
      if (b->nq != branches[0]->nq) throw dimension_error("branches must share qubit count");
  }
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    const long sub = branches[0]->dim();
    for (size_t i = 0; i < branches.size(); ++i)
      if (!branches[i]->trivial()) branches[i]->apply_to(v.segment(i * sub, sub), adjoint);
  }
};

// output bit p is input bit perm[p]
struct PermuteOp final : QOp {
  std::vector<long> src;
  explicit PermuteOp(const std::vector<int>& perm) : QOp(static_cast<int>(perm.size())) {
    std::vector<bool> seen(nq, false);
    for (int p : perm) {
      if (p < 0 || p >= nq || seen[p]) throw dimension_error("invalid qubit permutation");
      seen[p] = true;
    }
    src.resize(dim());
    for (long o = 0; o < dim(); ++o) {
      long i = 0;
      for (int p = 0; p < nq; ++p) i |= ((o >> p) & 1L) << perm[p];
      src[o] = i;
    }
  }
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    VectorXcd tmp = v;
    if (adjoint)
      for (long o = 0; o < dim(); ++o) v(src[o]) = tmp(o);
    else
      for (long o = 0; o < dim(); ++o) v(o) = tmp(src[o]);
  }
};

// applies op to the fastest qubits when the control bit is set
struct ControlledChunkOp final : QOp {
  int ctrl;
  QOpPtr op;
  ControlledChunkOp(int total_nq, int control_bit, QOpPtr target)
      : QOp(total_nq), ctrl(control_bit), op(std::move(target)) {
    if (op->nq > ctrl || ctrl >= nq)
      throw dimension_error("control bit must sit above the target register");
  }
  void apply_to(Eigen::Ref<VectorXcd> v, bool adjoint) const override {
    const long block = 1L << (ctrl + 1), half = 1L << ctrl, sub = op->dim();
    for (long base = 0; base < dim(); base += block)
      for (long off = half; off < block; off += sub)
        op->apply_to(v.segment(base + off, sub), adjoint);
  }
};

inline QOpPtr make_identity(int nq) { return std::make_shared<IdentityOp>(nq); }
inline QOpPtr make_dense(MatrixXcd u) { return std::make_shared<DenseOp>(std::move(u)); }
inline QOpPtr make_dense(const MatrixXd& u) { return make_dense(MatrixXcd(u.cast<cd>())); }
inline QOpPtr scaled(cd s, QOpPtr op) { return std::make_shared<ScaledOp>(s, std::move(op)); }
inline QOpPtr adjoint_of(QOpPtr op) { return std::make_shared<AdjointOp>(std::move(op)); }
inline QOpPtr tensor(QOpPtr a, QOpPtr b) {
  if (a->nq == 0) return b;
  if (b->nq == 0) return a;
  return std::make_shared<TensorOp>(std::move(a), std::move(b));
}
inline QOpPtr product(std::vector<QOpPtr> fs) {
  if (fs.size() == 1) return fs[0];
  return std::make_shared<ProductOp>(std::move(fs));
}
inline QOpPtr select(std::vector<QOpPtr> branches) {
  return std::make_shared<SelectOp>(std::move(branches));
}
inline QOpPtr permute(const std::vector<int>& perm) {
  return std::make_shared<PermuteOp>(perm);
}
inline QOpPtr controlled_chunk(int nq, int bit, QOpPtr op) {
  return std::make_shared<ControlledChunkOp>(nq, bit, std::move(op));
}

inline MatrixXcd to_matrix(const QOp& op) {
  MatrixXcd m(op.dim(), op.dim());
  VectorXcd e = VectorXcd::Zero(op.dim());
  for (long j = 0; j < op.dim(); ++j) {
    e(j) = 1.0;
    m.col(j) = op.apply(e);
    e(j) = 0.0;
  }
  return m;
}

// top-left block against zeroed slow ancillas
inline MatrixXcd extract_block(const QOp& op, long n) {
  MatrixXcd m(n, n);
  VectorXcd e = VectorXcd::Zero(op.dim());
  for (long j = 0; j < n; ++j) {
    e(j) = 1.0;
    m.col(j) = op.apply(e).head(n);
    e(j) = 0.0;
  }
  return m;
}

}  // namespace fraclap
