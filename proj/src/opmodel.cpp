#include "agler/opmodel.hpp"

#include <cmath>

namespace agler {

CommutingTuple::CommutingTuple(std::vector<CMatrix> matrices, double tol) : mats_(std::move(matrices)) {
  require(!mats_.empty(), "tuple needs at least one matrix");
  const Eigen::Index q = mats_.front().rows();
  for (const auto& m : mats_)
    require(m.rows() == q && m.cols() == q && q > 0, "tuple matrices must be square of equal size");
  require(commutator_norm() <= tol, "tuple matrices do not commute");
  require(max_norm() <= 1.0 + tol, "tuple contains a non-contraction");
}

double CommutingTuple::max_norm() const {
  double n = 0.0;
  for (const auto& m : mats_) n = std::max(n, spectral_norm(m));
  return n;
}

double CommutingTuple::commutator_norm() const {
  double n = 0.0;
  for (std::size_t j = 0; j < mats_.size(); ++j)
    for (std::size_t k = j + 1; k < mats_.size(); ++k)
      n = std::max(n, spectral_norm(mats_[j] * mats_[k] - mats_[k] * mats_[j]));
  return n;
}

CommutingTuple CommutingTuple::scaled(double r) const {
  std::vector<CMatrix> out;
  for (const auto& m : mats_) out.push_back(r * m);
  return CommutingTuple(std::move(out));
}

CMatrix tuple_monomial(const CommutingTuple& t, const MultiIndex& mu) {
  require(mu.dim() == t.d(), "multi-index and tuple dimensions differ");
  CMatrix out = CMatrix::Identity(t.q(), t.q());
  for (std::size_t j = 0; j < mu.dim(); ++j)
    for (unsigned p = 0; p < mu[j]; ++p) out = out * t[j];
  return out;
}

CMatrix eval_polynomial(const TestPolynomial& p, const CommutingTuple& t) {
  require(p.d == t.d(), "polynomial and tuple dimensions differ");
  require(!p.coeffs.empty(), "polynomial has no terms");
  const Eigen::Index m = p.coeffs.begin()->second.rows();
  CMatrix out = CMatrix::Zero(m * t.q(), m * t.q());
  for (const auto& [mu, c] : p.coeffs) {
    require(c.rows() == m && c.cols() == m, "polynomial coefficients must be m x m");
    out += Eigen::kroneckerProduct(c, tuple_monomial(t, mu)).eval();
  }
  return out;
}

namespace {

double binomial(unsigned n, unsigned k) {
  double b = 1.0;
  for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

CMatrix hereditary_defect(const CommutingTuple& t, const MultiIndex& lambda) {
  CMatrix out = CMatrix::Zero(t.q(), t.q());
  for (const auto& mu : predecessors(lambda)) {
    double w = (mu.total() % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < mu.dim(); ++j) w *= binomial(lambda[j], mu[j]);
    const CMatrix tm = tuple_monomial(t, mu);
    out += w * tm * tm.adjoint();
  }
  return out;
}

CMatrix hereditary_rows(const CommutingTuple& t, const MultiIndex& lambda) {
  const auto split = parity_split(lambda);
  const Eigen::Index q = t.q();
  const auto n = static_cast<Eigen::Index>(split.even.size());
  CMatrix plus(q, n * q), minus(q, n * q);
  for (Eigen::Index j = 0; j < n; ++j) {
    plus.middleCols(j * q, q) = tuple_monomial(t, split.even[j]);
    minus.middleCols(j * q, q) = tuple_monomial(t, split.odd[j]);
  }
  return plus * plus.adjoint() - minus * minus.adjoint();
}

BrehmerReport is_brehmer(const CommutingTuple& t, const Preordering& order, double tol) {
  require(order.dim() == t.d(), "preordering and tuple dimensions differ");
  BrehmerReport report;
  const auto lambdas = minimal_reduction(order).elements();
  for (const auto& lambda : lambdas) {
    const double lo = min_eigenvalue(hereditary_defect(t, lambda));
    report.entries.push_back({lambda, lo});
    if (lo < -tol) report.brehmer = false;
  }
  return report;
}

TupleEvaluation eval_colligation_at_tuple(const Colligation& sigma, const CommutingTuple& t,
                                          bool rescale_to_strict) {
  require(sigma.classical(), "tuple evaluation needs a classical partition");
  TupleEvaluation out;
  CommutingTuple tt = t;
  if (t.max_norm() >= 1.0) {
    require(rescale_to_strict, "tuple is not strictly contractive");
    out.rescale = 1.0 - 1e-6;
    tt = t.scaled(out.rescale);
    require(tt.strict(), "tuple is not strictly contractive after rescaling");
  }
  const Eigen::Index q = tt.q();
  const Eigen::Index e = sigma.state_dim();
  const CMatrix iq = CMatrix::Identity(q, q);
  CMatrix value = Eigen::kroneckerProduct(sigma.D, iq);
  if (e > 0) {
    CMatrix s = CMatrix::Zero(e * q, e * q);
    Eigen::Index off = 0;
    for (const auto& blk : sigma.partition) {
      require(blk.lambda.dim() == tt.d(), "partition and tuple dimensions differ");
      std::size_t j = 0;
      while (blk.lambda[j] == 0) ++j;
      for (int r = 0; r < blk.mult; ++r, ++off) s.block(off * q, off * q, q, q) = tt[j];
    }
    const CMatrix a = Eigen::kroneckerProduct(sigma.A, iq);
    const CMatrix m = CMatrix::Identity(e * q, e * q) - a * s;
    Eigen::PartialPivLU<CMatrix> lu(m);
    if (!(lu.rcond() > 1e-14)) throw Error("1 - (A ⊗ 1) S_T is numerically singular");
    value += Eigen::kroneckerProduct(sigma.C, iq) * s * lu.solve(Eigen::kroneckerProduct(sigma.B, iq).eval());
  }
  out.value = std::move(value);
  out.norm = spectral_norm(out.value);
  return out;
}

CommutingTuple parrott_tuple(const CMatrix& u, const CMatrix& v) {
  const Eigen::Index k = u.rows();
  require(u.cols() == k && v.rows() == k && v.cols() == k, "U and V must be square of equal size");
  const CMatrix id = CMatrix::Identity(k, k);
  require(max_abs(u.adjoint() * u - id) <= 1e-12 && max_abs(v.adjoint() * v - id) <= 1e-12,
          "U and V must be unitary");
  require(max_abs(u * v + v * u) <= 1e-12, "U and V must anticommute");
  std::vector<CMatrix> mats;
  for (const CMatrix* corner : {&id, &u, &v}) {
    CMatrix t = CMatrix::Zero(2 * k, 2 * k);
    t.topRightCorner(k, k) = *corner;
    mats.push_back(std::move(t));
  }
  return CommutingTuple(std::move(mats));
}

CommutingTuple parrott_tuple() {
  CMatrix u(2, 2), v(2, 2);
  u << 1, 0, 0, -1;
  v << 0, 1, 1, 0;
  return parrott_tuple(u, v);
}

CommutingTuple gkvw_tuple(const Eigen::Vector2d& u1, const Eigen::Vector2d& u2, const Eigen::Vector2d& u3) {
  for (const auto* u : {&u1, &u2, &u3}) require(std::abs(u->norm() - 1.0) <= 1e-12, "u_j must be unit vectors");
  require((u1 + u2 + u3).norm() <= 1e-12, "u_1 + u_2 + u_3 must vanish");
  std::vector<CMatrix> mats;
  for (const auto* u : {&u1, &u2, &u3}) {
    CMatrix t = CMatrix::Zero(4, 4);
    t.block(0, 1, 1, 2) = u->transpose().cast<Complex>();
    t.block(1, 3, 2, 1) = u->cast<Complex>();
    mats.push_back(std::move(t));
  }
  return CommutingTuple(std::move(mats));
}

CommutingTuple gkvw_tuple() {
  const double h = std::sqrt(3.0) / 2.0;
  return gkvw_tuple(Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(h, -0.5), Eigen::Vector2d(-h, -0.5));
}

CommutingTuple kv_tuple() {
  const double a = 1.0 / std::sqrt(3.0), b = 2.0 / std::sqrt(6.0), c = 1.0 / std::sqrt(6.0);
  // Rows 5 and 6, columns 2..4 of each matrix.
  const double r5[3][3] = {{a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
  const double r6[3][3] = {{b, c, c}, {c, b, c}, {c, c, b}};
  std::vector<CMatrix> mats;
  for (int j = 0; j < 3; ++j) {
    CMatrix t = CMatrix::Zero(6, 6);
    t(j + 1, 0) = 1.0;
    for (int k = 0; k < 3; ++k) {
      t(4, k + 1) = r5[j][k];
      t(5, k + 1) = r6[j][k];
    }
    mats.push_back(std::move(t));
  }
  return CommutingTuple(std::move(mats), 1e-15);
}

TestPolynomial kv_polynomial() {
  TestPolynomial p;
  p.d = 3;
  auto one = [](double v) { return CMatrix::Constant(1, 1, v); };
  p.coeffs.emplace(MultiIndex({2, 0, 0}), one(1.0));
  p.coeffs.emplace(MultiIndex({0, 2, 0}), one(1.0));
  p.coeffs.emplace(MultiIndex({0, 0, 2}), one(1.0));
  p.coeffs.emplace(MultiIndex({1, 1, 0}), one(-2.0));
  p.coeffs.emplace(MultiIndex({0, 1, 1}), one(-2.0));
  p.coeffs.emplace(MultiIndex({1, 0, 1}), one(-2.0));
  return p;
}

int commutant_dimension(const CommutingTuple& t, double cut) {
  const Eigen::Index q = t.q();
  const CMatrix id = CMatrix::Identity(q, q);
  const auto blocks = static_cast<Eigen::Index>(2 * t.d());
  CMatrix sys(blocks * q * q, q * q);
  Eigen::Index row = 0;
  for (const auto& m : t.matrices())
    for (const CMatrix& a : {m, CMatrix(m.adjoint())}) {
      // vec(X A - A X) = (A^T ⊗ 1 - 1 ⊗ A) vec(X)
      sys.middleRows(row, q * q) = Eigen::kroneckerProduct(a.transpose(), id) - Eigen::kroneckerProduct(id, a);
      row += q * q;
    }
  Eigen::JacobiSVD<CMatrix> svd(sys);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut * smax) ++rank;
  return static_cast<int>(q * q) - rank;
}

DilationReport dilation_check(const CommutingTuple& big, const CommutingTuple& small, const CMatrix& basis,
                              unsigned degree) {
  require(big.d() == small.d(), "tuples have different lengths");
  require(basis.rows() == big.q() && basis.cols() == small.q(), "basis has wrong shape");
  require(max_abs(basis.adjoint() * basis - CMatrix::Identity(basis.cols(), basis.cols())) <= 1e-10,
          "basis columns are not orthonormal");
  DilationReport out;
  std::vector<unsigned> bound(big.d(), degree);
  for (const auto& mu : predecessors(MultiIndex(bound))) {
    if (mu.total() > degree) continue;
    const CMatrix diff = basis.adjoint() * tuple_monomial(big, mu) * basis - tuple_monomial(small, mu);
    out.max_defect = std::max(out.max_defect, spectral_norm(diff));
    ++out.monomials;
  }
  return out;
}

ForcedZeroReport parrott_forced_zero(const CMatrix& u, const CMatrix& v, Eigen::Index rows, double cut) {
  const Eigen::Index k = u.rows();
  require(rows > 0, "row count must be positive");
  const Eigen::Index n = rows * k;
  const CMatrix ir = CMatrix::Identity(rows, rows);
  const CMatrix in = CMatrix::Identity(n, n);
  // vec(a M) = (M^T ⊗ 1_r) vec(a)
  const CMatrix ru = Eigen::kroneckerProduct(u.transpose(), ir);
  const CMatrix rv = Eigen::kroneckerProduct(v.transpose(), ir);
  CMatrix sys = CMatrix::Zero(3 * n, 3 * n);
  sys.block(0, 0, n, n) = ru;
  sys.block(0, n, n, n) = -in;
  sys.block(n, 0, n, n) = rv;
  sys.block(n, 2 * n, n, n) = -in;
  sys.block(2 * n, n, n, n) = rv;
  sys.block(2 * n, 2 * n, n, n) = -ru;
  Eigen::JacobiSVD<CMatrix> svd(sys);
  const auto& sv = svd.singularValues();
  ForcedZeroReport out;
  out.min_singular_value = sv(sv.size() - 1);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut * sv(0)) ++out.null_dimension;
  return out;
}

}  // namespace agler
