#include "agler/testfn.hpp"

#include <cmath>

namespace agler {

Complex monomial(const CVector& z, const MultiIndex& mu) {
  Complex v(1.0);
  for (std::size_t i = 0; i < mu.dim(); ++i)
    for (unsigned p = 0; p < mu[i]; ++p) v *= z(static_cast<Eigen::Index>(i));
  return v;
}

PsiRows psi_rows(const PointSample& sample, const MultiIndex& lambda) {
  require(lambda.dim() == sample.dim(), "multi-index and sample dimensions differ");
  const auto split = parity_split(lambda);
  PsiRows rows;
  rows.lambda = lambda;
  rows.n = static_cast<int>(split.even.size());
  for (const auto& z : sample.points()) {
    CRow plus(rows.n), minus(rows.n);
    for (int j = 0; j < rows.n; ++j) {
      plus(j) = monomial(z, split.even[j]);
      minus(j) = monomial(z, split.odd[j]);
    }
    rows.plus.push_back(std::move(plus));
    rows.minus.push_back(std::move(minus));
  }
  return rows;
}

std::vector<CVector> pointwise_right_inverse(const PsiRows& rows) {
  std::vector<CVector> out;
  for (const auto& p : rows.plus) out.push_back(p.adjoint() / p.squaredNorm());
  return out;
}

AuxFunctionSample aux_function(const PointSample& sample, const MultiIndex& lambda) {
  const auto rows = psi_rows(sample, lambda);
  AuxFunctionSample aux;
  aux.lambda = lambda;
  aux.n = rows.n;
  aux.mode = AuxMode::kRaw;
  const auto omega = pointwise_right_inverse(rows);
  for (std::size_t x = 0; x < sample.size(); ++x) aux.sigma.push_back(omega[x] * rows.minus[x]);
  return aux;
}

double verify_defect_identity(const PointSample& sample, const MultiIndex& lambda, const HermitianKernel& k) {
  require(k.block_dim() == 1, "identity check expects a scalar kernel");
  const auto rows = psi_rows(sample, lambda);
  const auto aux = aux_function(sample, lambda);
  const CMatrix defect = defect_kernel(sample, lambda);
  const CMatrix id = CMatrix::Identity(rows.n, rows.n);
  double worst = 0.0;
  for (std::size_t x = 0; x < sample.size(); ++x)
    for (std::size_t y = 0; y < sample.size(); ++y) {
      const Complex kxy = k.matrix()(x, y);
      CMatrix inner = kxy * id - aux.sigma[x] * kxy * aux.sigma[y].adjoint();
      Complex lhs = (rows.plus[x] * inner * rows.plus[y].adjoint())(0, 0);
      worst = std::max(worst, std::abs(lhs - defect(x, y) * kxy));
    }
  return worst;
}

namespace {

CMatrix block_diagonal(const std::vector<CMatrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix out = CMatrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace

ExtendedAux extend_aux_finite(const PointSample& sample, const MultiIndex& lambda,
                              const Preordering& ample_order, double tol) {
  const auto cls = classify(ample_order);
  require(cls.ample(), "extension of auxiliary functions requires an ample preordering");
  const MultiIndex top = *cls.top;
  require(top.is_binary(), "largest element must have 0/1 entries");
  require(lambda.leq(top) && !lambda.is_zero(), "lambda must be a nonzero element below the top");

  const auto rows = psi_rows(sample, lambda);
  const auto aux = aux_function(sample, lambda);
  const int n = rows.n;
  const auto N = static_cast<Eigen::Index>(sample.size());
  const Eigen::Index nN = n * N;

  auto sp = std::make_shared<const PointSample>(sample);
  const HermitianKernel ks = szego_kernel(sp, top, 1);
  const CMatrix kF = Eigen::kroneckerProduct(ks.matrix(), CMatrix::Identity(n, n));

  Eigen::SelfAdjointEigenSolver<CMatrix> es(kF);
  const auto& ev = es.eigenvalues();
  require(ev(0) > 1e-14 * ev(nN - 1), "Szego kernel on the sample is singular");
  const CMatrix& V = es.eigenvectors();
  const CMatrix kappa = V * ev.cwiseSqrt().cast<Complex>().asDiagonal() * V.adjoint();
  const CMatrix kappa_inv = V * ev.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * V.adjoint();

  std::vector<CMatrix> plus_blocks;
  for (const auto& p : rows.plus) plus_blocks.push_back(p);
  const CMatrix psi_plus = block_diagonal(plus_blocks);  // N x nN
  const CMatrix sigma_f = block_diagonal(aux.sigma);      // nN x nN

  // ran Q_F^* = κ_F ran Ψ^{+*}_F
  Eigen::HouseholderQR<CMatrix> qr(kappa * psi_plus.adjoint());
  const CMatrix basis = qr.householderQ() * CMatrix::Identity(nN, N);
  const CMatrix proj_r = basis * basis.adjoint();

  ExtendedAux out;
  out.kappa = kappa;
  out.g_compressed = proj_r * kappa_inv * sigma_f * kappa;
  out.g_norm = spectral_norm(out.g_compressed);
  if (out.g_norm > 1.0 + tol)
    throw Error("compressed auxiliary operator has norm " + std::to_string(out.g_norm) + " > 1");
  out.s_full = kappa * out.g_compressed * kappa_inv;

  const CMatrix lhs = psi_plus * (kF - out.s_full * kF * out.s_full.adjoint()) * psi_plus.adjoint();
  const CMatrix raw = psi_plus * (kF - sigma_f * kF * sigma_f.adjoint()) * psi_plus.adjoint();
  const CMatrix schur = defect_kernel(sample, lambda).cwiseProduct(ks.matrix());
  out.range_residual = std::max(max_abs(lhs - raw), max_abs(lhs - schur));
  out.contractive_min_eigenvalue = min_eigenvalue(kF - out.s_full * kF * out.s_full.adjoint());

  out.aux.lambda = lambda;
  out.aux.n = n;
  out.aux.mode = AuxMode::kExtended;
  CMatrix blockwise(nN, nN);
  for (Eigen::Index x = 0; x < N; ++x) {
    out.aux.sigma.push_back(out.s_full.block(x * n, x * n, n, n));
    if (spectral_norm(out.aux.sigma.back()) >= 1.0 - tol) out.boundary_points.push_back(x);
  }
  for (Eigen::Index x = 0; x < N; ++x)
    for (Eigen::Index y = 0; y < N; ++y)
      blockwise.block(x * n, y * n, n, n) =
          ks.matrix()(x, y) * (CMatrix::Identity(n, n) - out.aux.sigma[x] * out.aux.sigma[y].adjoint());
  out.blockwise_min_eigenvalue = min_eigenvalue(blockwise);
  return out;
}

Domain Domain::polydisk(std::size_t d) {
  require(d >= 1, "polydisk needs d >= 1");
  return Domain(Kind::kPolydisk, d, 0.0);
}

Domain Domain::annulus(double r) {
  require(r > 0.0 && r < 1.0, "annulus inner radius must lie in (0,1)");
  return Domain(Kind::kAnnulus, 2, r);
}

Domain Domain::constrained_disk() { return Domain(Kind::kConstrainedDisk, 2, 0.0); }

Domain Domain::by_name(const std::string& name, double param) {
  if (name == "polydisk") return polydisk(static_cast<std::size_t>(param));
  if (name == "annulus") return annulus(param);
  if (name == "constrained-disk") return constrained_disk();
  throw Error("unknown domain '" + name + "'");
}

CVector Domain::map(const CVector& base) const {
  require(static_cast<std::size_t>(base.size()) == base_dim(), "base point has wrong dimension");
  switch (kind_) {
    case Kind::kPolydisk:
      for (Eigen::Index i = 0; i < base.size(); ++i)
        require(std::abs(base(i)) < 1.0, "base point outside the polydisk");
      return base;
    case Kind::kAnnulus: {
      const Complex z = base(0);
      require(std::abs(z) > r_ && std::abs(z) < 1.0, "base point outside the annulus");
      CVector v(2);
      v << z, r_ / z;
      return v;
    }
    case Kind::kConstrainedDisk: {
      const Complex z = base(0);
      require(std::abs(z) < 1.0, "base point outside the disk");
      CVector v(2);
      v << z * z, z * z * z;
      return v;
    }
  }
  throw Error("unreachable");
}

PointSample Domain::sample(const std::vector<CVector>& base, double delta) const {
  std::vector<CVector> pts;
  for (const auto& b : base) pts.push_back(map(b));
  return PointSample(d_, std::move(pts), delta);
}

}  // namespace agler
