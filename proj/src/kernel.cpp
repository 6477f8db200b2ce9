#include "agler/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace agler {

PointSample::PointSample(std::size_t d, std::vector<CVector> points, double delta)
    : d_(d), points_(std::move(points)), delta_(delta) {
  require(d_ >= 1, "point sample needs d >= 1");
  require(!points_.empty(), "point sample needs at least one point");
  require(delta_ >= 0.0 && delta_ < 1.0, "strictness margin must lie in [0, 1)");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require(static_cast<std::size_t>(points_[i].size()) == d_,
            "point " + std::to_string(i) + " has wrong dimension");
    for (Eigen::Index j = 0; j < points_[i].size(); ++j) {
      double r = std::abs(points_[i](j));
      require(std::isfinite(r) && r < 1.0 && r <= 1.0 - delta_,
              "point " + std::to_string(i) + " coordinate " + std::to_string(j + 1) +
                  " lies outside the open unit disk (margin)");
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      require((points_[i] - points_[j]).cwiseAbs().maxCoeff() > 0.0,
              "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
}

PointSample PointSample::subset(const std::vector<std::size_t>& indices) const {
  std::vector<CVector> pts;
  for (auto i : indices) {
    require(i < points_.size(), "subset index out of range");
    pts.push_back(points_[i]);
  }
  return PointSample(d_, std::move(pts), delta_);
}

bool operator==(const PointSample& a, const PointSample& b) {
  if (a.d_ != b.d_ || a.points_.size() != b.points_.size()) return false;
  for (std::size_t i = 0; i < a.points_.size(); ++i)
    if (a.points_[i] != b.points_[i]) return false;
  return true;
}

HermitianKernel::HermitianKernel(SamplePtr sample, int block_dim, CMatrix matrix)
    : sample_(std::move(sample)), m_(block_dim), matrix_(std::move(matrix)) {
  require(sample_ != nullptr, "kernel needs a sample");
  require(m_ >= 1, "block dimension must be positive");
  const auto n = static_cast<Eigen::Index>(sample_->size()) * m_;
  require(matrix_.rows() == n && matrix_.cols() == n, "kernel matrix has wrong size");
  const double scale = std::max(1.0, max_abs(matrix_));
  require(max_abs(matrix_ - matrix_.adjoint()) <= 1e-10 * scale, "kernel is not Hermitian");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

HermitianKernel HermitianKernel::identity(SamplePtr sample, int block_dim) {
  const auto n = static_cast<Eigen::Index>(sample->size()) * block_dim;
  return HermitianKernel(std::move(sample), block_dim, CMatrix::Identity(n, n));
}

HermitianKernel HermitianKernel::ones(SamplePtr sample, int block_dim) {
  const auto N = static_cast<Eigen::Index>(sample->size());
  return from_scalar(std::move(sample), CMatrix::Ones(N, N), block_dim);
}

HermitianKernel HermitianKernel::from_scalar(SamplePtr sample, const CMatrix& scalar, int block_dim) {
  require(scalar.rows() == static_cast<Eigen::Index>(sample->size()) && scalar.cols() == scalar.rows(),
          "scalar kernel has wrong size");
  CMatrix m = Eigen::kroneckerProduct(scalar, CMatrix::Identity(block_dim, block_dim));
  return HermitianKernel(std::move(sample), block_dim, std::move(m));
}

namespace {

void require_same_sample(const SamplePtr& a, const SamplePtr& b) {
  require(a == b || *a == *b, "kernels live on different samples");
}

}  // namespace

HermitianKernel schur_product(const HermitianKernel& k1, const HermitianKernel& k2) {
  require_same_sample(k1.sample(), k2.sample());
  const int m1 = k1.block_dim();
  const int m2 = k2.block_dim();
  const int m = m1 * m2;
  const auto N = static_cast<Eigen::Index>(k1.points());
  CMatrix out(N * m, N * m);
  for (Eigen::Index x = 0; x < N; ++x)
    for (Eigen::Index y = 0; y < N; ++y)
      out.block(x * m, y * m, m, m) = Eigen::kroneckerProduct(k1.block(x, y), k2.block(x, y));
  return HermitianKernel(k1.sample(), m, std::move(out));
}

HermitianKernel schur_scale(const CMatrix& scalar, const HermitianKernel& k) {
  const auto N = static_cast<Eigen::Index>(k.points());
  require(scalar.rows() == N && scalar.cols() == N, "scalar kernel size mismatch");
  const int m = k.block_dim();
  CMatrix out = k.matrix();
  for (Eigen::Index x = 0; x < N; ++x)
    for (Eigen::Index y = 0; y < N; ++y) out.block(x * m, y * m, m, m) *= scalar(x, y);
  return HermitianKernel(k.sample(), m, std::move(out));
}

CMatrix defect_kernel(const PointSample& sample, const MultiIndex& lambda) {
  require(lambda.dim() == sample.dim(), "multi-index and sample dimensions differ");
  const auto N = static_cast<Eigen::Index>(sample.size());
  CMatrix out = CMatrix::Ones(N, N);
  for (std::size_t i = 0; i < lambda.dim(); ++i) {
    if (lambda[i] == 0) continue;
    CMatrix factor(N, N);
    for (Eigen::Index x = 0; x < N; ++x)
      for (Eigen::Index y = 0; y < N; ++y)
        factor(x, y) = 1.0 - sample[x](i) * std::conj(sample[y](i));
    for (unsigned p = 0; p < lambda[i]; ++p) out = out.cwiseProduct(factor);
  }
  return out;
}

HermitianKernel szego_kernel(SamplePtr sample, const MultiIndex& lambda, int block_dim) {
  require(lambda.dim() == sample->dim(), "multi-index and sample dimensions differ");
  const auto N = static_cast<Eigen::Index>(sample->size());
  for (Eigen::Index x = 0; x < N; ++x)
    for (std::size_t i = 0; i < lambda.dim(); ++i)
      require(lambda[i] == 0 || std::abs((*sample)[x](i)) < 1.0,
              "Szego kernel undefined at a point on or outside the unit circle");
  CMatrix d = defect_kernel(*sample, lambda);
  CMatrix inv = d.cwiseInverse();
  return HermitianKernel::from_scalar(std::move(sample), inv, block_dim);
}

PsdCheck psd_check(const HermitianKernel& k, double tol) {
  PsdCheck out;
  out.min_eigenvalue = min_eigenvalue(k.matrix());
  out.is_psd = out.min_eigenvalue >= -tol * std::max(1.0, spectral_norm(k.matrix()));
  return out;
}

AdmissibilityReport is_admissible(const HermitianKernel& k, const Preordering& order, double tol) {
  require(order.dim() == k.sample()->dim(), "preordering and sample dimensions differ");
  AdmissibilityReport report;
  const auto lambdas = minimal_reduction(order).elements();
  for (const auto& lambda : lambdas) {
    CMatrix product = schur_scale(defect_kernel(*k.sample(), lambda), k).matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(product);
    const double lo = es.eigenvalues()(0);
    report.entries.push_back({lambda, lo});
    if (lo < -tol * std::max(1.0, spectral_norm(k.matrix())) && report.admissible) {
      report.admissible = false;
      report.failing_lambda = lambda;
      report.failing_eigenvector = es.eigenvectors().col(0);
    }
  }
  return report;
}

SubordinationReport is_subordinate(const HermitianKernel& k, const HermitianKernel& ref, double tol) {
  require_same_sample(k.sample(), ref.sample());
  require(k.block_dim() == ref.block_dim(), "kernels have different block dimensions");
  const CMatrix& r = ref.matrix();
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      // Off-diagonal zeros inside a block of 1_m-type references are fine when
      // the numerator vanishes too.
      if (r(i, j) == Complex(0.0) && k.matrix()(i, j) != Complex(0.0))
        throw Error("subordination undefined: reference kernel has a zero entry");
    }
  CMatrix f(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      f(i, j) = r(i, j) == Complex(0.0) ? Complex(0.0) : k.matrix()(i, j) / r(i, j);
  SubordinationReport out;
  out.min_eigenvalue = min_eigenvalue(f);
  out.subordinate = out.min_eigenvalue >= -tol * std::max(1.0, spectral_norm(f));
  return out;
}

KolmogorovFactor kolmogorov(const CMatrix& matrix, int block_dim, double tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (matrix + matrix.adjoint()));
  const auto& ev = es.eigenvalues();
  const double norm = ev.size() ? std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))) : 0.0;
  const double cut = tol * norm;
  if (ev.size() && ev(0) < -cut) throw Error("kernel is indefinite beyond tolerance");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
    if (ev(i) > cut) keep.push_back(i);
  KolmogorovFactor out;
  out.block_dim = block_dim;
  out.factor.resize(matrix.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    out.factor.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(ev(keep[c]));
  return out;
}

KolmogorovFactor kolmogorov(const HermitianKernel& k, double tol) {
  return kolmogorov(k.matrix(), k.block_dim(), tol);
}

}  // namespace agler
