#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "agler/preorder.hpp"
#include "agler/types.hpp"

namespace agler {

/// A finite set of points, each represented by its vector of test-function
/// values (ψ_1(x), ..., ψ_d(x)) in the open unit polydisk.
class PointSample {
 public:
  /// Validates that every coordinate has modulus ≤ 1 - delta (and < 1), and
  /// that the value vectors are pairwise distinct.
  PointSample(std::size_t d, std::vector<CVector> points, double delta = 0.0);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return points_.size(); }
  const CVector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<CVector>& points() const { return points_; }
  double delta() const { return delta_; }

  /// Subsample with the given point indices, in that order.
  PointSample subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const PointSample& a, const PointSample& b);

 private:
  std::size_t d_;
  std::vector<CVector> points_;
  double delta_;
};

using SamplePtr = std::shared_ptr<const PointSample>;

inline SamplePtr make_sample(std::size_t d, std::vector<CVector> points, double delta = 0.0) {
  return std::make_shared<const PointSample>(d, std::move(points), delta);
}

/// Block kernel over F x F with m x m complex blocks, stored as the assembled
/// Nm x Nm Hermitian matrix. Block (x, y) occupies rows [x*m, x*m + m) and
/// columns [y*m, y*m + m).
class HermitianKernel {
 public:
  /// Throws if `matrix` is not Hermitian to 1e-10 relative; the stored matrix
  /// is the exact Hermitian part.
  HermitianKernel(SamplePtr sample, int block_dim, CMatrix matrix);

  static HermitianKernel identity(SamplePtr sample, int block_dim);
  /// The constant kernel [1]: every block is the identity.
  static HermitianKernel ones(SamplePtr sample, int block_dim);
  /// Lift a scalar N x N kernel to blocks k(x,y) * 1_m.
  static HermitianKernel from_scalar(SamplePtr sample, const CMatrix& scalar, int block_dim = 1);

  const SamplePtr& sample() const { return sample_; }
  std::size_t points() const { return sample_->size(); }
  int block_dim() const { return m_; }
  const CMatrix& matrix() const { return matrix_; }
  CMatrix block(std::size_t x, std::size_t y) const {
    return matrix_.block(static_cast<Eigen::Index>(x) * m_, static_cast<Eigen::Index>(y) * m_, m_, m_);
  }

 private:
  SamplePtr sample_;
  int m_;
  CMatrix matrix_;
};

/// Blockwise Kronecker product: block (x,y) is K1(x,y) ⊗ K2(x,y). For scalar
/// kernels this is the entrywise product.
HermitianKernel schur_product(const HermitianKernel& k1, const HermitianKernel& k2);

/// Multiplies every block K(x,y) by the scalar s(x,y).
HermitianKernel schur_scale(const CMatrix& scalar, const HermitianKernel& k);

/// Scalar N x N kernel Π_i (1 - z_i w̄_i)^{λ_i}, built by iterated Schur
/// multiplication.
CMatrix defect_kernel(const PointSample& sample, const MultiIndex& lambda);

/// Π_i (1 - z_i w̄_i)^{-λ_i} ⊗ 1_m, the Schur inverse of the defect kernel.
HermitianKernel szego_kernel(SamplePtr sample, const MultiIndex& lambda, int block_dim = 1);

struct PsdCheck {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
};

/// is_psd ⇔ λ_min ≥ -tol·max(1, ‖K‖).
PsdCheck psd_check(const HermitianKernel& k, double tol = 1e-10);

struct AdmissibilityEntry {
  MultiIndex lambda;
  double min_eigenvalue = 0.0;
};

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<AdmissibilityEntry> entries;
  std::optional<MultiIndex> failing_lambda;
  std::optional<CVector> failing_eigenvector;
};

/// Checks D_λ * K ≥ -tol for each λ in the minimal reduction of `order`.
AdmissibilityReport is_admissible(const HermitianKernel& k, const Preordering& order,
                                  double tol = 1e-10);

struct SubordinationReport {
  bool subordinate = false;
  double min_eigenvalue = 0.0;
};

/// K = Kref * F with F ≥ 0, where F is the entrywise quotient K / Kref.
SubordinationReport is_subordinate(const HermitianKernel& k, const HermitianKernel& ref,
                                   double tol = 1e-10);

/// K(x,y) = γ(x) γ(y)^*, with γ stacked as an Nm x r matrix.
struct KolmogorovFactor {
  int block_dim = 1;
  CMatrix factor;

  Eigen::Index rank() const { return factor.cols(); }
  CMatrix gamma(std::size_t x) const {
    return factor.middleRows(static_cast<Eigen::Index>(x) * block_dim, block_dim);
  }
};

/// Eigenvalues below tol·‖K‖ are dropped; throws if K has an eigenvalue below
/// -tol·‖K‖ (beyond clipping).
KolmogorovFactor kolmogorov(const HermitianKernel& k, double tol = 1e-10);

/// Same, on a bare Hermitian matrix.
KolmogorovFactor kolmogorov(const CMatrix& matrix, int block_dim, double tol = 1e-10);

}  // namespace agler
