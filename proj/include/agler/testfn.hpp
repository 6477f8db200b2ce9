#pragma once

#include <string>
#include <vector>

#include "agler/kernel.hpp"

namespace agler {

/// Even and odd monomial rows ψ_λ^± evaluated at every sample point. Row
/// entries follow the lexicographic order of `parity_split(lambda)`.
struct PsiRows {
  MultiIndex lambda;
  int n = 0;
  std::vector<CRow> plus;
  std::vector<CRow> minus;
};

PsiRows psi_rows(const PointSample& sample, const MultiIndex& lambda);

/// The monomial Π_i z_i^{μ_i}.
Complex monomial(const CVector& z, const MultiIndex& mu);

enum class AuxMode { kRaw, kExtended };

/// Per-point n x n values of an auxiliary test function.
struct AuxFunctionSample {
  MultiIndex lambda;
  int n = 0;
  std::vector<CMatrix> sigma;
  AuxMode mode = AuxMode::kRaw;
};

/// σ_λ(x) = ψ^+(x)^* |ψ^+(x)|^{-2} ψ^-(x).
AuxFunctionSample aux_function(const PointSample& sample, const MultiIndex& lambda);

/// Right inverse ω_λ(x) = ψ^+(x)^* |ψ^+(x)|^{-2} of the even row (column
/// vectors, one per point).
std::vector<CVector> pointwise_right_inverse(const PsiRows& rows);

/// Max over (x,y) of |ψ^+(x)(k 1_n - σ(x) k σ(y)^*)ψ^+(y)^* - (D_λ k)(x,y)|
/// for a scalar kernel k, with σ the raw auxiliary function.
double verify_defect_identity(const PointSample& sample, const MultiIndex& lambda, const HermitianKernel& k);

/// Finite-set modification of σ_λ for an ample preordering.
struct ExtendedAux {
  AuxFunctionSample aux;  ///< diagonal blocks of S_F, one per point
  CMatrix s_full;         ///< S_F on C^{nN}, block (x,y) at rows x*n, cols y*n
  CMatrix kappa;          ///< Hermitian square root of 1_n ⊗ k_s on F
  CMatrix g_compressed;   ///< G°_F
  double g_norm = 0.0;
  /// max |Ψ^+(k - S k S^*)Ψ^{+*} - Ψ^+(k - σ k σ^*)Ψ^{+*}|, and the same
  /// against the Schur form D_λ * k_s.
  double range_residual = 0.0;
  /// λ_min(k_F - S_F k_F S_F^*)
  double contractive_min_eigenvalue = 0.0;
  /// λ_min of ([1_n] - σ̃σ̃^*) * (k_s ⊗ 1_n) with σ̃ the per-point blocks.
  double blockwise_min_eigenvalue = 0.0;
  /// Points where a diagonal block reaches norm 1 within tolerance.
  std::vector<std::size_t> boundary_points;
};

/// Throws if the Szegő kernel on F is singular or ‖G°_F‖ exceeds 1 + tol.
ExtendedAux extend_aux_finite(const PointSample& sample, const MultiIndex& lambda,
                              const Preordering& ample_order, double tol = 1e-9);

/// Built-in test-function families.
class Domain {
 public:
  enum class Kind { kPolydisk, kAnnulus, kConstrainedDisk };

  static Domain polydisk(std::size_t d);
  /// ψ_1(z) = z, ψ_2(z) = r/z on r < |z| < 1.
  static Domain annulus(double r);
  /// ψ_1(z) = z², ψ_2(z) = z³ on the unit disk.
  static Domain constrained_disk();
  /// By name: "polydisk", "annulus", "constrained-disk".
  static Domain by_name(const std::string& name, double param);

  Kind kind() const { return kind_; }
  /// Number of test functions.
  std::size_t dim() const { return d_; }
  /// Dimension of the base points (d for the polydisk, 1 otherwise).
  std::size_t base_dim() const { return kind_ == Kind::kPolydisk ? d_ : 1; }

  /// Test-function values at a base point; throws outside the domain.
  CVector map(const CVector& base) const;
  PointSample sample(const std::vector<CVector>& base, double delta = 0.0) const;

 private:
  Domain(Kind k, std::size_t d, double r) : kind_(k), d_(d), r_(r) {}
  Kind kind_;
  std::size_t d_;
  double r_;
};

}  // namespace agler
