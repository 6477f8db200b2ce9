#pragma once

#include <map>
#include <vector>

#include "agler/preorder.hpp"
#include "agler/realize.hpp"
#include "agler/types.hpp"

namespace agler {

/// d pairwise commuting contractions of a common size q.
class CommutingTuple {
 public:
  /// Throws unless the matrices are square, of equal size, commute to `tol`
  /// and have norm at most 1 + tol.
  explicit CommutingTuple(std::vector<CMatrix> matrices, double tol = 1e-12);

  std::size_t d() const { return mats_.size(); }
  Eigen::Index q() const { return mats_.front().rows(); }
  const CMatrix& operator[](std::size_t j) const { return mats_[j]; }
  const std::vector<CMatrix>& matrices() const { return mats_; }

  /// max_j ‖T_j‖
  double max_norm() const;
  /// max_{j<k} ‖T_j T_k - T_k T_j‖
  double commutator_norm() const;
  bool strict(double delta = 0.0) const { return max_norm() < 1.0 - delta; }
  CommutingTuple scaled(double r) const;

 private:
  std::vector<CMatrix> mats_;
};

/// T^μ = T_1^{μ_1} ... T_d^{μ_d}
CMatrix tuple_monomial(const CommutingTuple& t, const MultiIndex& mu);

/// Finitely supported map from multi-indices to m x m coefficients.
struct TestPolynomial {
  std::size_t d = 0;
  std::map<MultiIndex, CMatrix> coeffs;
};

/// Σ_μ coeff_μ ⊗ T^μ
CMatrix eval_polynomial(const TestPolynomial& p, const CommutingTuple& t);

/// Σ_{μ ≤ λ} (-1)^{|μ|} Π_j C(λ_j, μ_j) T^μ (T^μ)^*, adjoints on the right.
CMatrix hereditary_defect(const CommutingTuple& t, const MultiIndex& lambda);

/// ψ^+(T)ψ^+(T)^* - ψ^-(T)ψ^-(T)^* with block rows of even and odd monomials;
/// λ must have 0/1 entries.
CMatrix hereditary_rows(const CommutingTuple& t, const MultiIndex& lambda);

struct BrehmerEntry {
  MultiIndex lambda;
  double min_eigenvalue = 0.0;
};

struct BrehmerReport {
  bool brehmer = true;
  std::vector<BrehmerEntry> entries;
};

BrehmerReport is_brehmer(const CommutingTuple& t, const Preordering& order, double tol = 1e-10);

struct TupleEvaluation {
  CMatrix value;
  /// Factor applied to the tuple before evaluation (1 when none was needed).
  double rescale = 1.0;
  double norm = 0.0;
};

/// W_Σ(T) = D ⊗ 1 + (C ⊗ 1) S_T (1 - (A ⊗ 1) S_T)^{-1} (B ⊗ 1) with
/// S_T = Σ_j P_j ⊗ T_j. Only classical partitions are supported. A tuple
/// with max ‖T_j‖ ≥ 1 is rejected unless `rescale_to_strict` is set, in
/// which case it is scaled by 1 - 1e-6 first.
TupleEvaluation eval_colligation_at_tuple(const Colligation& sigma, const CommutingTuple& t,
                                          bool rescale_to_strict = false);

/// T_1 = [[0,1],[0,0]], T_2 = [[0,U],[0,0]], T_3 = [[0,V],[0,0]] for unitaries
/// with UV = -VU.
CommutingTuple parrott_tuple(const CMatrix& u, const CMatrix& v);
/// The tuple built from U = diag(1,-1), V = [[0,1],[1,0]].
CommutingTuple parrott_tuple();

/// T_j = [[0, u_j, 0], [0, 0, u_j^*], [0, 0, 0]] on C ⊕ C^2 ⊕ C for unit
/// vectors with u_1 + u_2 + u_3 = 0.
CommutingTuple gkvw_tuple(const Eigen::Vector2d& u1, const Eigen::Vector2d& u2, const Eigen::Vector2d& u3);
CommutingTuple gkvw_tuple();

/// The 6 x 6 Kaijser-Varopoulos type tuple.
CommutingTuple kv_tuple();

/// z_1² + z_2² + z_3² - 2z_1z_2 - 2z_2z_3 - 2z_3z_1
TestPolynomial kv_polynomial();

/// dim { X : X T_j = T_j X, X T_j^* = T_j^* X for all j }; singular values
/// below cut·σ_max count as zero.
int commutant_dimension(const CommutingTuple& t, double cut = 1e-10);

struct DilationReport {
  double max_defect = 0.0;
  int monomials = 0;
};

/// max over monomials μ with |μ| ≤ degree of ‖V^* big^μ V - small^μ‖, where
/// the columns of `basis` are orthonormal.
DilationReport dilation_check(const CommutingTuple& big, const CommutingTuple& small, const CMatrix& basis,
                              unsigned degree);

/// The linear system aU = b, aV = c, bV = cU in unknown r x k matrices
/// (a, b, c). Only the zero solution should exist when UV = -VU.
struct ForcedZeroReport {
  int null_dimension = 0;
  double min_singular_value = 0.0;
};

ForcedZeroReport parrott_forced_zero(const CMatrix& u, const CMatrix& v, Eigen::Index rows, double cut = 1e-10);

}  // namespace agler
