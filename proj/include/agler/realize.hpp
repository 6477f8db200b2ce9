#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agler/kernel.hpp"
#include "agler/testfn.hpp"

namespace agler {

/// Matrix values φ(x) of a function on a point sample.
struct FunctionSample {
  SamplePtr sample;
  std::vector<CMatrix> values;

  FunctionSample(SamplePtr s, std::vector<CMatrix> v);

  Eigen::Index rows() const { return values.front().rows(); }
  Eigen::Index cols() const { return values.front().cols(); }
  /// max_x σ_max(φ(x))
  double sup_norm() const;
};

/// PSD kernels Γ_λ, one per maximal element of the preordering, with
/// Σ_λ Γ_λ(x,y) D_λ(x,y) = target(x,y) up to `residual` (max-abs entry).
struct AglerCertificate {
  std::vector<std::pair<MultiIndex, HermitianKernel>> gammas;
  double residual = 0.0;
  double c = 1.0;
};

/// A colligation U = [[A, B], [C, D]] on E ⊕ H together with the state-space
/// partition E = ⊕_λ C^{mult_λ} ⊗ C^{n_λ}, n_λ = 2^{|λ|-1}.
struct PartitionBlock {
  MultiIndex lambda;
  int mult = 0;

  int width() const { return 1 << (lambda.total() - 1); }
};

struct Colligation {
  CMatrix A, B, C, D;
  std::vector<PartitionBlock> partition;
  /// Set when U is only a contraction (convex combinations).
  bool contractive = false;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index io_dim() const { return D.rows(); }
  CMatrix unitary() const;
  /// ‖U^*U - 1‖_max
  double unitarity_defect() const;
  /// Throws if blocks and partition do not fit together.
  void validate() const;

  /// Every partition block is some e_i.
  bool classical() const;

  static Colligation identity(Eigen::Index io_dim, std::size_t d);
  /// A = D = 0, B = C = 1 on the single block e_i: W = ψ_i.
  static Colligation coordinate(std::size_t d, std::size_t i);
  /// E = 0, U = D0 (must be unitary for a unitary colligation).
  static Colligation constant(const CMatrix& d0, std::size_t d);
};

/// S(x) = ⊕_blocks 1_mult ⊗ σ_λ(x) with the raw auxiliary functions.
CMatrix state_operator(const std::vector<PartitionBlock>& partition, const CVector& point);

/// Raw σ_λ at a single point.
CMatrix aux_value(const CVector& point, const MultiIndex& lambda);

/// W(x) = D + C S(x) (1 - A S(x))^{-1} B.
CMatrix eval_transfer(const Colligation& sigma, const CVector& point);

enum class ComposeMode { kProduct, kConvex };

/// Product: W = W1 W2 pointwise. Convex: W = t W1 + (1-t) W2, returned as a
/// contractive colligation.
Colligation transfer_compose(const Colligation& s1, const Colligation& s2, ComposeMode mode,
                             double t = 1.0);

enum class ProjectionScheme { kDykstra, kRelaxed };

struct SolverParams {
  double feas_tol = 1e-8;
  long max_iter = 200000;
  /// Stall: relative residual progress below stall_rel over stall_window iterations.
  long stall_window = 500;
  double stall_rel = 1e-12;
  /// Attempt witness extraction every this many iterations.
  long witness_every = 100;
  ProjectionScheme scheme = ProjectionScheme::kRelaxed;
  /// Over-relaxation factor for kRelaxed, in (0, 2).
  double relaxation = 1.5;
};

enum class Status { kFeasible, kInfeasible, kUnresolved };

std::string to_string(Status s);

/// Admissible kernel k with pairing Σ_{p,q} target[p,q] k[p,q] < 0, trace one.
struct Witness {
  HermitianKernel kernel;
  double pairing = 0.0;
  /// λ_min(target ∘ k)
  double violation_min_eigenvalue = 0.0;
  AdmissibilityReport admissibility;
};

struct DecomposeResult {
  Status status = Status::kUnresolved;
  std::optional<AglerCertificate> certificate;
  std::optional<Witness> witness;
  double residual = 0.0;
  long iterations = 0;
};

/// Dual information from the projection solver: ρ = (LL^*)^{-1}(L Γ - target)
/// evaluated at a cone iterate Γ.
struct DualData {
  CMatrix rho;
};

/// Decomposition of an arbitrary Hermitian target Σ_λ Γ_λ ∘ D_λ = target over
/// the minimal reduction of `order`. Blocks have size `block_dim`.
DecomposeResult decompose_target(SamplePtr sample, const Preordering& order, const CMatrix& target,
                                 int block_dim, const SolverParams& params = {});

/// c² 1 - φ(x) φ(y)^*
CMatrix agler_target(const FunctionSample& phi, double c);

/// Decomposition of c²·1 - φφ^*.
DecomposeResult agler_decompose(const FunctionSample& phi, const Preordering& order, double c,
                                const SolverParams& params = {});

/// Builds and verifies a witness from dual data. Returns nothing unless the
/// kernel is admissible and the pairing is below -feas_tol.
std::optional<Witness> witness_kernel(const DualData& dual, SamplePtr sample, const CMatrix& target,
                                      int block_dim, const Preordering& order, double feas_tol);

/// Re-verification by an independent path; used before any result leaves the
/// library.
bool certificate_valid(const AglerCertificate& cert, const PointSample& sample, const CMatrix& target,
                       double feas_tol);
bool witness_valid(const Witness& w, const Preordering& order, const CMatrix& target, double feas_tol);

struct AmpleMembership {
  bool member = false;
  double min_eigenvalue = 0.0;
};

/// (c²[1] - φφ^*) * k_s ≥ -tol with k_s the Szegő kernel of the largest element.
AmpleMembership ample_membership(const FunctionSample& phi, const Preordering& order, double c,
                                 double tol = 1e-10);

/// Colligation plus verification data from the lurking-isometry step.
struct Realization {
  Colligation colligation;
  double gram_defect = 0.0;
  /// max_x ‖a(x) W(x) - b(x)‖_max
  double max_sample_error = 0.0;
};

/// Generic lurking isometry for Σ_λ Γ_λ ∘ D_λ = a a^* - b b^*: yields a unitary
/// colligation with b(x) = a(x) W(x) at every node. Throws if the Gram
/// matrices disagree by more than `gram_tol`.
Realization lurking_isometry_ab(const AglerCertificate& cert, const PointSample& sample,
                                const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                                double gram_tol, double rank_tol = 1e-10);

/// Realizes φ/c from a certificate of c²·1 - φφ^*. Non-square samples are
/// zero-padded to square; the leading block of W reproduces φ/c.
Realization lurking_isometry(const AglerCertificate& cert, const FunctionSample& phi,
                             double feas_tol = 1e-8);

struct NormInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool resolved = true;
  std::optional<AglerCertificate> certificate;  ///< at hi
  std::optional<Witness> witness;               ///< at lo, when one was found
  int evaluations = 0;
};

/// Bisection on c; ample preorderings use the single Szegő check.
NormInterval schur_agler_norm(const FunctionSample& phi, const Preordering& order, double tol,
                              const SolverParams& params = {});

}  // namespace agler
