#pragma once

#include <optional>
#include <vector>

#include "agler/realize.hpp"

namespace agler {

/// Tangential interpolation data: find W in the unit ball of the class with
/// b(x) = a(x) W(x) at every node.
struct PickProblem {
  SamplePtr nodes;
  std::vector<CMatrix> a;
  std::vector<CMatrix> b;
  Preordering order;

  PickProblem(SamplePtr n, std::vector<CMatrix> av, std::vector<CMatrix> bv, Preordering o);

  Eigen::Index rows() const { return a.front().rows(); }
  Eigen::Index cols() const { return a.front().cols(); }
};

/// a(x)a(y)^* - b(x)b(y)^*
CMatrix pick_target(const PickProblem& p);

struct PickFeasibility {
  Status status = Status::kUnresolved;
  std::optional<AglerCertificate> certificate;
  std::optional<Witness> witness;
  /// Ample path only: λ_min((aa^* - bb^*) * k_s).
  double min_eigenvalue = 0.0;
  bool szego_path = false;
  double residual = 0.0;
  long iterations = 0;
};

/// Ample preorderings take the Szegő shortcut unless `force_decompose` is
/// set; everything else goes through the projection solver.
PickFeasibility pick_feasible(const PickProblem& p, const SolverParams& params = {}, double tol = 1e-10,
                              bool force_decompose = false);

struct PickSolution {
  Realization realization;
  /// max_x ‖a(x) W(x) - b(x)‖_max
  double node_residual = 0.0;

  CMatrix evaluate(const CVector& x) const { return eval_transfer(realization.colligation, x); }
};

PickSolution pick_solve(const PickProblem& p, const AglerCertificate& cert, double feas_tol = 1e-8);

struct CoronaResult {
  /// ω(x), an n x 1 column per point, with ψ^+(x) ω(x) = 1.
  std::vector<CVector> omega;
  double residual = 0.0;
  /// ω = W e_1 / scale; the interpolation ran with b = scale·e_1^T.
  double scale = 1.0;
  std::optional<PickSolution> solution;
};

/// Right inverse of ψ_λ^+ drawn from a realized interpolant.
CoronaResult corona_right_inverse(SamplePtr sample, const MultiIndex& lambda, const Preordering& order,
                                  const SolverParams& params = {});

}  // namespace agler
