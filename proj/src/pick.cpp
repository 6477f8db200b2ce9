#include "agler/pick.hpp"

#include <cmath>

namespace agler {

PickProblem::PickProblem(SamplePtr n, std::vector<CMatrix> av, std::vector<CMatrix> bv, Preordering o)
    : nodes(std::move(n)), a(std::move(av)), b(std::move(bv)), order(std::move(o)) {
  require(nodes != nullptr, "pick problem needs nodes");
  require(a.size() == nodes->size() && b.size() == nodes->size(), "one a and one b per node required");
  require(order.dim() == nodes->dim(), "preordering and node dimensions differ");
  for (std::size_t x = 0; x < a.size(); ++x)
    require(a[x].rows() == a[0].rows() && a[x].cols() == a[0].cols() && b[x].rows() == a[0].rows() &&
                b[x].cols() == a[0].cols() && a[0].size() > 0,
            "a and b must have uniform, equal dimensions");
}

CMatrix pick_target(const PickProblem& p) {
  const auto N = static_cast<Eigen::Index>(p.a.size());
  const Eigen::Index m = p.rows();
  CMatrix t(N * m, N * m);
  for (Eigen::Index x = 0; x < N; ++x)
    for (Eigen::Index y = 0; y < N; ++y)
      t.block(x * m, y * m, m, m) = p.a[x] * p.a[y].adjoint() - p.b[x] * p.b[y].adjoint();
  return t;
}

PickFeasibility pick_feasible(const PickProblem& p, const SolverParams& params, double tol, bool force_decompose) {
  const CMatrix target = pick_target(p);
  const int m = static_cast<int>(p.rows());
  const auto cls = classify(p.order);
  PickFeasibility out;
  if (!cls.ample() || force_decompose) {
    auto r = decompose_target(p.nodes, p.order, target, m, params);
    out.status = r.status;
    out.certificate = std::move(r.certificate);
    out.witness = std::move(r.witness);
    out.residual = r.residual;
    out.iterations = r.iterations;
    return out;
  }

  out.szego_path = true;
  const CMatrix ks = Eigen::kroneckerProduct(szego_kernel(p.nodes, *cls.top, 1).matrix(), CMatrix::Ones(m, m));
  const CMatrix gamma = target.cwiseProduct(ks);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gamma);
  out.min_eigenvalue = es.eigenvalues()(0);
  if (out.min_eigenvalue >= -tol * std::max(1.0, spectral_norm(gamma))) {
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const CMatrix clipped = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    AglerCertificate cert;
    cert.gammas.emplace_back(*cls.top, HermitianKernel(p.nodes, m, clipped));
    const CMatrix rebuilt = clipped.cwiseProduct(Eigen::kroneckerProduct(defect_kernel(*p.nodes, *cls.top),
                                                                          CMatrix::Ones(m, m)).eval());
    cert.residual = max_abs(rebuilt - target);
    if (certificate_valid(cert, *p.nodes, target, params.feas_tol)) {
      out.status = Status::kFeasible;
      out.residual = cert.residual;
      out.certificate = std::move(cert);
    }
    return out;
  }

  // k = k_s * conj(v v^*) pairs with the target to v^*(target * k_s)v < 0.
  const CVector v = es.eigenvectors().col(0);
  CMatrix k = ks.cwiseProduct((v * v.adjoint()).conjugate());
  k /= k.trace().real();
  Witness w{HermitianKernel(p.nodes, m, k), 0.0, 0.0, {}};
  w.pairing = target.cwiseProduct(w.kernel.matrix()).sum().real();
  w.violation_min_eigenvalue = min_eigenvalue(target.cwiseProduct(w.kernel.matrix()));
  w.admissibility = is_admissible(w.kernel, p.order);
  if (witness_valid(w, p.order, target, params.feas_tol)) {
    out.status = Status::kInfeasible;
    out.witness = std::move(w);
  }
  return out;
}

PickSolution pick_solve(const PickProblem& p, const AglerCertificate& cert, double feas_tol) {
  PickSolution out;
  out.realization = lurking_isometry_ab(cert, *p.nodes, p.a, p.b, 100.0 * feas_tol);
  out.node_residual = out.realization.max_sample_error;
  return out;
}

CoronaResult corona_right_inverse(SamplePtr sample, const MultiIndex& lambda, const Preordering& order,
                                  const SolverParams& params) {
  require(classify(order).ample(), "right inverse construction needs an ample preordering");
  const auto rows = psi_rows(*sample, lambda);
  const Eigen::Index n = rows.n;
  CoronaResult out;
  for (int attempt = 0; attempt < 40; ++attempt, out.scale *= 0.5) {
    std::vector<CMatrix> a, b;
    for (const auto& r : rows.plus) {
      a.emplace_back(r);
      CMatrix bv = CMatrix::Zero(1, n);
      bv(0, 0) = out.scale;
      b.push_back(std::move(bv));
    }
    PickProblem prob(sample, std::move(a), std::move(b), order);
    auto feas = pick_feasible(prob, params);
    if (feas.status != Status::kFeasible) continue;
    out.solution = pick_solve(prob, *feas.certificate, params.feas_tol);
    for (std::size_t x = 0; x < sample->size(); ++x) {
      const CMatrix w = out.solution->evaluate((*sample)[x]);
      CVector omega = w.col(0) / out.scale;
      out.residual = std::max(out.residual, std::abs((rows.plus[x] * omega)(0, 0) - 1.0));
      out.omega.push_back(std::move(omega));
    }
    return out;
  }
  throw Error("no feasible scaling found for the right inverse problem");
}

}  // namespace agler
