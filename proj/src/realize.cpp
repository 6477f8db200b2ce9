#include "agler/realize.hpp"

#include <algorithm>
#include <cmath>

namespace agler {

FunctionSample::FunctionSample(SamplePtr s, std::vector<CMatrix> v) : sample(std::move(s)), values(std::move(v)) {
  require(sample != nullptr, "function sample needs a point sample");
  require(values.size() == sample->size(), "one value per sample point required");
  for (const auto& m : values)
    require(m.rows() == values.front().rows() && m.cols() == values.front().cols() && m.size() > 0,
            "function values must have uniform nonzero dimensions");
}

double FunctionSample::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, spectral_norm(v));
  return s;
}

// ---------------------------------------------------------------- colligations

CMatrix Colligation::unitary() const {
  const Eigen::Index e = state_dim();
  CMatrix u(e + B.cols(), e + B.cols());
  u << A, B, C, D;
  return u;
}

double Colligation::unitarity_defect() const {
  const CMatrix u = unitary();
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

void Colligation::validate() const {
  Eigen::Index e = 0;
  for (const auto& blk : partition) {
    require(blk.mult > 0 && !blk.lambda.is_zero() && blk.lambda.is_binary(),
            "partition blocks need positive multiplicity and nonzero 0/1 multi-indices");
    e += static_cast<Eigen::Index>(blk.mult) * blk.width();
  }
  require(A.rows() == e && A.cols() == e, "A does not match the partition dimension");
  require(B.rows() == e && C.cols() == e, "B/C do not match the state dimension");
  require(D.rows() == D.cols() && B.cols() == D.cols() && C.rows() == D.rows(),
          "colligation blocks have inconsistent sizes");
  if (!partition.empty()) {
    const auto d = partition.front().lambda.dim();
    for (const auto& blk : partition) require(blk.lambda.dim() == d, "partition dimensions differ");
  }
}

bool Colligation::classical() const {
  return std::all_of(partition.begin(), partition.end(),
                     [](const PartitionBlock& b) { return b.lambda.total() == 1; });
}

Colligation Colligation::identity(Eigen::Index io_dim, std::size_t) {
  Colligation s;
  s.A.resize(0, 0);
  s.B.resize(0, io_dim);
  s.C.resize(io_dim, 0);
  s.D = CMatrix::Identity(io_dim, io_dim);
  return s;
}

Colligation Colligation::coordinate(std::size_t d, std::size_t i) {
  Colligation s;
  s.A = CMatrix::Zero(1, 1);
  s.B = CMatrix::Ones(1, 1);
  s.C = CMatrix::Ones(1, 1);
  s.D = CMatrix::Zero(1, 1);
  s.partition.push_back({MultiIndex::unit(d, i), 1});
  return s;
}

Colligation Colligation::constant(const CMatrix& d0, std::size_t) {
  Colligation s;
  s.A.resize(0, 0);
  s.B.resize(0, d0.cols());
  s.C.resize(d0.rows(), 0);
  s.D = d0;
  return s;
}

CMatrix aux_value(const CVector& point, const MultiIndex& lambda) {
  const auto split = parity_split(lambda);
  const auto n = static_cast<Eigen::Index>(split.even.size());
  CRow plus(n), minus(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    plus(j) = monomial(point, split.even[j]);
    minus(j) = monomial(point, split.odd[j]);
  }
  return plus.adjoint() * minus / plus.squaredNorm();
}

CMatrix state_operator(const std::vector<PartitionBlock>& partition, const CVector& point) {
  Eigen::Index e = 0;
  for (const auto& blk : partition) e += static_cast<Eigen::Index>(blk.mult) * blk.width();
  CMatrix s = CMatrix::Zero(e, e);
  Eigen::Index off = 0;
  for (const auto& blk : partition) {
    require(blk.lambda.dim() == static_cast<std::size_t>(point.size()), "point dimension mismatch");
    const CMatrix sigma = aux_value(point, blk.lambda);
    const Eigen::Index w = sigma.rows();
    for (int r = 0; r < blk.mult; ++r) {
      s.block(off, off, w, w) = sigma;
      off += w;
    }
  }
  return s;
}

CMatrix eval_transfer(const Colligation& sigma, const CVector& point) {
  for (Eigen::Index i = 0; i < point.size(); ++i)
    require(std::abs(point(i)) < 1.0, "transfer function evaluated outside the open polydisk");
  if (sigma.state_dim() == 0) return sigma.D;
  const CMatrix s = state_operator(sigma.partition, point);
  const CMatrix m = CMatrix::Identity(s.rows(), s.cols()) - sigma.A * s;
  Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.rcond() > 1e-14)) throw Error("1 - A S(x) is numerically singular");
  return sigma.D + sigma.C * s * lu.solve(sigma.B);
}

Colligation transfer_compose(const Colligation& s1, const Colligation& s2, ComposeMode mode, double t) {
  require(s1.io_dim() == s2.io_dim(), "colligations have different coefficient dimensions");
  const Eigen::Index e1 = s1.state_dim(), e2 = s2.state_dim(), h = s1.io_dim();
  Colligation out;
  out.partition = s1.partition;
  out.partition.insert(out.partition.end(), s2.partition.begin(), s2.partition.end());
  out.A = CMatrix::Zero(e1 + e2, e1 + e2);
  out.B.resize(e1 + e2, h);
  out.C.resize(h, e1 + e2);
  if (mode == ComposeMode::kProduct) {
    out.A.topLeftCorner(e1, e1) = s1.A;
    out.A.topRightCorner(e1, e2) = s1.B * s2.C;
    out.A.bottomRightCorner(e2, e2) = s2.A;
    out.B << s1.B * s2.D, s2.B;
    out.C << s1.C, s1.D * s2.C;
    out.D = s1.D * s2.D;
    out.contractive = s1.contractive || s2.contractive;
  } else {
    require(t >= 0.0 && t <= 1.0, "convex weight must lie in [0,1]");
    const double a = std::sqrt(t), b = std::sqrt(1.0 - t);
    out.A.topLeftCorner(e1, e1) = s1.A;
    out.A.bottomRightCorner(e2, e2) = s2.A;
    out.B << a * s1.B, b * s2.B;
    out.C << a * s1.C, b * s2.C;
    out.D = t * s1.D + (1.0 - t) * s2.D;
    out.contractive = true;
  }
  return out;
}

// ------------------------------------------------------------------ solver

std::string to_string(Status s) {
  switch (s) {
    case Status::kFeasible: return "feasible";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

CMatrix agler_target(const FunctionSample& phi, double c) {
  const auto N = static_cast<Eigen::Index>(phi.values.size());
  const Eigen::Index m = phi.rows();
  CMatrix t(N * m, N * m);
  for (Eigen::Index x = 0; x < N; ++x)
    for (Eigen::Index y = 0; y < N; ++y)
      t.block(x * m, y * m, m, m) =
          c * c * CMatrix::Identity(m, m) - phi.values[x] * phi.values[y].adjoint();
  return t;
}

namespace {

CMatrix lifted_defect(const PointSample& sample, const MultiIndex& lambda, int m) {
  return Eigen::kroneckerProduct(defect_kernel(sample, lambda), CMatrix::Ones(m, m));
}

CMatrix psd_project(const CMatrix& z) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (z + z.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

struct ConeProblem {
  std::vector<MultiIndex> lambdas;
  std::vector<CMatrix> defects;
  Eigen::MatrixXd norm2;
  const CMatrix* target;

  CMatrix apply(const std::vector<CMatrix>& g) const {
    CMatrix s = CMatrix::Zero(target->rows(), target->cols());
    for (std::size_t l = 0; l < g.size(); ++l) s += defects[l].cwiseProduct(g[l]);
    return s;
  }
};

AglerCertificate make_certificate(const SamplePtr& sample, const ConeProblem& prob,
                                  const std::vector<CMatrix>& cone, int m, double residual) {
  AglerCertificate cert;
  for (std::size_t l = 0; l < cone.size(); ++l)
    cert.gammas.emplace_back(prob.lambdas[l], HermitianKernel(sample, m, cone[l]));
  cert.residual = residual;
  return cert;
}

}  // namespace

bool certificate_valid(const AglerCertificate& cert, const PointSample& sample, const CMatrix& target,
                       double feas_tol) {
  if (cert.gammas.empty()) return false;
  CMatrix sum = CMatrix::Zero(target.rows(), target.cols());
  for (const auto& [lambda, gamma] : cert.gammas) {
    if (min_eigenvalue(gamma.matrix()) < -feas_tol) return false;
    sum += schur_scale(defect_kernel(sample, lambda), gamma).matrix();
  }
  return max_abs(sum - target) <= feas_tol;
}

bool witness_valid(const Witness& w, const Preordering& order, const CMatrix& target, double feas_tol) {
  if (!is_admissible(w.kernel, order).admissible) return false;
  if (min_eigenvalue(w.kernel.matrix()) < -1e-10) return false;
  const double pairing = target.cwiseProduct(w.kernel.matrix()).sum().real();
  return pairing < -feas_tol;
}

std::optional<Witness> witness_kernel(const DualData& dual, SamplePtr sample, const CMatrix& target,
                                      int block_dim, const Preordering& order, double feas_tol) {
  const auto lambdas = minimal_reduction(order).elements();
  CMatrix k = dual.rho.conjugate();
  k = 0.5 * (k + k.adjoint()).eval();
  double tr = k.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) return std::nullopt;
  k /= tr;

  // Shift by a multiple of the identity kernel until every D_λ ∘ k is PSD.
  double eps = 0.0;
  for (const auto& lambda : lambdas) {
    const CMatrix dl = lifted_defect(*sample, lambda, block_dim);
    const double lo = min_eigenvalue(dl.cwiseProduct(k));
    const double diag_min = dl.diagonal().real().minCoeff();
    if (lo < 0.0) eps = std::max(eps, -lo / diag_min);
  }
  if (eps > 0.0) {
    k += (eps * (1.0 + 1e-6) + 1e-15) * CMatrix::Identity(k.rows(), k.cols());
    k /= k.trace().real();
  }

  Witness w{HermitianKernel(sample, block_dim, k), 0.0, 0.0, {}};
  w.pairing = target.cwiseProduct(w.kernel.matrix()).sum().real();
  w.violation_min_eigenvalue = min_eigenvalue(target.cwiseProduct(w.kernel.matrix()));
  w.admissibility = is_admissible(w.kernel, order);
  if (!witness_valid(w, order, target, feas_tol)) return std::nullopt;
  return w;
}

DecomposeResult decompose_target(SamplePtr sample, const Preordering& order, const CMatrix& target,
                                 int block_dim, const SolverParams& params) {
  require(order.dim() == sample->dim(), "preordering and sample dimensions differ");
  const Eigen::Index n = static_cast<Eigen::Index>(sample->size()) * block_dim;
  require(target.rows() == n && target.cols() == n, "target has wrong size");
  require(max_abs(target - target.adjoint()) <= 1e-10 * std::max(1.0, max_abs(target)),
          "target is not Hermitian");

  ConeProblem prob;
  prob.lambdas = minimal_reduction(order).elements();
  prob.target = &target;
  prob.norm2 = Eigen::MatrixXd::Zero(n, n);
  for (const auto& lambda : prob.lambdas) {
    prob.defects.push_back(lifted_defect(*sample, lambda, block_dim));
    prob.norm2 += prob.defects.back().cwiseAbs2();
  }
  const std::size_t L = prob.lambdas.size();
  const CMatrix inv_norm2 = prob.norm2.cwiseInverse().cast<Complex>();

  std::vector<CMatrix> x(L, CMatrix::Zero(n, n)), q(L, CMatrix::Zero(n, n)), y(L), cone(L);
  DecomposeResult result;
  double checkpoint = std::numeric_limits<double>::infinity();

  auto try_witness = [&](const CMatrix& lin) -> bool {
    DualData dual{(lin - target).cwiseProduct(inv_norm2)};
    auto w = witness_kernel(dual, sample, target, block_dim, order, params.feas_tol);
    if (!w) return false;
    result.status = Status::kInfeasible;
    result.witness = std::move(*w);
    return true;
  };

  for (long it = 1; it <= params.max_iter; ++it) {
    const CMatrix corr = (prob.apply(x) - target).cwiseProduct(inv_norm2);
    for (std::size_t l = 0; l < L; ++l) y[l] = x[l] - prob.defects[l].conjugate().cwiseProduct(corr);

    for (std::size_t l = 0; l < L; ++l) {
      if (params.scheme == ProjectionScheme::kDykstra) {
        const CMatrix z = y[l] + q[l];
        cone[l] = psd_project(z);
        q[l] = z - cone[l];
        x[l] = cone[l];
      } else {
        cone[l] = psd_project(y[l]);
        x[l] = y[l] + params.relaxation * (cone[l] - y[l]);
      }
    }

    const CMatrix lin = prob.apply(cone);
    const double residual = max_abs(lin - target);
    result.iterations = it;
    result.residual = residual;
    if (residual <= params.feas_tol) {
      auto cert = make_certificate(sample, prob, cone, block_dim, residual);
      if (certificate_valid(cert, *sample, target, params.feas_tol)) {
        result.status = Status::kFeasible;
        result.certificate = std::move(cert);
        return result;
      }
    }
    if ((it == 1 || it % params.witness_every == 0) && try_witness(lin)) return result;
    if (it % params.stall_window == 0) {
      if (checkpoint - residual < params.stall_rel * checkpoint) {
        try_witness(lin);
        return result;
      }
      checkpoint = residual;
    }
  }
  const CMatrix lin = prob.apply(cone);
  try_witness(lin);
  return result;
}

DecomposeResult agler_decompose(const FunctionSample& phi, const Preordering& order, double c,
                                const SolverParams& params) {
  require(c >= 0.0, "c must be non-negative");
  auto r = decompose_target(phi.sample, order, agler_target(phi, c), static_cast<int>(phi.rows()), params);
  if (r.certificate) r.certificate->c = c;
  return r;
}

AmpleMembership ample_membership(const FunctionSample& phi, const Preordering& order, double c, double tol) {
  const auto cls = classify(order);
  require(cls.ample(), "ample membership needs an ample preordering");
  const int m = static_cast<int>(phi.rows());
  const CMatrix ks = szego_kernel(phi.sample, *cls.top, 1).matrix();
  const CMatrix prod = agler_target(phi, c).cwiseProduct(Eigen::kroneckerProduct(ks, CMatrix::Ones(m, m)).eval());
  AmpleMembership out;
  out.min_eigenvalue = min_eigenvalue(prod);
  out.member = out.min_eigenvalue >= -tol * std::max(1.0, spectral_norm(prod));
  return out;
}

// ------------------------------------------------------------ lurking isometry

Realization lurking_isometry_ab(const AglerCertificate& cert, const PointSample& sample,
                                const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                                double gram_tol, double rank_tol) {
  const auto N = static_cast<Eigen::Index>(sample.size());
  require(static_cast<Eigen::Index>(a.size()) == N && static_cast<Eigen::Index>(b.size()) == N,
          "one a/b value per node required");
  const Eigen::Index m = a.front().rows(), p = a.front().cols();
  for (Eigen::Index x = 0; x < N; ++x)
    require(a[x].rows() == m && a[x].cols() == p && b[x].rows() == m && b[x].cols() == p,
            "a and b must share dimensions");

  struct Piece {
    MultiIndex lambda;
    KolmogorovFactor gamma;
    PsiRows rows;
  };
  std::vector<Piece> pieces;
  Eigen::Index e = 0;
  Realization out;
  for (const auto& [lambda, gamma] : cert.gammas) {
    require(gamma.block_dim() == m, "certificate block size differs from a/b rows");
    auto f = kolmogorov(gamma.matrix(), static_cast<int>(m), rank_tol);
    if (f.rank() == 0) continue;
    auto rows = psi_rows(sample, lambda);
    e += f.rank() * rows.n;
    out.colligation.partition.push_back({lambda, static_cast<int>(f.rank())});
    pieces.push_back({lambda, std::move(f), std::move(rows)});
  }

  // Columns of m_minus / m_plus: [g^∓(x)^*; a(x)^*] and [g^±(x)^*; b(x)^*].
  CMatrix m_minus(e + p, N * m), m_plus(e + p, N * m);
  for (Eigen::Index x = 0; x < N; ++x) {
    CMatrix gm(m, e), gp(m, e);
    Eigen::Index off = 0;
    for (const auto& pc : pieces) {
      const CMatrix g = pc.gamma.gamma(static_cast<std::size_t>(x));
      const Eigen::Index w = g.cols() * pc.rows.n;
      gp.middleCols(off, w) = Eigen::kroneckerProduct(g, CMatrix(pc.rows.plus[x]));
      gm.middleCols(off, w) = Eigen::kroneckerProduct(g, CMatrix(pc.rows.minus[x]));
      off += w;
    }
    m_minus.block(0, x * m, e, m) = gm.adjoint();
    m_minus.block(e, x * m, p, m) = a[x].adjoint();
    m_plus.block(0, x * m, e, m) = gp.adjoint();
    m_plus.block(e, x * m, p, m) = b[x].adjoint();
  }

  out.gram_defect = max_abs(m_minus.adjoint() * m_minus - m_plus.adjoint() * m_plus);
  if (out.gram_defect > gram_tol)
    throw Error("certificate rejected: Gram mismatch " + std::to_string(out.gram_defect));

  // U^* maps each column of m_minus to the matching column of m_plus; the
  // unitary closest to that assignment comes from the polar factor.
  Eigen::JacobiSVD<CMatrix> svd(m_plus * m_minus.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix u = svd.matrixV() * svd.matrixU().adjoint();
  auto& col = out.colligation;
  col.A = u.topLeftCorner(e, e);
  col.B = u.topRightCorner(e, p);
  col.C = u.bottomLeftCorner(p, e);
  col.D = u.bottomRightCorner(p, p);
  col.validate();

  for (Eigen::Index x = 0; x < N; ++x) {
    const CMatrix w = eval_transfer(col, sample[x]);
    out.max_sample_error = std::max(out.max_sample_error, max_abs(a[x] * w - b[x]));
  }
  return out;
}

Realization lurking_isometry(const AglerCertificate& cert, const FunctionSample& phi, double feas_tol) {
  require(cert.c > 0.0, "certificate for c = 0 cannot be realized");
  const Eigen::Index m = phi.rows(), k = phi.cols(), s = std::max(m, k);
  std::vector<CMatrix> a, b;
  for (const auto& v : phi.values) {
    CMatrix av = CMatrix::Zero(m, s), bv = CMatrix::Zero(m, s);
    av.leftCols(m) = cert.c * CMatrix::Identity(m, m);
    bv.leftCols(k) = v;
    a.push_back(std::move(av));
    b.push_back(std::move(bv));
  }
  auto r = lurking_isometry_ab(cert, *phi.sample, a, b, 100.0 * feas_tol);
  // Report the error on φ itself rather than on c·W.
  r.max_sample_error /= cert.c;
  return r;
}

// -------------------------------------------------------------------- norm

NormInterval schur_agler_norm(const FunctionSample& phi, const Preordering& order, double tol,
                              const SolverParams& params) {
  require(tol > 0.0, "bisection tolerance must be positive");
  const bool ample = classify(order).ample();
  NormInterval out;

  auto decide = [&](double c) -> DecomposeResult {
    ++out.evaluations;
    if (ample) {
      DecomposeResult r;
      r.status = ample_membership(phi, order, c).member ? Status::kFeasible : Status::kInfeasible;
      return r;
    }
    return agler_decompose(phi, order, c, params);
  };
  auto accept = [&](double c, DecomposeResult& r) {
    if (r.status == Status::kFeasible) {
      out.hi = c;
      out.certificate = std::move(r.certificate);
    } else if (r.status == Status::kInfeasible) {
      out.lo = c;
      out.witness = std::move(r.witness);
    }
  };

  out.lo = phi.sup_norm();
  {
    auto r = decide(out.lo);
    if (r.status == Status::kFeasible) {
      out.hi = out.lo;
      out.certificate = std::move(r.certificate);
    } else {
      double step = 1.0;
      out.hi = -1.0;
      for (int i = 0; i < 60 && out.hi < 0.0; ++i, step *= 2.0) {
        auto rr = decide(out.lo + step);
        if (rr.status == Status::kFeasible) accept(out.lo + step, rr);
      }
      require(out.hi >= 0.0, "no feasible upper bracket found");
    }
  }

  while (out.hi - out.lo > tol) {
    const double mid = 0.5 * (out.lo + out.hi);
    auto r = decide(mid);
    if (r.status != Status::kUnresolved) {
      accept(mid, r);
      continue;
    }
    // Undecided at the midpoint: probe the quarter points before giving up.
    const double upper = out.lo + 0.75 * (out.hi - out.lo);
    const double lower = out.lo + 0.25 * (out.hi - out.lo);
    auto ru = decide(upper);
    auto rl = decide(lower);
    bool progress = false;
    if (ru.status == Status::kFeasible) accept(upper, ru), progress = true;
    if (rl.status == Status::kInfeasible) accept(lower, rl), progress = true;
    if (!progress) {
      out.resolved = false;
      break;
    }
  }

  if (ample) {
    auto hi = agler_decompose(phi, order, out.hi, params);
    if (hi.status == Status::kFeasible) out.certificate = std::move(hi.certificate);
    if (out.lo > 0.0) {
      auto lo = agler_decompose(phi, order, out.lo, params);
      if (lo.status == Status::kInfeasible) out.witness = std::move(lo.witness);
    }
  }
  return out;
}

}  // namespace agler
