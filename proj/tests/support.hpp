#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "agler/opmodel.hpp"
#include "agler/realize.hpp"

namespace agler::testing {

using Rng = std::mt19937_64;

inline Complex gaussian(Rng& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniform in the disk of radius r.
inline Complex disk_point(Rng& rng, double r) {
  return std::polar(r * std::sqrt(uniform(rng)), 2.0 * M_PI * uniform(rng));
}

inline std::vector<CVector> polydisk_points(Rng& rng, std::size_t d, int n, double r = 0.9) {
  std::vector<CVector> pts;
  for (int i = 0; i < n; ++i) {
    CVector p(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) p(static_cast<Eigen::Index>(j)) = disk_point(rng, r);
    pts.push_back(std::move(p));
  }
  return pts;
}

inline SamplePtr polydisk_sample(Rng& rng, std::size_t d, int n, double r = 0.9) {
  return make_sample(d, polydisk_points(rng, d, n, r));
}

inline CMatrix gaussian_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = gaussian(rng);
  return m;
}

inline CMatrix random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(rng, n, n));
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  // Fix column phases so the distribution does not depend on QR conventions.
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// G G^* with G of the given rank.
inline CMatrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const CMatrix g = gaussian_matrix(rng, n, rank);
  return g * g.adjoint();
}

/// Unitary colligation with the given partition and coefficient dimension.
inline Colligation random_colligation(Rng& rng, std::vector<PartitionBlock> partition, Eigen::Index h) {
  Colligation s;
  s.partition = std::move(partition);
  Eigen::Index e = 0;
  for (const auto& b : s.partition) e += static_cast<Eigen::Index>(b.mult) * b.width();
  const CMatrix u = random_unitary(rng, e + h);
  s.A = u.topLeftCorner(e, e);
  s.B = u.topRightCorner(e, h);
  s.C = u.bottomLeftCorner(h, e);
  s.D = u.bottomRightCorner(h, h);
  return s;
}

inline Colligation random_classical_colligation(Rng& rng, std::size_t d, int mult, Eigen::Index h) {
  std::vector<PartitionBlock> part;
  for (std::size_t j = 0; j < d; ++j) part.push_back({MultiIndex::unit(d, j), mult});
  return random_colligation(rng, std::move(part), h);
}

/// Commuting strict contractions of size q drawn from one of three families:
/// simultaneously diagonal in a random unitary basis, polynomials in one
/// random matrix, or a scaled nilpotent example.
inline CommutingTuple random_commuting_tuple(Rng& rng, std::size_t d, Eigen::Index q, double max_norm = 0.95) {
  std::vector<CMatrix> mats;
  const int family = std::uniform_int_distribution<int>(0, 2)(rng);
  if (family == 0) {
    const CMatrix w = random_unitary(rng, q);
    for (std::size_t j = 0; j < d; ++j) {
      CVector diag(q);
      for (Eigen::Index i = 0; i < q; ++i) diag(i) = disk_point(rng, 1.0);
      mats.push_back(w * diag.asDiagonal() * w.adjoint());
    }
  } else if (family == 1) {
    const CMatrix m = gaussian_matrix(rng, q, q);
    for (std::size_t j = 0; j < d; ++j) {
      CMatrix p = gaussian(rng) * CMatrix::Identity(q, q);
      CMatrix power = CMatrix::Identity(q, q);
      for (int k = 1; k <= 3; ++k) {
        power = power * m;
        p += gaussian(rng) * power;
      }
      mats.push_back(std::move(p));
    }
  } else {
    // Jointly nilpotent: strictly upper triangular polynomials in a shift.
    CMatrix shift = CMatrix::Zero(q, q);
    for (Eigen::Index i = 0; i + 1 < q; ++i) shift(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      CMatrix p = CMatrix::Zero(q, q);
      CMatrix power = CMatrix::Identity(q, q);
      for (int k = 1; k < q; ++k) {
        power = power * shift;
        p += gaussian(rng) * power;
      }
      mats.push_back(std::move(p));
    }
  }
  for (auto& m : mats) {
    const double n = spectral_norm(m);
    if (n > 0) m *= uniform(rng, 0.1, max_norm) / n;
  }
  return CommutingTuple(std::move(mats), 1e-10);
}

}  // namespace agler::testing
