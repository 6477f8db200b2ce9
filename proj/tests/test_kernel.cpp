#include <doctest.h>

#include "agler/kernel.hpp"
#include "support.hpp"

using namespace agler;
using agler::testing::Rng;

namespace {

SamplePtr disk_sample(std::vector<Complex> zs) {
  std::vector<CVector> pts;
  for (auto z : zs) pts.push_back(CVector::Constant(1, z));
  return make_sample(1, pts);
}

// Eigenvalues of a 2x2 Hermitian [[a, b], [conj b, c]] in closed form.
std::pair<double, double> eig2(double a, Complex b, double c) {
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
  return {mid - rad, mid + rad};
}

// Reference eigenvalues computed through a different Eigen path (complex
// Schur rather than the self-adjoint solver).
double min_eig_oracle(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  return es.eigenvalues().real().minCoeff();
}

HermitianKernel random_block_psd(Rng& rng, const SamplePtr& s, int m, Eigen::Index rank) {
  const auto n = static_cast<Eigen::Index>(s->size()) * m;
  return HermitianKernel(s, m, testing::random_psd(rng, n, rank));
}

}  // namespace

TEST_CASE("point sample validation") {
  CHECK_THROWS_AS(disk_sample({1.0}), Error);
  CHECK_THROWS_AS(disk_sample({0.2, 0.2}), Error);
  CHECK_THROWS_AS(make_sample(1, {CVector::Constant(1, 0.95)}, 0.1), Error);
  CHECK_NOTHROW(make_sample(1, {CVector::Constant(1, 0.9)}, 0.1));
  CHECK_THROWS_AS(make_sample(2, {CVector::Constant(1, 0.1)}), Error);
}

TEST_CASE("hermitian kernel rejects non-Hermitian input") {
  auto s = disk_sample({0.1, 0.2});
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(HermitianKernel(s, 1, m), Error);
  CHECK_THROWS_AS(HermitianKernel(s, 2, m), Error);
}

TEST_CASE("schur product examples") {
  auto s = disk_sample({0.1, -0.3, Complex(0, 0.5)});
  const auto ones = HermitianKernel::ones(s, 1);
  CHECK(max_abs(schur_product(ones, ones).matrix() - CMatrix::Ones(3, 3)) == 0.0);

  Rng rng(11);
  auto s4 = disk_sample({0.1, 0.2, 0.3, 0.4});
  const auto k1 = random_block_psd(rng, s4, 1, 1);
  const auto k2 = random_block_psd(rng, s4, 1, 1);
  CHECK(min_eig_oracle(schur_product(k1, k2).matrix()) >= -1e-12);

  auto s2 = disk_sample({0.3, Complex(-0.2, 0.6)});
  const auto sz = szego_kernel(s2, MultiIndex::ones(1));
  const auto defect = HermitianKernel(s2, 1, defect_kernel(*s2, MultiIndex::ones(1)));
  CHECK(max_abs(schur_product(sz, defect).matrix() - CMatrix::Ones(2, 2)) < 1e-15);
}

TEST_CASE("schur product of block kernels is blockwise Kronecker") {
  Rng rng(5);
  auto s = testing::polydisk_sample(rng, 2, 3);
  const auto k1 = random_block_psd(rng, s, 2, 2);
  const auto k2 = random_block_psd(rng, s, 3, 1);
  const auto p = schur_product(k1, k2);
  CHECK(p.block_dim() == 6);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) {
      const CMatrix a = k1.block(x, y), b = k2.block(x, y);
      // Entry (i*3 + k, j*3 + l) of a ⊗ b is a(i,j) b(k,l).
      double worst = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              worst = std::max(worst, std::abs(p.block(x, y)(i * 3 + k, j * 3 + l) - a(i, j) * b(k, l)));
      CHECK(worst < 1e-14);
    }
}

TEST_CASE("szego kernel examples") {
  const auto zero = make_sample(2, {CVector::Zero(2)});
  CHECK(max_abs(szego_kernel(zero, MultiIndex::ones(2)).matrix() - CMatrix::Ones(1, 1)) == 0.0);

  const auto half = disk_sample({0.5});
  CHECK(std::abs(szego_kernel(half, MultiIndex::ones(1)).matrix()(0, 0) - 4.0 / 3.0) < 1e-15);

  Rng rng(3);
  auto s = testing::polydisk_sample(rng, 2, 5);
  const auto k = szego_kernel(s, MultiIndex::ones(2));
  CHECK(min_eig_oracle(k.matrix()) > 0.0);
  // Direct product formula.
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) {
      Complex v = 1.0;
      for (int i = 0; i < 2; ++i) v /= 1.0 - (*s)[x](i) * std::conj((*s)[y](i));
      CHECK(std::abs(k.matrix()(x, y) - v) < 1e-13);
    }
}

TEST_CASE("psd check examples") {
  auto s = disk_sample({0.1, 0.2, 0.3});
  auto id = psd_check(HermitianKernel::identity(s, 1));
  CHECK(id.is_psd);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));

  CMatrix m = CMatrix::Identity(6, 6);
  m.block(2, 2, 2, 2) *= -1.0;
  auto neg = psd_check(HermitianKernel(s, 2, m));
  CHECK_FALSE(neg.is_psd);
  CHECK(neg.min_eigenvalue == doctest::Approx(-1.0));

  Rng rng(9);
  auto s6 = testing::polydisk_sample(rng, 2, 6);
  auto sz = psd_check(szego_kernel(s6, MultiIndex::ones(2)));
  CHECK(sz.is_psd);
  CHECK(sz.min_eigenvalue == doctest::Approx(min_eig_oracle(szego_kernel(s6, MultiIndex::ones(2)).matrix())));
}

TEST_CASE("admissibility examples") {
  Rng rng(21);
  auto s = testing::polydisk_sample(rng, 3, 4);
  const auto ample = Preordering::standard_ample(3);
  CHECK(is_admissible(szego_kernel(s, MultiIndex::ones(3)), ample).admissible);

  const auto diag = HermitianKernel::identity(s, 2);
  for (const auto& order : {Preordering::classical(3), ample,
                            Preordering({MultiIndex({1, 1, 0}), MultiIndex({1, 0, 1})})})
    CHECK(is_admissible(diag, order).admissible);

  auto s2 = disk_sample({0.9, -0.9});
  const auto rep = is_admissible(HermitianKernel::ones(s2, 1), Preordering::classical(1));
  CHECK_FALSE(rep.admissible);
  REQUIRE(rep.failing_lambda.has_value());
  CHECK(*rep.failing_lambda == MultiIndex::ones(1));
  // (1 - z w̄) on the pair: diagonal 1 - 0.81, off-diagonal 1 + 0.81.
  const auto [lo, hi] = eig2(0.19, 1.81, 0.19);
  CHECK(rep.entries.front().min_eigenvalue == doctest::Approx(lo).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0));
  CHECK_THROWS_AS(is_admissible(HermitianKernel::ones(s2, 1), Preordering::classical(2)), Error);
}

TEST_CASE("subordination examples") {
  Rng rng(8);
  auto s = testing::polydisk_sample(rng, 2, 4);
  const auto sz = szego_kernel(s, MultiIndex::ones(2));
  CHECK(is_subordinate(sz, sz).subordinate);

  // k_s * F with F ≥ 0 is admissible, hence subordinate.
  const CMatrix f = testing::random_psd(rng, 4, 2);
  const HermitianKernel k(s, 1, sz.matrix().cwiseProduct(f));
  CHECK(is_admissible(k, Preordering::standard_ample(2)).admissible);
  CHECK(is_subordinate(k, sz).subordinate);

  auto s2 = disk_sample({0.9, -0.9});
  CHECK_FALSE(is_subordinate(HermitianKernel::ones(s2, 1), szego_kernel(s2, MultiIndex::ones(1))).subordinate);

  CMatrix zero_ref = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(is_subordinate(HermitianKernel::ones(s2, 1), HermitianKernel(s2, 1, zero_ref)), Error);
}

TEST_CASE("kolmogorov examples") {
  auto s = disk_sample({0.1, 0.2, 0.3});
  auto f = kolmogorov(HermitianKernel::identity(s, 1));
  CHECK(f.rank() == 3);
  CHECK(max_abs(f.factor.adjoint() * f.factor - CMatrix::Identity(3, 3)) < 1e-14);

  Rng rng(4);
  const CVector v = testing::gaussian_matrix(rng, 3, 1);
  f = kolmogorov(HermitianKernel(s, 1, v * v.adjoint()));
  CHECK(f.rank() == 1);

  auto s6 = testing::polydisk_sample(rng, 2, 6);
  const auto sz = szego_kernel(s6, MultiIndex::ones(2));
  f = kolmogorov(sz);
  CHECK(f.rank() == 6);
  double worst = 0.0;
  for (std::size_t x = 0; x < 6; ++x)
    for (std::size_t y = 0; y < 6; ++y)
      worst = std::max(worst, max_abs(sz.block(x, y) - f.gamma(x) * f.gamma(y).adjoint()));
  CHECK(worst < 1e-10);

  CMatrix indefinite = CMatrix::Identity(3, 3);
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(kolmogorov(HermitianKernel(s, 1, indefinite)), Error);
}

TEST_CASE("property: Schur products of PSD kernels are PSD") {
  Rng rng(1001);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 6;
    const int m1 = 1 + trial % 3, m2 = 1 + (trial / 3) % 3;
    auto s = testing::polydisk_sample(rng, 2, n);
    const auto k1 = random_block_psd(rng, s, m1, 1 + trial % 4);
    const auto k2 = random_block_psd(rng, s, m2, 1 + trial % 5);
    const auto p = schur_product(k1, k2);
    CHECK(psd_check(p, 1e-12).is_psd);
  }
}

TEST_CASE("property: ample admissibility equals subordination to the Szego kernel") {
  Rng rng(1002);
  int admissible_seen = 0, inadmissible_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const int n = 2 + trial % 4;
    auto s = testing::polydisk_sample(rng, d, n, 0.8);
    const auto order = Preordering::standard_ample(d);
    const auto sz = szego_kernel(s, MultiIndex::ones(d));
    // Alternate between arbitrary PSD kernels and Szegő-subordinate ones.
    CMatrix km = testing::random_psd(rng, n, 1 + trial % n);
    if (trial % 2 == 0) km = sz.matrix().cwiseProduct(km);
    const HermitianKernel k(s, 1, km);
    const bool adm = is_admissible(k, order).admissible;
    CHECK(adm == is_subordinate(k, sz).subordinate);
    (adm ? admissible_seen : inadmissible_seen)++;
  }
  CHECK(admissible_seen > 0);
  CHECK(inadmissible_seen > 0);
}

TEST_CASE("property: admissibility is monotone in the preordering") {
  Rng rng(1003);
  const Preordering big = Preordering::standard_ample(3);
  const std::vector<Preordering> smaller = {
      Preordering::classical(3),
      Preordering({MultiIndex({1, 1, 0}), MultiIndex({1, 0, 1})}),
      Preordering({MultiIndex({1, 1, 0}), MultiIndex({0, 0, 1})}),
  };
  for (int trial = 0; trial < 60; ++trial) {
    auto s = testing::polydisk_sample(rng, 3, 2 + trial % 4, 0.8);
    const auto n = static_cast<Eigen::Index>(s->size());
    const HermitianKernel k(s, 1, szego_kernel(s, MultiIndex::ones(3)).matrix().cwiseProduct(testing::random_psd(rng, n, 2)));
    REQUIRE(is_admissible(k, big).admissible);
    for (const auto& o : smaller) CHECK(is_admissible(k, o).admissible);
  }
}

TEST_CASE("property: kolmogorov reassembles PSD kernels") {
  Rng rng(1004);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6, m = 1 + trial % 3;
    auto s = testing::polydisk_sample(rng, 2, n);
    const auto k = random_block_psd(rng, s, m, 1 + trial % (n * m));
    const auto f = kolmogorov(k);
    const CMatrix rebuilt = f.factor * f.factor.adjoint();
    CHECK(max_abs(rebuilt - k.matrix()) <= 10 * 1e-10 * spectral_norm(k.matrix()));
    CHECK(f.rank() == std::min<Eigen::Index>(1 + trial % (n * m), n * m));
  }
}
