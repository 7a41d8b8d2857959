#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ad/diagnostics.hpp"
#include "ad/rng.hpp"

using namespace ad;

namespace {

HermitianMatrix diag_matrix(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix random_psd(int n, Rng& rng) {
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  }
  return HermitianMatrix(a * a.adjoint());
}

}  // namespace

TEST_CASE("scalar matrix: alpha 0, flat spectrum") {
  const HermitianMatrix id = HermitianMatrix(ComplexMatrix::identity(8));
  const DiagnosticsRecord d = diagnostics_record(id);
  CHECK(d.alpha == doctest::Approx(0.0));
  CHECK(d.psi == doctest::Approx(1.0 / 8.0));
  CHECK(d.kappa == doctest::Approx(9.0));
  CHECK(d.r_eff == doctest::Approx(8.0));
  CHECK(d.h_struct == doctest::Approx(3.0));
}

TEST_CASE("rank one: maximal concentration") {
  ComplexMatrix e00(8, 8);
  e00(0, 0) = 1.0;
  const DiagnosticsRecord d = diagnostics_record(HermitianMatrix(e00));
  CHECK(d.psi == doctest::Approx(1.0));
  CHECK(d.kappa == doctest::Approx(2.0));
  CHECK(d.r_eff == doctest::Approx(1.0));
  CHECK(d.h_struct == doctest::Approx(0.0));
  // ||e00 - I/8||_F = sqrt((7/8)^2 + 7/64) = sqrt(7/8)
  CHECK(d.alpha == doctest::Approx(std::sqrt(7.0 / 8.0)));
}

TEST_CASE("diag(3,1) by hand") {
  const DiagnosticsRecord d = diagnostics_record(diag_matrix({3.0, 1.0}));
  CHECK(d.psi == doctest::Approx(0.75));
  CHECK(d.kappa == doctest::Approx(1.0 + 16.0 / 10.0));
  // alpha: qbar = 2, ||diag(1,-1)||_F / ||diag(3,1)||_F = sqrt(2/10)
  CHECK(d.alpha == doctest::Approx(std::sqrt(0.2)));
  const double p0 = 0.75, p1 = 0.25;
  CHECK(d.h_struct ==
        doctest::Approx(-p0 * std::log2(p0) - p1 * std::log2(p1)));
}

TEST_CASE("kappa equals 1 + 1/sum p^2 on random spectra") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix r = random_psd(6, rng);
    const DiagnosticsRecord d = diagnostics_record(r);
    const EigDecomposition e = hermitian_eig(r);
    const double tr = r.trace_real();
    double sum_p2 = 0.0;
    for (double lam : e.eigenvalues) sum_p2 += (lam / tr) * (lam / tr);
    CHECK(d.kappa == doctest::Approx(1.0 + 1.0 / sum_p2).epsilon(1e-9));
    CHECK(d.r_eff == doctest::Approx(d.kappa - 1.0));
    CHECK(d.psi >= 1.0 / 6.0 - 1e-12);
    CHECK(d.psi <= 1.0 + 1e-12);
    CHECK(d.h_struct >= -1e-12);
    CHECK(d.h_struct <= std::log2(6.0) + 1e-12);
  }
}

TEST_CASE("delta_discrete") {
  const Representation z4(cyclic_group(4));
  // Circulant commutes exactly.
  CovModel model;
  model.kind = CovModel::Kind::multipath;
  model.M = 4;
  model.mp_delays = {0, 1};
  model.mp_amps = {1.0, 0.5};
  const HermitianMatrix circ = build_covariance(model);
  CHECK(delta_discrete(z4, circ) < 1e-14);

  // e0 e0^T does not commute with the shift.
  ComplexMatrix e00(4, 4);
  e00(0, 0) = 1.0;
  const double d = delta_discrete(z4, HermitianMatrix(e00));
  // [P, e00] has the two entries +-1: norm sqrt(2); / ||e00||_F = 1.
  CHECK(d == doctest::Approx(std::sqrt(2.0)));

  // Scale invariance.
  CHECK(delta_discrete(z4, HermitianMatrix(e00 * cplx(7.5, 0.0))) ==
        doctest::Approx(d));
}

TEST_CASE("delta_continuous") {
  // A = i sigma_z (skew-Hermitian), R = sigma_x: [A,R] = 2i sigma_y.
  ComplexMatrix a(2, 2), r(2, 2);
  a(0, 0) = cplx(0.0, 1.0);
  a(1, 1) = cplx(0.0, -1.0);
  r(0, 1) = 1.0;
  r(1, 0) = 1.0;
  const double d = delta_continuous(a, HermitianMatrix(r));
  // ||[A,R]||_F = 2 sqrt 2, ||A|| = ||R|| = sqrt 2.
  CHECK(d == doctest::Approx(std::sqrt(2.0)));

  // Commuting pair: zero.
  ComplexMatrix a2(2, 2);
  a2(0, 0) = cplx(0.0, 1.0);
  a2(1, 1) = cplx(0.0, 1.0);
  CHECK(delta_continuous(a2, HermitianMatrix(r)) == doctest::Approx(0.0));

  // Hermitian (not skew) A is rejected.
  CHECK_THROWS(delta_continuous(r, HermitianMatrix(r)));
}

TEST_CASE("cross-validation residual") {
  const Representation z8(cyclic_group(8));
  Rng rng(37);
  std::vector<cplx> x(8);
  for (cplx& z : x) z = rng.cnormal();

  // Identical snapshots: zero residual.
  const SnapshotSet same = make_snapshot_set({x, x, x});
  CHECK(dcv(z8, same) < 1e-28);

  // e0 and e1 land on the same orbit average I/8 after trace normalization.
  std::vector<cplx> e0(8, cplx(0.0, 0.0)), e1(8, cplx(0.0, 0.0));
  e0[0] = 1.0;
  e1[1] = 1.0;
  CHECK(dcv(z8, make_snapshot_set({e0, e1})) < 1e-28);

  // Distinct directions under the trivial group disagree.
  CHECK(dcv(Representation(trivial_group(8)), make_snapshot_set({e0, e1})) >
        0.5);

  CHECK_THROWS(dcv(z8, make_snapshot_set({x})));
}

TEST_CASE("kappa trajectory") {
  const Representation triv(trivial_group(4));
  std::vector<cplx> e0(4, cplx(0.0, 0.0)), e1(4, cplx(0.0, 0.0));
  e0[0] = 1.0;
  e1[1] = 1.0;
  const SnapshotSet snaps = make_snapshot_set({e0, e1, e0, e1});
  const std::vector<double> traj = kappa_trajectory(triv, snaps, 4);
  REQUIRE(traj.size() == 4);
  // L=1: rank one, kappa 2. L=2: two equal eigenvalues, kappa 3.
  CHECK(traj[0] == doctest::Approx(2.0));
  CHECK(traj[1] == doctest::Approx(3.0));
  CHECK(traj[3] == doctest::Approx(3.0));

  // Under Z4 the single-snapshot estimate is already I/4: flat trajectory.
  const std::vector<double> flat =
      kappa_trajectory(Representation(cyclic_group(4)), snaps, 4);
  for (double k : flat) CHECK(k == doctest::Approx(5.0));

  CHECK_THROWS(kappa_trajectory(triv, snaps, 5));
}

TEST_CASE("power law fit") {
  const std::vector<double> snr = {0.0, 5.0, 10.0, 15.0, 20.0, 30.0};
  // sigma = 2 / SNR_linear: beta 1, c 2.
  std::vector<double> sigma(snr.size());
  for (std::size_t i = 0; i < snr.size(); ++i) {
    sigma[i] = 2.0 / std::pow(10.0, snr[i] / 20.0);
  }
  const PowerLawFit f = power_law_fit(snr, sigma);
  CHECK(f.beta == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.c == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-10));

  // Constant sigma: beta 0.
  const PowerLawFit f0 = power_law_fit(snr, std::vector<double>(snr.size(), 0.3));
  CHECK(std::abs(f0.beta) < 1e-12);
  CHECK(f0.c == doctest::Approx(0.3));

  CHECK_THROWS(power_law_fit({0.0, 1.0}, {1.0, 1.0}));
}

TEST_CASE("conjugate capacity bound saturates on a Pauli pair") {
  // A = sigma_x / sqrt 2, B = sigma_y / sqrt 2, x = e0.
  ComplexMatrix sx(2, 2), sy(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  sy(0, 1) = cplx(0.0, -1.0);
  sy(1, 0) = cplx(0.0, 1.0);
  const HermitianMatrix a(sx * cplx(1.0 / std::sqrt(2.0), 0.0));
  const HermitianMatrix b(sy * cplx(1.0 / std::sqrt(2.0), 0.0));
  const std::vector<cplx> e0 = {1.0, 0.0};
  const ConjugateCheck c = conjugate_capacity_check(a, b, e0);
  CHECK_FALSE(c.skipped);
  // Var = 1/2 each, kappa = 2; <[A,B]> = i, bound = 4.
  CHECK(c.kappa_a == doctest::Approx(2.0));
  CHECK(c.kappa_b == doctest::Approx(2.0));
  CHECK(c.bound == doctest::Approx(4.0));
  CHECK(c.holds);
}

TEST_CASE("conjugate capacity bound holds on random pairs") {
  Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + rng.uniform_int(4);
    const HermitianMatrix a = random_psd(n, rng);
    const HermitianMatrix b = random_psd(n, rng);
    std::vector<cplx> x(n);
    double norm = 0.0;
    for (cplx& z : x) {
      z = rng.cnormal();
      norm += std::norm(z);
    }
    norm = std::sqrt(norm);
    for (cplx& z : x) z /= norm;
    const ConjugateCheck c = conjugate_capacity_check(a, b, x);
    CHECK(c.holds);
    if (!c.skipped) ++checked;
  }
  CHECK(checked > 900);
}
