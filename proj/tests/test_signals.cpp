#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ad/groups.hpp"
#include "ad/linalg.hpp"
#include "ad/signals.hpp"

using namespace ad;

TEST_CASE("white covariance") {
  CovModel m;
  m.kind = CovModel::Kind::white;
  m.M = 8;
  m.white_sigma2 = 1.0;
  const HermitianMatrix r = build_covariance(m);
  CHECK(r.matrix().max_abs_diff(ComplexMatrix::identity(8)) < 1e-15);
}

TEST_CASE("single on-grid tone is rank-1 circulant") {
  CovModel m;
  m.kind = CovModel::Kind::tones;
  m.M = 8;
  m.freqs = {2.0};
  m.amps = {1.0};
  const HermitianMatrix r = build_covariance(m);
  const EigDecomposition d = hermitian_eig(r);
  CHECK(d.eigenvalues[0] == doctest::Approx(8.0));
  for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(d.eigenvalues[k]) < 1e-12);
  // Circulant: entry depends only on (i - j) mod M.
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(std::abs(r(i, j) - r((i + 1) % 8, (j + 1) % 8)) < 1e-12);
    }
  }
}

TEST_CASE("AR(1) covariance closed form") {
  CovModel m;
  m.kind = CovModel::Kind::ar;
  m.M = 4;
  m.ar_rho = 0.8;
  const HermitianMatrix r = build_covariance(m);
  const double scale = 1.0 / (1.0 - 0.64);
  const double expect[4] = {1.0, 0.8, 0.64, 0.512};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(r(i, j).real() == doctest::Approx(scale * expect[std::abs(i - j)]));
    }
  }
  CovModel bad = m;
  bad.ar_rho = 1.0;
  CHECK_THROWS(build_covariance(bad));
}

TEST_CASE("graph laplacians") {
  const HermitianMatrix k2 = graph_laplacian(complete_graph(2));
  CHECK(k2(0, 0).real() == doctest::Approx(1.0));
  CHECK(k2(0, 1).real() == doctest::Approx(-1.0));

  const HermitianMatrix c4 = graph_laplacian(cycle_graph(4));
  CHECK(c4(0, 0).real() == doctest::Approx(2.0));
  CHECK(c4(0, 1).real() == doctest::Approx(-1.0));
  CHECK(c4(0, 2).real() == doctest::Approx(0.0));
  CHECK(c4(0, 3).real() == doctest::Approx(-1.0));
  // Row sums zero.
  for (int i = 0; i < 4; ++i) {
    cplx s = 0.0;
    for (int j = 0; j < 4; ++j) s += c4(i, j);
    CHECK(std::abs(s) < 1e-14);
  }

  const Graph pet = petersen_graph();
  CHECK(pet.n == 10);
  const HermitianMatrix lp = graph_laplacian(pet);
  for (int i = 0; i < 10; ++i) CHECK(lp(i, i).real() == doctest::Approx(3.0));
}

TEST_CASE("parse_edge_list") {
  const Graph g = parse_edge_list("0 1\n1 2\n\n2 0\n");
  CHECK(g.n == 3);
  CHECK(g.edges.size() == 3);
  CHECK_THROWS(parse_edge_list("0 0\n"));
}

TEST_CASE("covariances are PSD across kinds and sizes") {
  for (int M : {4, 8, 16, 64}) {
    std::vector<CovModel> models;
    CovModel tones;
    tones.kind = CovModel::Kind::tones;
    tones.M = M;
    tones.freqs = {1.0, 3.0};
    tones.amps = {1.0, 0.5};
    tones.noise_sigma2 = 0.1;
    models.push_back(tones);
    CovModel chirp = tones;
    chirp.kind = CovModel::Kind::chirp;
    chirp.chirp_mu = 0.25;
    models.push_back(chirp);
    CovModel ar;
    ar.kind = CovModel::Kind::ar;
    ar.M = M;
    ar.ar_rho = 0.8;
    models.push_back(ar);
    CovModel mp;
    mp.kind = CovModel::Kind::multipath;
    mp.M = M;
    models.push_back(mp);
    CovModel gd;
    gd.kind = CovModel::Kind::graph_diffusion;
    gd.M = M;
    gd.graph = cycle_graph(M);
    models.push_back(gd);
    CovModel wh;
    wh.kind = CovModel::Kind::white;
    wh.M = M;
    models.push_back(wh);

    for (const CovModel& model : models) {
      const HermitianMatrix r = build_covariance(model);
      const EigDecomposition d = hermitian_eig(r);
      CHECK(d.eigenvalues.back() >= -1e-10 * r.trace_real());
    }
  }
}

TEST_CASE("tone covariance commutes with the shift") {
  CovModel m;
  m.kind = CovModel::Kind::tones;
  m.M = 16;
  m.freqs = {2.0, 5.0};
  m.amps = {1.0, 0.7};
  m.noise_sigma2 = 0.2;
  const HermitianMatrix r = build_covariance(m);
  const Representation rep(cyclic_group(16));
  for (std::size_t g = 0; g < rep.size(); ++g) {
    CHECK(commutator(rep.matrix(g), r.matrix()).frobenius_norm() <
          1e-12 * r.frobenius_norm());
  }

  // Chirp covariance commutes with the conjugated shift.
  CovModel cm = m;
  cm.kind = CovModel::Kind::chirp;
  cm.chirp_mu = 0.3;
  const HermitianMatrix rc = build_covariance(cm);
  const Representation crep(cyclic_group(16), chirp_diag(16, 0.3));
  for (std::size_t g = 0; g < crep.size(); ++g) {
    CHECK(commutator(crep.matrix(g), rc.matrix()).frobenius_norm() <
          1e-11 * rc.frobenius_norm());
  }
}

TEST_CASE("graph diffusion commutes with automorphisms") {
  CovModel m;
  m.kind = CovModel::Kind::graph_diffusion;
  m.M = 6;
  m.graph = cycle_graph(6);
  const HermitianMatrix r = build_covariance(m);
  const Representation rep(dihedral_group(6));  // Aut(C6) = D6
  for (std::size_t g = 0; g < rep.size(); ++g) {
    CHECK(commutator(rep.matrix(g), r.matrix()).frobenius_norm() <
          1e-10 * r.frobenius_norm());
  }

  CovModel k4;
  k4.kind = CovModel::Kind::graph_diffusion;
  k4.M = 4;
  k4.graph = complete_graph(4);
  const HermitianMatrix rk = build_covariance(k4);
  // Aut(K4) = S4: check a generating pair.
  for (const char* cyc : {"(0 1)", "(0 1 2 3)"}) {
    const Permutation p = Permutation::from_cycles(4, cyc);
    const Representation prep(group_from_generators(4, {p}));
    CHECK(commutator(prep.matrix(1), rk.matrix()).frobenius_norm() <
          1e-10 * rk.frobenius_norm());
  }
}

TEST_CASE("snapshot determinism and tone structure") {
  CovModel m;
  m.kind = CovModel::Kind::tones;
  m.M = 8;
  m.freqs = {3.0};
  m.amps = {2.0};
  const SnapshotSet a = sample_snapshots(m, 3, 20.0, 42);
  const SnapshotSet b = sample_snapshots(m, 3, 20.0, 42);
  for (std::size_t l = 0; l < 3; ++l) {
    for (int i = 0; i < 8; ++i) CHECK(a.data[l][i] == b.data[l][i]);
  }

  const SnapshotSet clean = sample_snapshots(m, 1, kNoNoise, 7);
  // Noiseless tone: |x_n| constant, and x_{n+1}/x_n a fixed rotation.
  const auto& x = clean.data[0];
  for (int n = 0; n < 8; ++n) CHECK(std::abs(x[n]) == doctest::Approx(2.0));
  const cplx ratio = x[1] / x[0];
  for (int n = 1; n < 8; ++n) {
    CHECK(std::abs(x[(n + 1) % 8] / x[n] - ratio) < 1e-12);
  }
}

TEST_CASE("white snapshot Monte Carlo consistency") {
  CovModel m;
  m.kind = CovModel::Kind::white;
  m.M = 3;
  const std::size_t trials = 100000;
  ComplexMatrix acc(3, 3);
  for (std::size_t t = 0; t < trials; ++t) {
    const SnapshotSet s = sample_snapshots(m, 1, kNoNoise, 1000 + t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) acc(i, j) += s.data[0][i] * std::conj(s.data[0][j]);
    }
  }
  const double inv = 1.0 / static_cast<double>(trials);
  // Entry standard error ~ 1/sqrt(trials); allow 3 standard errors.
  const double tol = 3.0 / std::sqrt(static_cast<double>(trials));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const cplx expect = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      CHECK(std::abs(acc(i, j) * inv - expect) < tol);
    }
  }
}

TEST_CASE("symbol sources") {
  const auto qpsk = symbol_source(Constellation::qpsk, 64, 5);
  const auto pts = constellation_points(Constellation::qpsk);
  for (const cplx& s : qpsk) {
    bool found = false;
    for (const cplx& p : pts) {
      if (std::abs(s - p) < 1e-12) found = true;
    }
    CHECK(found);
    CHECK(std::pow(s, 4).real() == doctest::Approx(-1.0));  // C4 = -1
  }

  for (const cplx& s : symbol_source(Constellation::bpsk, 32, 9)) {
    CHECK(std::abs(std::abs(s.real()) - 1.0) < 1e-15);
    CHECK(s.imag() == 0.0);
  }

  double power = 0.0;
  const std::size_t n = 100000;
  for (const cplx& s : symbol_source(Constellation::qam16, n, 11)) power += std::norm(s);
  CHECK(power / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("channel apply") {
  const std::vector<cplx> s = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0), 1.0};
  const ChannelModel unit = fixed_channel({cplx(1.0, 0.0)});
  const auto r1 = channel_apply(unit, s, kNoNoise, 0);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(r1[i] - s[i]) < 1e-15);

  const ChannelModel two = fixed_channel({cplx(1.0, 0.0), cplx(0.5, 0.0)});
  const auto r2 = channel_apply(two, s, kNoNoise, 0);
  const double nrm = 1.0 / std::sqrt(1.25);
  CHECK(std::abs(r2[0] - nrm * s[0]) < 1e-14);
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(std::abs(r2[i] - nrm * (s[i] + 0.5 * s[i - 1])) < 1e-14);
  }
}

TEST_CASE("rayleigh channel ensemble decay profile") {
  const int n_taps = 5;
  std::vector<double> tap_power(n_taps, 0.0);
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const ChannelModel ch = rayleigh_channel(n_taps, 3.0, 500 + t);
    double total = 0.0;
    for (const cplx& h : ch.taps) total += std::norm(h);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k < n_taps; ++k) tap_power[k] += std::norm(ch.taps[k]);
  }
  // Powers should decay roughly 3 dB per tap before normalization; check
  // monotone decrease of the ensemble means with sampling slack.
  for (int k = 0; k + 1 < n_taps; ++k) {
    CHECK(tap_power[k + 1] < tap_power[k]);
    const double ratio_db = 10.0 * std::log10(tap_power[k] / tap_power[k + 1]);
    CHECK(ratio_db > 1.0);
    CHECK(ratio_db < 5.5);
  }
}
