#include "ad/signals.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ad/rng.hpp"

namespace ad {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> tone_vector(int M, double freq_bins) {
  std::vector<cplx> v(M);
  for (int n = 0; n < M; ++n) {
    const double ang = 2.0 * kPi * freq_bins * n / static_cast<double>(M);
    v[n] = cplx(std::cos(ang), std::sin(ang));
  }
  return v;
}

// A = U diag(sqrt(lambda)) from the eigendecomposition; x = A z gives
// CN(0, R) samples.
ComplexMatrix covariance_sqrt(const HermitianMatrix& r) {
  const EigDecomposition d = hermitian_eig(r);
  const std::size_t n = r.dim();
  ComplexMatrix a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(d.eigenvalues[k], 0.0);
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i) a(i, k) = d.eigenvectors(i, k) * s;
  }
  return a;
}

}  // namespace

SnapshotSet make_snapshot_set(std::vector<std::vector<cplx>> data, SnapshotMeta meta) {
  SnapshotSet s;
  if (data.empty()) throw std::invalid_argument("SnapshotSet: L >= 1 required");
  s.M = data[0].size();
  s.L = data.size();
  for (const auto& v : data) {
    if (v.size() != s.M) throw std::invalid_argument("SnapshotSet: ragged snapshots");
  }
  s.data = std::move(data);
  s.meta = std::move(meta);
  return s;
}

Graph complete_graph(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

Graph cycle_graph(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
  return g;
}

Graph petersen_graph() {
  Graph g;
  g.n = 10;
  for (int i = 0; i < 5; ++i) {
    g.edges.emplace_back(i, (i + 1) % 5);        // outer pentagon
    g.edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    g.edges.emplace_back(i, 5 + i);              // spokes
  }
  return g;
}

Graph parse_edge_list(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  int maxv = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u >> v)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      throw std::invalid_argument("parse_edge_list: bad line \"" + line + "\"");
    }
    if (u < 0 || v < 0 || u == v) {
      throw std::invalid_argument("parse_edge_list: invalid edge");
    }
    g.edges.emplace_back(u, v);
    maxv = std::max({maxv, u, v});
  }
  g.n = maxv + 1;
  return g;
}

HermitianMatrix graph_laplacian(const Graph& g) {
  if (g.n < 2) throw std::invalid_argument("graph_laplacian: n >= 2 required");
  ComplexMatrix l(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    if (u >= g.n || v >= g.n) throw std::invalid_argument("graph_laplacian: vertex out of range");
    l(u, v) -= 1.0;
    l(v, u) -= 1.0;
    l(u, u) += 1.0;
    l(v, v) += 1.0;
  }
  return HermitianMatrix(l);
}

std::vector<cplx> chirp_diag(int M, double mu) {
  std::vector<cplx> d(M);
  for (int n = 0; n < M; ++n) {
    const double ang = -kPi * mu * n * n / static_cast<double>(M);
    d[n] = cplx(std::cos(ang), std::sin(ang));
  }
  return d;
}

HermitianMatrix build_covariance(const CovModel& model) {
  const int M = model.M;
  switch (model.kind) {
    case CovModel::Kind::white: {
      ComplexMatrix r(M, M);
      for (int i = 0; i < M; ++i) r(i, i) = model.white_sigma2;
      return HermitianMatrix(r);
    }
    case CovModel::Kind::tones:
    case CovModel::Kind::chirp: {
      if (model.freqs.size() != model.amps.size() || model.freqs.empty()) {
        throw std::invalid_argument("build_covariance: tones need matching freqs/amps");
      }
      ComplexMatrix r(M, M);
      for (std::size_t j = 0; j < model.freqs.size(); ++j) {
        const std::vector<cplx> v = tone_vector(M, model.freqs[j]);
        const double a2 = model.amps[j] * model.amps[j];
        for (int p = 0; p < M; ++p) {
          for (int q = 0; q < M; ++q) r(p, q) += a2 * v[p] * std::conj(v[q]);
        }
      }
      for (int i = 0; i < M; ++i) r(i, i) += model.noise_sigma2;
      if (model.kind == CovModel::Kind::tones) return HermitianMatrix(r);
      const std::vector<cplx> d = chirp_diag(M, model.chirp_mu);
      ComplexMatrix rc(M, M);
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) rc(p, q) = d[p] * r(p, q) * std::conj(d[q]);
      }
      return HermitianMatrix(rc);
    }
    case CovModel::Kind::ar: {
      const double rho = model.ar_rho;
      if (std::abs(rho) >= 1.0) {
        throw std::invalid_argument("build_covariance: AR pole magnitude >= 1");
      }
      const double scale = 1.0 / (1.0 - rho * rho);
      ComplexMatrix r(M, M);
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) {
          r(p, q) = scale * std::pow(std::abs(rho), std::abs(p - q)) *
                    ((rho < 0.0 && ((p - q) & 1)) ? -1.0 : 1.0);
        }
      }
      return HermitianMatrix(r);
    }
    case CovModel::Kind::multipath: {
      if (model.mp_delays.size() != model.mp_amps.size() || model.mp_delays.empty()) {
        throw std::invalid_argument("build_covariance: multipath needs matching delays/amps");
      }
      std::vector<double> spectrum(M);
      for (int k = 0; k < M; ++k) {
        cplx h = 0.0;
        for (std::size_t p = 0; p < model.mp_delays.size(); ++p) {
          const double ang = -2.0 * kPi * k * model.mp_delays[p] / static_cast<double>(M);
          h += model.mp_amps[p] * cplx(std::cos(ang), std::sin(ang));
        }
        spectrum[k] = std::norm(h);
      }
      ComplexMatrix r(M, M);
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) {
          cplx acc = 0.0;
          for (int k = 0; k < M; ++k) {
            const double ang = 2.0 * kPi * k * (p - q) / static_cast<double>(M);
            acc += spectrum[k] * cplx(std::cos(ang), std::sin(ang));
          }
          r(p, q) = acc / static_cast<double>(M);
        }
      }
      return HermitianMatrix(r);
    }
    case CovModel::Kind::graph_diffusion: {
      if (model.graph.n != M) {
        throw std::invalid_argument("build_covariance: graph order must equal M");
      }
      const HermitianMatrix l = graph_laplacian(model.graph);
      const EigDecomposition d = hermitian_eig(l);
      ComplexMatrix r(M, M);
      for (int k = 0; k < M; ++k) {
        const double f = 1.0 / (1.0 + d.eigenvalues[k]);
        for (int p = 0; p < M; ++p) {
          for (int q = 0; q < M; ++q) {
            r(p, q) += f * d.eigenvectors(p, k) * std::conj(d.eigenvectors(q, k));
          }
        }
      }
      return HermitianMatrix(r);
    }
  }
  throw std::invalid_argument("build_covariance: unknown kind");
}

SnapshotSet sample_snapshots(const CovModel& model, std::size_t L, double snr_db,
                             std::uint64_t seed) {
  if (L < 1) throw std::invalid_argument("sample_snapshots: L >= 1 required");
  const int M = model.M;
  Rng rng = Rng::for_trial(seed, 0);
  std::vector<std::vector<cplx>> data;
  data.reserve(L);

  const bool tone_like =
      model.kind == CovModel::Kind::tones || model.kind == CovModel::Kind::chirp;
  if (tone_like) {
    double psig = 0.0;
    for (double a : model.amps) psig += a * a;
    const double noise_var =
        std::isinf(snr_db) ? 0.0 : psig / std::pow(10.0, snr_db / 10.0);
    const double nscale = std::sqrt(noise_var);
    const std::vector<cplx> d = chirp_diag(M, model.chirp_mu);
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<cplx> x(M, cplx(0.0, 0.0));
      for (std::size_t j = 0; j < model.freqs.size(); ++j) {
        const double phi = 2.0 * kPi * rng.uniform();
        const cplx gain = model.amps[j] * cplx(std::cos(phi), std::sin(phi));
        const std::vector<cplx> v = tone_vector(M, model.freqs[j]);
        for (int n = 0; n < M; ++n) x[n] += gain * v[n];
      }
      if (model.kind == CovModel::Kind::chirp) {
        for (int n = 0; n < M; ++n) x[n] *= d[n];
      }
      if (nscale > 0.0) {
        for (int n = 0; n < M; ++n) x[n] += nscale * rng.cnormal();
      }
      data.push_back(std::move(x));
    }
  } else {
    const ComplexMatrix a = covariance_sqrt(build_covariance(model));
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<cplx> z(M);
      for (cplx& w : z) w = rng.cnormal();
      data.push_back(mat_vec(a, z));
    }
  }

  SnapshotMeta meta;
  meta.snr_db = snr_db;
  meta.seed = seed;
  switch (model.kind) {
    case CovModel::Kind::tones: meta.generator = "tones"; break;
    case CovModel::Kind::chirp: meta.generator = "chirp"; break;
    case CovModel::Kind::ar: meta.generator = "ar"; break;
    case CovModel::Kind::multipath: meta.generator = "multipath"; break;
    case CovModel::Kind::graph_diffusion: meta.generator = "graph_diffusion"; break;
    case CovModel::Kind::white: meta.generator = "white"; break;
  }
  return make_snapshot_set(std::move(data), std::move(meta));
}

Constellation parse_constellation(const std::string& name) {
  if (name == "bpsk") return Constellation::bpsk;
  if (name == "qpsk") return Constellation::qpsk;
  if (name == "8psk" || name == "mpsk8") return Constellation::mpsk8;
  if (name == "qam16" || name == "16qam") return Constellation::qam16;
  throw std::invalid_argument("unknown constellation: " + name);
}

std::vector<cplx> constellation_points(Constellation c) {
  switch (c) {
    case Constellation::bpsk:
      return {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    case Constellation::qpsk: {
      // Offset by pi/4 so that E[s^4] = -1 (nonzero fourth moment).
      std::vector<cplx> pts;
      for (int k = 0; k < 4; ++k) {
        const double ang = kPi / 4.0 + k * kPi / 2.0;
        pts.emplace_back(std::cos(ang), std::sin(ang));
      }
      return pts;
    }
    case Constellation::mpsk8: {
      std::vector<cplx> pts;
      for (int k = 0; k < 8; ++k) {
        const double ang = 2.0 * kPi * k / 8.0;
        pts.emplace_back(std::cos(ang), std::sin(ang));
      }
      return pts;
    }
    case Constellation::qam16: {
      std::vector<cplx> pts;
      const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
      const double s = 1.0 / std::sqrt(10.0);
      for (double a : levels) {
        for (double b : levels) pts.emplace_back(a * s, b * s);
      }
      return pts;
    }
  }
  throw std::invalid_argument("unknown constellation");
}

std::vector<cplx> symbol_source(Constellation c, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("symbol_source: n >= 1 required");
  const std::vector<cplx> pts = constellation_points(c);
  Rng rng = Rng::for_trial(seed, 1);
  std::vector<cplx> s(n);
  for (cplx& z : s) z = pts[rng.uniform_int(static_cast<int>(pts.size()))];
  return s;
}

ChannelModel rayleigh_channel(int n_taps, double decay_db_per_tap,
                              std::uint64_t seed) {
  if (n_taps < 1) throw std::invalid_argument("rayleigh_channel: n_taps >= 1");
  Rng rng = Rng::for_trial(seed, 2);
  ChannelModel ch;
  ch.decay_db_per_tap = decay_db_per_tap;
  ch.seed = seed;
  ch.taps.resize(n_taps);
  double power = 0.0;
  for (int k = 0; k < n_taps; ++k) {
    const double var = std::pow(10.0, -decay_db_per_tap * k / 10.0);
    ch.taps[k] = std::sqrt(var) * rng.cnormal();
    power += std::norm(ch.taps[k]);
  }
  if (power <= 0.0) {
    ch.taps[0] = 1.0;
    power = 1.0;
  }
  const double scale = 1.0 / std::sqrt(power);
  for (cplx& t : ch.taps) t *= scale;
  return ch;
}

ChannelModel fixed_channel(const std::vector<cplx>& taps) {
  if (taps.empty()) throw std::invalid_argument("fixed_channel: empty taps");
  ChannelModel ch;
  ch.taps = taps;
  double power = 0.0;
  for (const cplx& t : taps) power += std::norm(t);
  if (power <= 0.0) throw std::invalid_argument("fixed_channel: zero power");
  const double scale = 1.0 / std::sqrt(power);
  for (cplx& t : ch.taps) t *= scale;
  return ch;
}

std::vector<cplx> channel_apply(const ChannelModel& ch, const std::vector<cplx>& s,
                                double snr_db, std::uint64_t seed) {
  const std::size_t n = s.size();
  std::vector<cplx> r(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < ch.taps.size() && k <= i; ++k) {
      acc += ch.taps[k] * s[i - k];
    }
    r[i] = acc;
  }
  if (!std::isinf(snr_db)) {
    double psig = 0.0;
    for (const cplx& z : r) psig += std::norm(z);
    psig /= static_cast<double>(n);
    const double nscale = std::sqrt(psig / std::pow(10.0, snr_db / 10.0));
    Rng rng = Rng::for_trial(seed, 3);
    for (cplx& z : r) z += nscale * rng.cnormal();
  }
  return r;
}

}  // namespace ad
