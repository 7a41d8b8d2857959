#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ad/linalg.hpp"

namespace ad {

constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct SnapshotMeta {
  std::string generator;
  double snr_db = kNoNoise;
  std::uint64_t seed = 0;
};

struct SnapshotSet {
  std::size_t M = 0;
  std::size_t L = 0;
  std::vector<std::vector<cplx>> data;  // L vectors of length M
  SnapshotMeta meta;
};

SnapshotSet make_snapshot_set(std::vector<std::vector<cplx>> data,
                              SnapshotMeta meta = {});

/// Simple undirected graph, 0-indexed vertices, no self-loops.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph petersen_graph();
/// Parse a plain-text edge list, one "u v" pair per line.
Graph parse_edge_list(const std::string& text);

HermitianMatrix graph_laplacian(const Graph& g);

/// Synthetic covariance models.
struct CovModel {
  enum class Kind { tones, chirp, ar, multipath, graph_diffusion, white };
  Kind kind = Kind::white;
  int M = 8;

  // tones / chirp: frequencies in bins (fractional allowed), amplitudes.
  std::vector<double> freqs;
  std::vector<double> amps;
  double noise_sigma2 = 0.0;  // sigma^2 I term of the tone covariance
  double chirp_mu = 0.0;

  // ar
  double ar_rho = 0.8;

  // multipath: tap delays (samples) and amplitudes; circulant spectrum model.
  std::vector<int> mp_delays = {0, 3, 7};
  std::vector<double> mp_amps = {1.0, 0.6, 0.3};

  // graph_diffusion
  Graph graph;

  // white
  double white_sigma2 = 1.0;
};

/// Population covariance of the model. tones: sum a^2 v v^H + sigma^2 I;
/// chirp: D_mu R_tone D_mu^H; ar: Toeplitz rho^|j-k|/(1-rho^2); multipath:
/// circulant with spectrum |H_k|^2; graph_diffusion: (I+L)^{-1}; white:
/// sigma^2 I.
HermitianMatrix build_covariance(const CovModel& model);

/// Chirp conjugator diag(e^{-i pi mu n^2 / M}).
std::vector<cplx> chirp_diag(int M, double mu);

/// Seeded snapshots. tones/chirp: i.i.d. uniform phases per snapshot plus
/// circular Gaussian noise at snr_db (kNoNoise disables noise); Gaussian kinds
/// (ar, multipath, graph_diffusion, white) draw from the model covariance and
/// ignore snr_db.
SnapshotSet sample_snapshots(const CovModel& model, std::size_t L, double snr_db,
                             std::uint64_t seed);

enum class Constellation { bpsk, qpsk, mpsk8, qam16 };

Constellation parse_constellation(const std::string& name);
std::vector<cplx> constellation_points(Constellation c);
/// i.i.d. uniform draws over the constellation, unit average power.
std::vector<cplx> symbol_source(Constellation c, std::size_t n, std::uint64_t seed);

struct ChannelModel {
  std::vector<cplx> taps;  // normalized: sum |h_k|^2 = 1
  double decay_db_per_tap = 3.0;
  std::uint64_t seed = 0;
};

/// Rayleigh-envelope taps with exponential power decay, unit total power.
ChannelModel rayleigh_channel(int n_taps, double decay_db_per_tap,
                              std::uint64_t seed);
/// Fixed-tap channel (normalized).
ChannelModel fixed_channel(const std::vector<cplx>& taps);

/// Linear convolution truncated to the symbol length, plus circular Gaussian
/// noise sized against the empirical signal power at the channel output.
std::vector<cplx> channel_apply(const ChannelModel& ch, const std::vector<cplx>& s,
                                double snr_db, std::uint64_t seed);

}  // namespace ad
