#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ad/groups.hpp"
#include "ad/signals.hpp"

namespace ad {

/// Scalar stream of length N = M*L reorganized into L blocks of M samples,
/// row-major and lossless.
struct StratifiedStream {
  std::size_t m = 0;
  std::size_t l = 0;
  std::vector<std::vector<cplx>> blocks;
  std::size_t source_len = 0;
};

StratifiedStream stratify(const std::vector<cplx>& stream, std::size_t m);

/// Orbit-sampling strategies, by increasing algebraic sophistication:
/// level 1 pairs every chosen permutation with its inverse, level 2 draws
/// representatives of distinct cycle types (each with inverse), level 3 takes
/// one representative per left coset of the matched group in the full
/// symmetric group.
struct PaseSelection {
  int level = 1;
  std::vector<Permutation> elements;
  bool closed_under_inverse = false;
};

PaseSelection pase_select(int level, const FiniteGroup& g, std::size_t n,
                          std::uint64_t seed);

enum class McPiMode { plain, stratified };

struct McPiResult {
  double estimate = 0.0;
  double abs_error = 0.0;
  std::size_t n_total = 0;
  std::size_t rounds = 0;  // stratified: n_total / strata; plain: n_total
};

/// pi = integral of 4 sqrt(1 - u^2) over [0,1]. Plain Monte Carlo draws
/// n_total uniforms; stratified draws one uniform per stratum
/// [k/M, (k+1)/M) per round.
McPiResult mc_pi(McPiMode mode, std::size_t m_strata, std::size_t n_total,
                 std::uint64_t seed);

struct CodingRateRow {
  std::string model;
  double h_struct = 0.0;     // bits, from the population covariance
  std::size_t n_star = 0;    // smallest orbit sample within tolerance of floor
  double ratio = 0.0;        // n_star / 2^h_struct
  bool diffuse = false;      // h_struct >= (1/2) log2 M
  std::vector<double> mse_curve;  // Monte Carlo MSE per orbit-sample size
};

struct CodingRateConfig {
  std::size_t trials = 200;
  double floor_tolerance = 0.05;  // within 5% of the full-orbit MSE floor
};

/// For each covariance model: structural entropy of the population
/// covariance, and the smallest number of orbit elements whose group-average
/// estimator reaches the full-orbit Monte Carlo MSE floor within the
/// configured tolerance. Orbit elements are traversed in an antithetic
/// greedy order fitted on a separate pilot sample.
std::vector<CodingRateRow> coding_rate_experiment(
    const std::vector<CovModel>& models, const std::vector<std::string>& names,
    const FiniteGroup& g, std::uint64_t seed, CodingRateConfig cfg = {});

}  // namespace ad
