#pragma once

#include <cstdint>
#include <vector>

#include "ad/diagnostics.hpp"
#include "ad/linalg.hpp"

namespace ad {

struct ConverseResult {
  std::vector<double> lambda;     // population spectrum, per character bin
  std::vector<double> var_ratio;  // empirical Var(lambda_hat_k) / lambda_k^2
};

/// Single-snapshot spectral estimates of a circulant Gaussian covariance with
/// a distinct spectrum; the per-bin variance should equal lambda_k^2. Trials
/// are split into per-thread chunks seeded by trial index and merged in chunk
/// order, so results depend only on (trials, seed, threads).
ConverseResult converse_experiment(int m, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

struct ContinuumPoint {
  std::size_t group_order = 0;
  std::size_t snapshots = 0;
  double mse = 0.0;  // entrywise squared error against the population R
};

/// White Gaussian model: budget |G|*L fixed, cyclic subgroup tower against
/// snapshot count. All grid points should agree.
std::vector<ContinuumPoint> gl_continuum_experiment(int m, std::size_t trials,
                                                    std::uint64_t seed);

struct SupergroupResult {
  double mse_full = 0.0;  // full cyclic group
  double mse_sub = 0.0;   // index-2 subgroup
  double ratio = 0.0;     // mse_sub / mse_full
};

SupergroupResult supergroup_experiment(int m, std::size_t trials,
                                       std::uint64_t seed);

struct DichotomySeries {
  std::vector<double> sigma_kappa;  // per SNR grid point
  std::vector<double> sigma_psi;
  PowerLawFit fit_kappa;
  PowerLawFit fit_psi;
};

struct DichotomyResult {
  std::vector<double> snr_db;
  DichotomySeries matched;     // averaged under the signal's cyclic group
  DichotomySeries mismatched;  // averaged under the trivial group
};

/// Trial scatter of the spectral functionals kappa and psi versus SNR:
/// matched averaging decays with a positive power-law exponent, mismatched
/// averaging saturates at the phase-noise floor.
DichotomyResult scaling_dichotomy_experiment(std::size_t trials_per_point,
                                             std::uint64_t seed);

}  // namespace ad
