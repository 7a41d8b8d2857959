#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ad/groups.hpp"
#include "ad/linalg.hpp"
#include "ad/signals.hpp"

namespace ad {

struct CovEstimate {
  HermitianMatrix R_hat;
  std::string group_label;
  std::size_t L_used = 0;
  std::size_t d_eff_claimed = 0;
  bool fast_path = false;
};

/// R_hat = 1/(L|G|) sum_l sum_g (pi_g x_l)(pi_g x_l)^H.
CovEstimate group_avg_covariance(const Representation& rep, const SnapshotSet& snaps);

/// FFT fast path for Abelian product groups: tensor reshape, per-axis DFTs,
/// spectrum averaging, inverse transform. Equals naive averaging to 1e-11
/// relative Frobenius.
CovEstimate fast_path_abelian(const std::vector<int>& factors,
                              const SnapshotSet& snaps);

/// Spectrum of the fast-path estimate: per-snapshot-averaged |F x|^2 over the
/// product-group character basis. These are the eigenvalues of R_hat.
std::vector<double> fast_path_spectrum(const std::vector<int>& factors,
                                       const SnapshotSet& snaps);

/// Commutant projection (1/|G|) sum_g pi_g R pi_g^H.
HermitianMatrix reynolds_project(const Representation& rep, const HermitianMatrix& r);

struct GaatMoments {
  cplx mean;
  double variance = 0.0;                 // population (1/|G|) normalization
  std::optional<cplx> skewness;          // standardized; absent if variance 0
  std::optional<double> kurtosis;
};

/// Moments of the |G| scalars [pi_g x]_0.
GaatMoments gaat_moments(const Representation& rep, const std::vector<cplx>& x);

/// (1/L) sum_l x_l x_l^H; identical to averaging over the trivial group.
CovEstimate sample_covariance(const SnapshotSet& snaps);

}  // namespace ad
