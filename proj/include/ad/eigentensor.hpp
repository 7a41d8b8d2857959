#pragma once

#include <cstdint>
#include <vector>

#include "ad/groups.hpp"
#include "ad/linalg.hpp"

namespace ad {

/// Vector of spectral concentrations from K first-stage channels.
struct Level1Profile {
  std::vector<double> psi_vec;  // entries in (0, 1]
  std::size_t k() const { return psi_vec.size(); }
};

struct Level2Result {
  HermitianMatrix r2;  // (1/|G2|) sum (P_s psi)(P_s psi)^T
  double psi2 = 0.0;   // lambda_max(R2) / Tr(R2)
};

/// Second-stage group average over a group acting on the profile indices.
/// For the full symmetric group the result has exactly two distinct entry
/// values: diagonal mean(psi_i^2) and off-diagonal mean over ordered
/// distinct pairs of psi_i psi_j.
Level2Result level2_estimate(const Level1Profile& profile,
                             const FiniteGroup& g2);

constexpr std::size_t kSymmetricClosureCap = 6;

/// Full symmetric group on k indices, k <= 6 (720 elements).
FiniteGroup symmetric_group(int k);

struct TwoClassSample {
  std::vector<Level1Profile> flat;    // near-constant profiles
  std::vector<Level1Profile> ramped;  // frequency-ramped profiles
};

/// Synthetic two-class generator: flat profiles psi_i = base + jitter and
/// ramped profiles psi_i = base - slope*i + jitter, clipped to (0, 1].
TwoClassSample two_class_profiles(std::size_t per_class, std::size_t k,
                                  double jitter_sigma, std::uint64_t seed);

struct SeparationReport {
  double mean_flat = 0.0;
  double mean_ramped = 0.0;
  double pooled_sigma = 0.0;
  double separation = 0.0;  // |mean difference| / pooled sigma
};

/// psi2 class separation under the full symmetric closure.
SeparationReport two_class_separation(const TwoClassSample& sample);

}  // namespace ad
