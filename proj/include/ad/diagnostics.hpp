#pragma once

#include <vector>

#include "ad/estimators.hpp"
#include "ad/groups.hpp"
#include "ad/linalg.hpp"
#include "ad/signals.hpp"

namespace ad {

struct DiagnosticsRecord {
  double alpha = 0.0;     // whiteness gate: ||R - qI||_F / ||R||_F
  double psi = 0.0;       // spectral concentration lambda_max / Tr
  double kappa = 1.0;     // 1 + (Tr R)^2 / ||R||_F^2
  double h_struct = 0.0;  // entropy (bits) of the eigenvalue distribution
  double r_eff = 0.0;     // participation ratio (Tr R)^2 / ||R||_F^2 = kappa - 1
};

DiagnosticsRecord diagnostics_record(const HermitianMatrix& r);

/// max_g ||pi_g R - R pi_g||_F / ||R||_F.
double delta_discrete(const Representation& rep, const HermitianMatrix& r);

/// ||[A,R]||_F / (||A||_F ||R||_F) for skew-Hermitian A.
double delta_continuous(const ComplexMatrix& a, const HermitianMatrix& r);

/// Cross-validation residual: mean over unordered snapshot pairs of the
/// squared Frobenius distance between trace-normalized single-snapshot
/// group-averaged estimates.
double dcv(const Representation& rep, const SnapshotSet& snaps);

/// kappa of the running estimate over the first l snapshots, l = 1..Lmax.
std::vector<double> kappa_trajectory(const Representation& rep,
                                     const SnapshotSet& snaps, std::size_t lmax);

struct PowerLawFit {
  double c = 0.0;
  double beta = 0.0;
  double r2 = 0.0;
};

/// Least squares on (log SNR_linear, log sigma); SNR converted from dB with
/// the amplitude convention 10^(dB/20).
PowerLawFit power_law_fit(const std::vector<double>& snr_db,
                          const std::vector<double>& sigma);

struct ConjugateCheck {
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double bound = 0.0;    // 4 / |<[A,B]>_x|^2; +inf when the mean commutator vanishes
  bool holds = true;
  bool skipped = false;  // zero variance in A or B: capacity infinite, check skipped
};

ConjugateCheck conjugate_capacity_check(const HermitianMatrix& a,
                                        const HermitianMatrix& b,
                                        const std::vector<cplx>& x);

}  // namespace ad
