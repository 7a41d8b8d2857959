#pragma once

#include <string>
#include <vector>

#include "ad/diagnostics.hpp"
#include "ad/estimators.hpp"
#include "ad/groups.hpp"
#include "ad/linalg.hpp"
#include "ad/signals.hpp"

namespace ad {

/// Residual threshold defaults: exact (noiseless) covariances vs sample
/// estimates from finite data.
constexpr double kTauNoiseless = 1e-8;
constexpr double kTauSample = 0.05;

/// A set of skew-Hermitian search directions for the commutator solver.
/// Elements are linearly independent in the Frobenius inner product above a
/// 1e-10 drop tolerance.
struct GeneratorBasis {
  int degree = 0;
  std::vector<ComplexMatrix> mats;
  std::vector<std::string> labels;
};

/// Skew-Hermitian lift of a permutation matrix P: the pair (P - P^T)/2 and
/// i(P + P^T)/2 projected off the identity direction. Zero or dependent
/// members are dropped.
GeneratorBasis basis_from_permutations(int degree,
                                       const std::vector<Permutation>& perms,
                                       const std::vector<std::string>& labels);

/// Default search basis: lifts of the shift, the squared shift, and two
/// reflections of the M-cycle.
GeneratorBasis natural_basis(int degree);

/// Lifts of all transpositions (i j), i < j. Suited to complete-graph
/// symmetry discovery.
GeneratorBasis transposition_basis(int degree);

struct MinDirection {
  ComplexMatrix a_star;   // unit Frobenius norm, skew-Hermitian
  double lambda_min = 0;  // smallest generalized eigenvalue; >= -1e-10
};

/// Double-commutator generalized eigenproblem: M_ij = Tr(B_i^H [R,[R,B_j]]),
/// G_ij = Tr(B_i^H B_j). Returns the best-commuting direction in the span.
MinDirection solve_min_direction(const HermitianMatrix& r,
                                 const GeneratorBasis& basis);

struct PermResidual {
  double exact = 0.0;    // ||[P_sigma, R]||_F^2 computed directly
  double eigdiff = 0.0;  // sum_k (lambda_k - lambda_sigma(k))^2
};

/// Both sides of the eigenvalue-difference identity. They agree whenever R is
/// diagonal in the standard basis; for general R the exact value is
/// authoritative and the spectral value is reported for comparison.
PermResidual perm_residual_eigdiff(const HermitianMatrix& r, const Permutation& sigma);

/// Round a direction to the nearest permutation via linear assignment on the
/// entrywise profit <P_sigma, Re A*>. A purely imaginary direction degrades
/// to the all-zero profit, i.e. the deterministic lowest-index assignment.
/// Identity forbidden by default.
Permutation round_to_permutation(const ComplexMatrix& a_star,
                                 bool forbid_identity = true);

struct SeqGevpIteration {
  double lambda_min = 0.0;
  Permutation rounded_perm;
  double residual = 0.0;
  bool accepted = false;
};

enum class SeqGevpTermination { rejection, basis_exhausted, cap };

struct SeqGevpTrace {
  std::vector<SeqGevpIteration> iterations;
  FiniteGroup final_group;
  SeqGevpTermination termination = SeqGevpTermination::basis_exhausted;
  double tau = 0.0;
};

/// Iterative generator discovery: solve the GEVP on the deflated basis, round
/// to a permutation, accept iff the commutation residual is <= tau, extend the
/// accumulated group, deflate the basis against its matrix span, repeat.
SeqGevpTrace sequential_gevp(const HermitianMatrix& r, const GeneratorBasis& basis,
                             double tau, std::size_t cap = 32);

struct MatchReport {
  std::vector<std::pair<std::string, double>> ranked;  // (label, D_CV) ascending
  double alpha_gate = 0.0;
  std::string selected;
  std::vector<double> kappa_trajectory;
  std::string notes;
};

/// Rank candidate groups by the cross-validation residual; ties break toward
/// the larger group.
MatchReport library_match_dcv(const SnapshotSet& snaps,
                              const std::vector<FiniteGroup>& library);

enum class SweepCriterion { psi, dcv };

struct SweepSpec {
  enum class Kind { chirp_mu, kaiser_beta, group_library };
  Kind kind = Kind::chirp_mu;
  std::vector<double> grid;            // chirp_mu / kaiser_beta
  std::vector<FiniteGroup> groups;     // group_library
  SweepCriterion criterion = SweepCriterion::dcv;
};

struct SweepResult {
  double best_param = 0.0;                        // grid value (or group index)
  std::vector<std::pair<double, double>> curve;   // (param, criterion value)
};

/// Parameter sweep: chirp rate via conjugated cyclic representations, Kaiser
/// window shape via pre-windowed snapshots, or a plain group library. The psi
/// criterion is rejected for group libraries with heterogeneous orders
/// (orbit-size bias).
SweepResult param_sweep(const SnapshotSet& snaps, const SweepSpec& spec);

struct PipelineConfig {
  double alpha_threshold = 0.1;
  double tau = kTauSample;
  std::size_t seq_cap = 16;
  std::vector<FiniteGroup> library;       // empty: Abelian library of order M
  double kappa_rel_threshold = 0.15;
  std::size_t kappa_lmax = 8;
};

/// Five-stage blind identification: whiteness gate, continuous candidate
/// generation, sequential assembly, cross-validation ranking, and a capacity
/// trajectory verification appended to the report notes.
MatchReport pipeline(const SnapshotSet& snaps, const PipelineConfig& config);

}  // namespace ad
