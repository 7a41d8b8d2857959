#pragma once

#include <cstdint>
#include <vector>

#include "ad/signals.hpp"

namespace ad {

enum class EqCost { cma, mma, ad_zm };

/// Rotational grid order of a constellation: the largest M with
/// e^{2 pi i / M} * S = S.
int grid_order(Constellation c);

/// Cost constants derived from the exact constellation point set.
struct CostConstants {
  double r2 = 1.0;        // E|s|^4 / E|s|^2 (constant-modulus target)
  double r2_axis = 1.0;   // E[s_R^4] / E[s_R^2] (per-axis multi-modulus target)
  cplx c_m = 0.0;         // E[s^M] for the grid order M
  int m_grid = 4;
};

CostConstants cost_constants(Constellation c);

/// Per-sample cost and its gradient with respect to conj(y).
struct CostSample {
  double j = 0.0;
  cplx grad = 0.0;
};

CostSample cost_and_gradient(EqCost cost, cplx y, const CostConstants& k);

struct EqualizerConfig {
  Constellation constellation = Constellation::qpsk;
  EqCost cost = EqCost::cma;
  int n_taps = 11;  // odd: center-spike initialization
  double step = 1e-3;
  std::size_t n_symbols = 5000;
  ChannelModel channel;
  double snr_db = 25.0;
  std::uint64_t seed = 0;
};

struct EqualizerResult {
  std::vector<cplx> taps;
  std::vector<cplx> outputs;        // last quarter of the output stream
  std::vector<cplx> sent;           // transmitted symbols matching `outputs`
  double converged_cost = 0.0;      // mean per-sample cost over that window
};

/// Symbol-spaced FIR blind equalizer driven by per-sample stochastic
/// gradient descent: w <- w - step * grad * conj(x window).
EqualizerResult run_equalizer(const EqualizerConfig& cfg);

/// Residual rotation of the outputs against the Z_M constellation grid,
/// estimated from the M-th power moment; wrapped into (-pi/M, pi/M].
double residual_phase(const std::vector<cplx>& y, int m_grid,
                      Constellation constellation);

struct PhaseStats {
  std::vector<double> residuals;  // radians, one per successful trial
  double std_deg = 0.0;
  double predicted_deg = 0.0;     // 180 / (M sqrt 3)
  std::size_t n_failed = 0;
};

/// Independent channel/noise/symbol seeds per trial; divergent trials are
/// excluded and counted.
PhaseStats phase_ensemble(const EqualizerConfig& base, std::size_t n_trials,
                          std::uint64_t seed);

/// Decision-style mean square symbol error, minimized over equalizer delay
/// and the M_grid phase ambiguity (the in-cell residual rotation is NOT
/// compensated; that is the quantity the cost's symmetry group leaves behind).
double symbol_mse(const std::vector<cplx>& y, const std::vector<cplx>& sent,
                  int max_delay, int m_grid);

}  // namespace ad
