#include "ad/equalize.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ad/rng.hpp"

namespace ad {

int grid_order(Constellation c) {
  switch (c) {
    case Constellation::bpsk:
      return 2;
    case Constellation::qpsk:
      return 4;
    case Constellation::mpsk8:
      return 8;
    case Constellation::qam16:
      return 4;
  }
  throw std::invalid_argument("grid_order: unknown constellation");
}

CostConstants cost_constants(Constellation c) {
  const std::vector<cplx> pts = constellation_points(c);
  CostConstants k;
  k.m_grid = grid_order(c);
  double e2 = 0.0, e4 = 0.0, er2 = 0.0, er4 = 0.0;
  cplx em = 0.0;
  for (const cplx& s : pts) {
    const double a2 = std::norm(s);
    e2 += a2;
    e4 += a2 * a2;
    er2 += s.real() * s.real();
    er4 += s.real() * s.real() * s.real() * s.real();
    em += std::pow(s, k.m_grid);
  }
  const double n = static_cast<double>(pts.size());
  k.r2 = e4 / e2;
  k.r2_axis = er4 / er2;
  k.c_m = em / n;
  return k;
}

CostSample cost_and_gradient(EqCost cost, cplx y, const CostConstants& k) {
  CostSample out;
  switch (cost) {
    case EqCost::cma: {
      const double e = std::norm(y) - k.r2;
      out.j = e * e;
      out.grad = 2.0 * e * y;
      break;
    }
    case EqCost::mma: {
      const double er = y.real() * y.real() - k.r2_axis;
      const double ei = y.imag() * y.imag() - k.r2_axis;
      out.j = er * er + ei * ei;
      out.grad = cplx(2.0 * er * y.real(), 2.0 * ei * y.imag());
      break;
    }
    case EqCost::ad_zm: {
      const int m = k.m_grid;
      const cplx e = std::pow(y, m) - k.c_m;
      out.j = std::norm(e);
      out.grad = static_cast<double>(m) * std::pow(std::conj(y), m - 1) * e;
      break;
    }
  }
  return out;
}

EqualizerResult run_equalizer(const EqualizerConfig& cfg) {
  if (cfg.step <= 0.0) throw std::invalid_argument("run_equalizer: step must be > 0");
  if (cfg.n_taps < 1 || cfg.n_taps % 2 == 0) {
    throw std::invalid_argument("run_equalizer: n_taps must be odd");
  }
  if (cfg.channel.taps.empty()) {
    throw std::invalid_argument("run_equalizer: channel has no taps");
  }
  const CostConstants k = cost_constants(cfg.constellation);

  const std::vector<cplx> s =
      symbol_source(cfg.constellation, cfg.n_symbols, cfg.seed);
  const std::vector<cplx> x =
      channel_apply(cfg.channel, s, cfg.snr_db, cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<cplx> w(cfg.n_taps, cplx(0.0, 0.0));
  w[cfg.n_taps / 2] = 1.0;

  std::vector<cplx> y(cfg.n_symbols);
  std::vector<double> j(cfg.n_symbols);
  for (std::size_t n = 0; n < cfg.n_symbols; ++n) {
    cplx yn = 0.0;
    for (int t = 0; t < cfg.n_taps; ++t) {
      if (static_cast<std::size_t>(t) > n) break;
      yn += w[t] * x[n - t];
    }
    y[n] = yn;
    const CostSample cs = cost_and_gradient(cfg.cost, yn, k);
    j[n] = cs.j;
    for (int t = 0; t < cfg.n_taps; ++t) {
      if (static_cast<std::size_t>(t) > n) break;
      w[t] -= cfg.step * cs.grad * std::conj(x[n - t]);
    }
    double wnorm2 = 0.0;
    for (const cplx& c : w) wnorm2 += std::norm(c);
    if (wnorm2 > 1e12) {
      throw std::runtime_error("run_equalizer: divergence at step size " +
                               std::to_string(cfg.step));
    }
  }

  const std::size_t start = cfg.n_symbols - cfg.n_symbols / 4;
  EqualizerResult out;
  out.taps = std::move(w);
  out.outputs.assign(y.begin() + start, y.end());
  out.sent.assign(s.begin() + start, s.end());
  double acc = 0.0;
  for (std::size_t n = start; n < cfg.n_symbols; ++n) acc += j[n];
  out.converged_cost = acc / static_cast<double>(cfg.n_symbols - start);
  return out;
}

double residual_phase(const std::vector<cplx>& y, int m_grid,
                      Constellation constellation) {
  if (y.empty()) throw std::invalid_argument("residual_phase: empty outputs");
  const CostConstants k = cost_constants(constellation);
  cplx acc = 0.0;
  for (const cplx& v : y) acc += std::pow(v, m_grid);
  if (std::abs(k.c_m) > 1e-12) acc *= std::conj(k.c_m);
  if (std::abs(acc) == 0.0) {
    throw std::invalid_argument("residual_phase: zero power moment");
  }
  double phi = std::arg(acc) / static_cast<double>(m_grid);
  const double cell = std::numbers::pi / static_cast<double>(m_grid);
  while (phi <= -cell) phi += 2.0 * cell;
  while (phi > cell) phi -= 2.0 * cell;
  return phi;
}

PhaseStats phase_ensemble(const EqualizerConfig& base, std::size_t n_trials,
                          std::uint64_t seed) {
  if (n_trials < 50) {
    throw std::invalid_argument("phase_ensemble: need at least 50 trials");
  }
  PhaseStats stats;
  const int m = grid_order(base.constellation);
  stats.predicted_deg = 180.0 / (m * std::sqrt(3.0));
  const int n_taps_ch = static_cast<int>(base.channel.taps.size());
  for (std::size_t t = 0; t < n_trials; ++t) {
    EqualizerConfig cfg = base;
    cfg.seed = Rng::for_trial(seed, t).next_u64();
    cfg.channel =
        rayleigh_channel(n_taps_ch, base.channel.decay_db_per_tap, cfg.seed + 1);
    try {
      const EqualizerResult res = run_equalizer(cfg);
      stats.residuals.push_back(
          residual_phase(res.outputs, m, base.constellation));
    } catch (const std::exception&) {
      ++stats.n_failed;
    }
  }
  if (stats.residuals.size() >= 2) {
    double mean = 0.0;
    for (double r : stats.residuals) mean += r;
    mean /= static_cast<double>(stats.residuals.size());
    double var = 0.0;
    for (double r : stats.residuals) var += (r - mean) * (r - mean);
    var /= static_cast<double>(stats.residuals.size() - 1);
    stats.std_deg = std::sqrt(var) * 180.0 / std::numbers::pi;
  }
  return stats;
}

double symbol_mse(const std::vector<cplx>& y, const std::vector<cplx>& sent,
                  int max_delay, int m_grid) {
  if (y.size() != sent.size() || y.empty()) {
    throw std::invalid_argument("symbol_mse: length mismatch");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int d = 0; d < max_delay && static_cast<std::size_t>(d) < y.size(); ++d) {
    for (int r = 0; r < m_grid; ++r) {
      const double th = 2.0 * std::numbers::pi * r / m_grid;
      const cplx rot(std::cos(th), -std::sin(th));
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t n = d; n < y.size(); ++n) {
        acc += std::norm(y[n] * rot - sent[n - d]);
        ++count;
      }
      best = std::min(best, acc / static_cast<double>(count));
    }
  }
  return best;
}

}  // namespace ad
