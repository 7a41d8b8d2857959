#include "ad/experiments.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ad/estimators.hpp"
#include "ad/groups.hpp"
#include "ad/rng.hpp"
#include "ad/signals.hpp"

namespace ad {

namespace {

/// Gaussian circulant snapshot with per-bin variances lambda: independent
/// complex normals in the character domain, inverse DFT back.
std::vector<cplx> circulant_gaussian(const std::vector<double>& lambda,
                                     Rng& rng) {
  const std::size_t m = lambda.size();
  std::vector<cplx> hat(m);
  for (std::size_t k = 0; k < m; ++k) {
    hat[k] = std::sqrt(lambda[k]) * rng.cnormal();
  }
  std::vector<cplx> x(m, cplx(0.0, 0.0));
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t n = 0; n < m; ++n) {
    for (std::size_t k = 0; k < m; ++k) {
      const double th =
          2.0 * std::numbers::pi * static_cast<double>(n * k) / m;
      x[n] += hat[k] * cplx(std::cos(th), std::sin(th));
    }
    x[n] *= inv_sqrt_m;
  }
  return x;
}

/// Cyclic subgroup of Z_m generated by shift^(m/order).
FiniteGroup cyclic_subgroup(int m, std::size_t order) {
  if (order == 1) return trivial_group(m);
  std::vector<int> map(m);
  const int step = m / static_cast<int>(order);
  for (int k = 0; k < m; ++k) map[k] = (k + step) % m;
  return group_from_generators(m, {Permutation(map)}, kGroupCapDefault,
                               "shift^" + std::to_string(step));
}

double entrywise_mse(const Representation& rep, const CovModel& model,
                     const HermitianMatrix& r, std::size_t l,
                     std::size_t trials, std::uint64_t seed) {
  const int m = static_cast<int>(r.dim());
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const SnapshotSet snaps =
        sample_snapshots(model, l, kNoNoise, Rng::for_trial(seed, t).next_u64());
    const CovEstimate est = group_avg_covariance(rep, snaps);
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        total += std::norm(est.R_hat(p, q) - r(p, q));
      }
    }
  }
  return total / static_cast<double>(trials * m * m);
}

}  // namespace

ConverseResult converse_experiment(int m, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
  if (m < 2) throw std::invalid_argument("converse_experiment: m >= 2");
  if (threads == 0) threads = 1;
  ConverseResult out;
  out.lambda.resize(m);
  for (int k = 0; k < m; ++k) {
    out.lambda[k] = 0.5 + static_cast<double>(k);  // distinct by construction
  }
  const std::vector<int> factors{m};

  const std::size_t n_chunks = std::min<std::size_t>(threads, trials);
  std::vector<std::vector<double>> chunk_sum(n_chunks,
                                             std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> chunk_sum2 = chunk_sum;
  auto work = [&](std::size_t c) {
    const std::size_t lo = trials * c / n_chunks;
    const std::size_t hi = trials * (c + 1) / n_chunks;
    for (std::size_t t = lo; t < hi; ++t) {
      Rng rng = Rng::for_trial(seed, t);
      SnapshotSet snaps =
          make_snapshot_set({circulant_gaussian(out.lambda, rng)});
      const std::vector<double> lam_hat = fast_path_spectrum(factors, snaps);
      for (int k = 0; k < m; ++k) {
        chunk_sum[c][k] += lam_hat[k];
        chunk_sum2[c][k] += lam_hat[k] * lam_hat[k];
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t c = 1; c < n_chunks; ++c) pool.emplace_back(work, c);
  work(0);
  for (std::thread& th : pool) th.join();

  std::vector<double> sum(m, 0.0), sum2(m, 0.0);
  for (std::size_t c = 0; c < n_chunks; ++c) {  // merge in chunk order
    for (int k = 0; k < m; ++k) {
      sum[k] += chunk_sum[c][k];
      sum2[k] += chunk_sum2[c][k];
    }
  }
  out.var_ratio.resize(m);
  for (int k = 0; k < m; ++k) {
    const double mean = sum[k] / static_cast<double>(trials);
    const double var = sum2[k] / static_cast<double>(trials) - mean * mean;
    out.var_ratio[k] = var / (out.lambda[k] * out.lambda[k]);
  }
  return out;
}

std::vector<ContinuumPoint> gl_continuum_experiment(int m, std::size_t trials,
                                                    std::uint64_t seed) {
  CovModel model;
  model.kind = CovModel::Kind::white;
  model.M = m;
  const HermitianMatrix r = build_covariance(model);
  std::vector<ContinuumPoint> out;
  for (std::size_t order = 1; order <= static_cast<std::size_t>(m);
       order *= 2) {
    const std::size_t l = static_cast<std::size_t>(m) / order;
    const Representation rep{cyclic_subgroup(m, order)};
    ContinuumPoint pt;
    pt.group_order = order;
    pt.snapshots = l;
    pt.mse = entrywise_mse(rep, model, r, l, trials, seed + order);
    out.push_back(pt);
  }
  return out;
}

SupergroupResult supergroup_experiment(int m, std::size_t trials,
                                       std::uint64_t seed) {
  CovModel model;
  model.kind = CovModel::Kind::white;
  model.M = m;
  const HermitianMatrix r = build_covariance(model);
  SupergroupResult out;
  out.mse_full = entrywise_mse(Representation{cyclic_group(m)}, model, r, 1,
                               trials, seed);
  out.mse_sub =
      entrywise_mse(Representation{cyclic_subgroup(m, m / 2)}, model, r, 1,
                    trials, seed);
  out.ratio = out.mse_sub / out.mse_full;
  return out;
}

DichotomyResult scaling_dichotomy_experiment(std::size_t trials_per_point,
                                             std::uint64_t seed) {
  const int m = 8;
  const std::size_t l = 3;
  CovModel model;
  model.kind = CovModel::Kind::tones;
  model.M = m;
  model.freqs = {1.0, 3.0};
  model.amps = {1.0, 0.7};

  DichotomyResult out;
  for (int db = 0; db <= 40; db += 5) out.snr_db.push_back(db);

  const Representation matched{cyclic_group(m)};
  const Representation trivial{trivial_group(m)};
  auto scatter = [&](const Representation& rep, double snr,
                     std::uint64_t base) {
    std::vector<double> kappas, psis;
    for (std::size_t t = 0; t < trials_per_point; ++t) {
      const SnapshotSet snaps =
          sample_snapshots(model, l, snr, Rng::for_trial(base, t).next_u64());
      const DiagnosticsRecord rec =
          diagnostics_record(group_avg_covariance(rep, snaps).R_hat);
      kappas.push_back(rec.kappa);
      psis.push_back(rec.psi);
    }
    auto sd = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      return std::sqrt(var / static_cast<double>(v.size() - 1));
    };
    return std::pair<double, double>{sd(kappas), sd(psis)};
  };

  for (std::size_t i = 0; i < out.snr_db.size(); ++i) {
    const double snr = out.snr_db[i];
    const std::uint64_t base = seed + 1000 * i;
    const auto [ks_m, ps_m] = scatter(matched, snr, base);
    const auto [ks_t, ps_t] = scatter(trivial, snr, base);
    out.matched.sigma_kappa.push_back(ks_m);
    out.matched.sigma_psi.push_back(ps_m);
    out.mismatched.sigma_kappa.push_back(ks_t);
    out.mismatched.sigma_psi.push_back(ps_t);
  }
  out.matched.fit_kappa = power_law_fit(out.snr_db, out.matched.sigma_kappa);
  out.matched.fit_psi = power_law_fit(out.snr_db, out.matched.sigma_psi);
  out.mismatched.fit_kappa =
      power_law_fit(out.snr_db, out.mismatched.sigma_kappa);
  out.mismatched.fit_psi = power_law_fit(out.snr_db, out.mismatched.sigma_psi);
  return out;
}

}  // namespace ad
