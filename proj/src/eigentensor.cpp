#include "ad/eigentensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ad/rng.hpp"

namespace ad {

FiniteGroup symmetric_group(int k) {
  if (k < 1 || static_cast<std::size_t>(k) > kSymmetricClosureCap) {
    throw std::invalid_argument("symmetric_group: degree must be in [1, " +
                                std::to_string(kSymmetricClosureCap) + "]");
  }
  if (k == 1) return trivial_group(1);
  std::vector<int> swap01(k), cycle(k);
  for (int i = 0; i < k; ++i) {
    swap01[i] = i;
    cycle[i] = (i + 1) % k;
  }
  std::swap(swap01[0], swap01[1]);
  return group_from_generators(
      k, {Permutation(swap01), Permutation(cycle)}, 800,
      "S" + std::to_string(k));
}

Level2Result level2_estimate(const Level1Profile& profile,
                             const FiniteGroup& g2) {
  const std::size_t k = profile.k();
  if (k == 0) throw std::invalid_argument("level2_estimate: empty profile");
  if (static_cast<std::size_t>(g2.degree) != k) {
    throw std::invalid_argument(
        "level2_estimate: group degree " + std::to_string(g2.degree) +
        " does not match profile length " + std::to_string(k));
  }
  ComplexMatrix acc(k, k);
  for (const Permutation& s : g2.elements) {
    // (P_s psi)_j = psi_{s^{-1}(j)}; accumulate the outer product directly
    // via psi_{s^{-1}(p)} psi_{s^{-1}(q)}.
    const Permutation inv = s.inverse();
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q) {
        acc(p, q) += profile.psi_vec[inv(static_cast<int>(p))] *
                     profile.psi_vec[inv(static_cast<int>(q))];
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(g2.size());
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t q = 0; q < k; ++q) acc(p, q) *= scale;
  }
  Level2Result out;
  out.r2 = HermitianMatrix(acc);
  double trace = 0.0;
  for (std::size_t p = 0; p < k; ++p) trace += out.r2(p, p).real();
  const EigDecomposition eig = hermitian_eig(out.r2);
  out.psi2 = eig.eigenvalues.front() / trace;
  return out;
}

TwoClassSample two_class_profiles(std::size_t per_class, std::size_t k,
                                  double jitter_sigma, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("two_class_profiles: need k >= 2");
  TwoClassSample out;
  const double base = 0.8;
  const double slope = 0.5 / static_cast<double>(k - 1);
  for (std::size_t i = 0; i < per_class; ++i) {
    Rng rng_f = Rng::for_trial(seed, 2 * i);
    Rng rng_r = Rng::for_trial(seed, 2 * i + 1);
    Level1Profile flat, ramped;
    for (std::size_t j = 0; j < k; ++j) {
      const double f = base + jitter_sigma * rng_f.normal();
      const double r = base - slope * static_cast<double>(j) +
                       jitter_sigma * rng_r.normal();
      flat.psi_vec.push_back(std::clamp(f, 1e-6, 1.0));
      ramped.psi_vec.push_back(std::clamp(r, 1e-6, 1.0));
    }
    out.flat.push_back(std::move(flat));
    out.ramped.push_back(std::move(ramped));
  }
  return out;
}

SeparationReport two_class_separation(const TwoClassSample& sample) {
  if (sample.flat.empty() || sample.ramped.empty()) {
    throw std::invalid_argument("two_class_separation: empty class");
  }
  const FiniteGroup sym =
      symmetric_group(static_cast<int>(sample.flat.front().k()));
  auto collect = [&](const std::vector<Level1Profile>& cls) {
    std::vector<double> psi2;
    for (const Level1Profile& p : cls) {
      psi2.push_back(level2_estimate(p, sym).psi2);
    }
    return psi2;
  };
  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::pair<double, double>{mean, var};
  };
  const std::vector<double> a = collect(sample.flat);
  const std::vector<double> b = collect(sample.ramped);
  const auto [ma, va] = stats(a);
  const auto [mb, vb] = stats(b);
  SeparationReport rep;
  rep.mean_flat = ma;
  rep.mean_ramped = mb;
  rep.pooled_sigma = std::sqrt(0.5 * (va + vb));
  rep.separation =
      rep.pooled_sigma > 0.0 ? std::abs(ma - mb) / rep.pooled_sigma : 0.0;
  return rep;
}

}  // namespace ad
