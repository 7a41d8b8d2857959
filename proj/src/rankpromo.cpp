#include "ad/rankpromo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "ad/diagnostics.hpp"
#include "ad/estimators.hpp"
#include "ad/rng.hpp"

namespace ad {

namespace {

/// All partitions of m as descending part lists, in lexicographic order.
void partitions_desc(int m, int max_part, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (m == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(m, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_desc(m - p, p, cur, out);
    cur.pop_back();
  }
}

/// Canonical representative of a cycle type: cycles laid out on consecutive
/// indices, largest cycle first.
Permutation type_representative(int degree, const std::vector<int>& parts) {
  std::vector<int> map(degree);
  int base = 0;
  for (int len : parts) {
    for (int j = 0; j < len; ++j) map[base + j] = base + (j + 1) % len;
    base += len;
  }
  return Permutation(map);
}

/// Lexicographically smallest element of the left coset sigma*G, used as the
/// coset's canonical key.
std::vector<int> coset_key(const Permutation& sigma, const FiniteGroup& g) {
  std::vector<int> best;
  for (const Permutation& h : g.elements) {
    std::vector<int> cand = sigma.compose(h).map();
    if (best.empty() || cand < best) best = std::move(cand);
  }
  return best;
}

double quarter_circle(double u) { return 4.0 * std::sqrt(1.0 - u * u); }

}  // namespace

StratifiedStream stratify(const std::vector<cplx>& stream, std::size_t m) {
  if (m == 0) throw std::invalid_argument("stratify: block length must be positive");
  if (stream.size() % m != 0) {
    const std::size_t keep = (stream.size() / m) * m;
    throw std::invalid_argument(
        "stratify: length " + std::to_string(stream.size()) +
        " is not divisible by " + std::to_string(m) + "; truncate to " +
        std::to_string(keep) + " samples first");
  }
  StratifiedStream out;
  out.m = m;
  out.l = stream.size() / m;
  out.source_len = stream.size();
  out.blocks.reserve(out.l);
  for (std::size_t b = 0; b < out.l; ++b) {
    out.blocks.emplace_back(stream.begin() + b * m, stream.begin() + (b + 1) * m);
  }
  return out;
}

PaseSelection pase_select(int level, const FiniteGroup& g, std::size_t n,
                          std::uint64_t seed) {
  PaseSelection out;
  out.level = level;
  switch (level) {
    case 1: {
      if (n > g.size()) {
        throw std::invalid_argument("pase_select: level 1 needs n <= |G|");
      }
      Rng rng(seed);
      std::set<Permutation> chosen;
      std::size_t guard = 0;
      while (chosen.size() < n) {
        if (++guard > 64 * g.size() + 64) {
          throw std::invalid_argument(
              "pase_select: level 1 could not fill n inverse-closed elements");
        }
        const Permutation& s =
            g.elements[static_cast<std::size_t>(rng.uniform_int(
                static_cast<int>(g.size())))];
        if (chosen.count(s)) continue;
        const Permutation inv = s.inverse();
        if (inv == s) {
          chosen.insert(s);  // involutions are their own antithetic partner
        } else if (chosen.size() + 2 <= n) {
          chosen.insert(s);
          chosen.insert(inv);
        }
      }
      out.elements.assign(chosen.begin(), chosen.end());
      out.closed_under_inverse = true;
      break;
    }
    case 2: {
      std::vector<std::vector<int>> types;
      std::vector<int> cur;
      partitions_desc(g.degree, g.degree, cur, types);
      // Identity type first: 1^M, then 2*1^(M-2), and so on upward.
      std::reverse(types.begin(), types.end());
      std::vector<Permutation> elems;
      for (const auto& t : types) {
        if (elems.size() >= n) break;
        const Permutation rep = type_representative(g.degree, t);
        elems.push_back(rep);
        const Permutation inv = rep.inverse();
        if (!(inv == rep) && elems.size() < n) elems.push_back(inv);
      }
      if (elems.size() < n) {
        throw std::invalid_argument(
            "pase_select: level 2 exhausted the cycle types of degree " +
            std::to_string(g.degree) + " before reaching n");
      }
      out.elements = std::move(elems);
      out.closed_under_inverse = true;
      break;
    }
    case 3: {
      if (g.degree > 8) {
        throw std::invalid_argument(
            "pase_select: level 3 coset enumeration capped at degree 8");
      }
      // Breadth-first walk of S_M from the identity along adjacent
      // transpositions; the first visit to each left coset of G yields its
      // representative.
      std::vector<Permutation> gens;
      for (int k = 0; k + 1 < g.degree; ++k) {
        std::vector<int> map(g.degree);
        for (int j = 0; j < g.degree; ++j) map[j] = j;
        std::swap(map[k], map[k + 1]);
        gens.emplace_back(map);
      }
      std::set<std::vector<int>> visited;
      std::set<std::vector<int>> cosets;
      std::deque<Permutation> queue;
      const Permutation id = Permutation::identity(g.degree);
      queue.push_back(id);
      visited.insert(id.map());
      while (!queue.empty() && out.elements.size() < n) {
        const Permutation p = queue.front();
        queue.pop_front();
        if (cosets.insert(coset_key(p, g)).second) out.elements.push_back(p);
        for (const Permutation& t : gens) {
          Permutation q = t.compose(p);
          if (visited.insert(q.map()).second) queue.push_back(std::move(q));
        }
      }
      if (out.elements.size() < n) {
        throw std::invalid_argument(
            "pase_select: level 3 needs n <= [S_M : G]");
      }
      out.closed_under_inverse = false;
      break;
    }
    default:
      throw std::invalid_argument("pase_select: level must be 1, 2, or 3");
  }
  return out;
}

McPiResult mc_pi(McPiMode mode, std::size_t m_strata, std::size_t n_total,
                 std::uint64_t seed) {
  if (n_total == 0) throw std::invalid_argument("mc_pi: n_total must be positive");
  McPiResult out;
  out.n_total = n_total;
  Rng rng(seed);
  double acc = 0.0;
  if (mode == McPiMode::plain) {
    for (std::size_t i = 0; i < n_total; ++i) acc += quarter_circle(rng.uniform());
    out.rounds = n_total;
  } else {
    if (m_strata == 0 || n_total % m_strata != 0) {
      throw std::invalid_argument(
          "mc_pi: stratified needs n_total divisible by the stratum count");
    }
    out.rounds = n_total / m_strata;
    const double inv_m = 1.0 / static_cast<double>(m_strata);
    for (std::size_t r = 0; r < out.rounds; ++r) {
      for (std::size_t k = 0; k < m_strata; ++k) {
        const double u = (static_cast<double>(k) + rng.uniform()) * inv_m;
        acc += quarter_circle(u);
      }
    }
  }
  out.estimate = acc / static_cast<double>(n_total);
  out.abs_error = std::abs(out.estimate - std::numbers::pi);
  return out;
}

namespace {

/// Mean squared Frobenius error of the orbit-subset covariance average.
double subset_mse(const Representation& rep, const HermitianMatrix& r_bar,
                  const std::vector<std::vector<cplx>>& draws,
                  const std::vector<std::size_t>& subset) {
  const int m = rep.degree();
  double total = 0.0;
  for (const std::vector<cplx>& x : draws) {
    ComplexMatrix acc(m, m);
    for (std::size_t s : subset) {
      const std::vector<cplx> y = rep.apply(s, x);
      for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) acc(p, q) += y[p] * std::conj(y[q]);
      }
    }
    const double scale = 1.0 / static_cast<double>(subset.size());
    double err = 0.0;
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        err += std::norm(acc(p, q) * scale - r_bar(p, q));
      }
    }
    total += err;
  }
  return total / static_cast<double>(draws.size());
}

std::vector<std::vector<cplx>> draw_snapshots(const CovModel& model,
                                              std::size_t count,
                                              std::uint64_t seed) {
  std::vector<std::vector<cplx>> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    out.push_back(sample_snapshots(model, 1, kNoNoise,
                                   Rng::for_trial(seed, t).next_u64())
                      .data[0]);
  }
  return out;
}

}  // namespace

std::vector<CodingRateRow> coding_rate_experiment(
    const std::vector<CovModel>& models, const std::vector<std::string>& names,
    const FiniteGroup& g, std::uint64_t seed, CodingRateConfig cfg) {
  if (models.size() != names.size()) {
    throw std::invalid_argument("coding_rate_experiment: one name per model");
  }
  const Representation rep{g};
  const std::size_t order = g.size();

  std::vector<CodingRateRow> rows;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const CovModel& model = models[mi];
    const HermitianMatrix r_pop = build_covariance(model);
    const HermitianMatrix r_bar = reynolds_project(rep, r_pop);
    const DiagnosticsRecord diag = diagnostics_record(r_pop);
    const int m = static_cast<int>(r_pop.dim());

    // Antithetic greedy traversal: identity first, then at each step the
    // element whose inclusion minimizes the pilot-sample MSE, immediately
    // followed by its inverse so every completed pair is inverse-closed.
    // Pilot draws are separate from the evaluation draws so the ordering is
    // not fit to the data it is scored on.
    const std::vector<std::vector<cplx>> pilot = draw_snapshots(
        model, std::max<std::size_t>(cfg.trials / 2, 50), seed ^ 0x70696c6fULL);
    std::vector<std::size_t> ord{0};
    std::vector<bool> used(order, false);
    used[0] = true;
    while (ord.size() < order) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_i = order;
      for (std::size_t i = 0; i < order; ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> cand = ord;
        cand.push_back(i);
        const double v = subset_mse(rep, r_bar, pilot, cand);
        if (v < best) {
          best = v;
          best_i = i;
        }
      }
      ord.push_back(best_i);
      used[best_i] = true;
      const std::size_t inv = *g.index_of(g.elements[best_i].inverse());
      if (!used[inv]) {
        ord.push_back(inv);
        used[inv] = true;
      }
    }

    const std::vector<std::vector<cplx>> eval =
        draw_snapshots(model, cfg.trials, Rng::for_trial(seed, mi).next_u64());
    std::vector<double> mse(order, 0.0);
    for (const std::vector<cplx>& x : eval) {
      // Common random numbers: orbit terms accumulate incrementally so every
      // prefix size shares the same draws.
      ComplexMatrix acc(m, m);
      for (std::size_t n = 0; n < order; ++n) {
        const std::vector<cplx> y = rep.apply(ord[n], x);
        for (int p = 0; p < m; ++p) {
          for (int q = 0; q < m; ++q) acc(p, q) += y[p] * std::conj(y[q]);
        }
        const double scale = 1.0 / static_cast<double>(n + 1);
        double err = 0.0;
        for (int p = 0; p < m; ++p) {
          for (int q = 0; q < m; ++q) {
            err += std::norm(acc(p, q) * scale - r_bar(p, q));
          }
        }
        mse[n] += err;
      }
    }
    for (double& v : mse) v /= static_cast<double>(eval.size());

    const double floor = mse.back();
    std::size_t n_star = order;
    for (std::size_t n = 0; n < order; ++n) {
      if (mse[n] <= (1.0 + cfg.floor_tolerance) * floor + 1e-12 * mse[0]) {
        n_star = n + 1;
        break;
      }
    }

    CodingRateRow row;
    row.model = names[mi];
    row.h_struct = diag.h_struct;
    row.n_star = n_star;
    row.ratio = static_cast<double>(n_star) / std::exp2(diag.h_struct);
    row.diffuse = diag.h_struct >= 0.5 * std::log2(static_cast<double>(m));
    row.mse_curve = std::move(mse);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ad
