#include "ad/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ad {

namespace {

ComplexMatrix perm_matrix(const Permutation& p) {
  const int m = p.degree();
  ComplexMatrix out(m, m);
  for (int k = 0; k < m; ++k) out(p(k), k) = 1.0;
  return out;
}

cplx frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx acc = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) acc += std::conj(da[i]) * db[i];
  return acc;
}

// Modified Gram-Schmidt frame used for independence tests and deflation.
struct OrthoFrame {
  std::vector<ComplexMatrix> q;

  // Residual of b against the frame.
  ComplexMatrix project_out(const ComplexMatrix& b) const {
    ComplexMatrix r = b;
    for (const ComplexMatrix& u : q) {
      const cplx c = frob_inner(u, r);
      const auto& du = u.data();
      auto& dr = r.data();
      for (std::size_t i = 0; i < dr.size(); ++i) dr[i] -= c * du[i];
    }
    return r;
  }

  // Extend the frame if b has an independent component; returns true if added.
  bool add(const ComplexMatrix& b, double drop_tol) {
    ComplexMatrix r = project_out(b);
    const double n = r.frobenius_norm();
    if (n <= drop_tol) return false;
    q.push_back(r * cplx(1.0 / n, 0.0));
    return true;
  }
};

constexpr double kDropTol = 1e-10;

}  // namespace

GeneratorBasis basis_from_permutations(int degree,
                                       const std::vector<Permutation>& perms,
                                       const std::vector<std::string>& labels) {
  if (degree < 2) throw std::invalid_argument("generator basis: degree must be >= 2");
  if (labels.size() != perms.size()) {
    throw std::invalid_argument("generator basis: label count mismatch");
  }
  GeneratorBasis out;
  out.degree = degree;
  OrthoFrame frame;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (perms[i].degree() != degree) {
      throw std::invalid_argument("generator basis: permutation degree mismatch");
    }
    const ComplexMatrix p = perm_matrix(perms[i]);
    const ComplexMatrix pt = p.transpose();
    const ComplexMatrix skew = (p - pt) * cplx(0.5, 0.0);
    // i(P + P^T)/2 with its identity component removed stays inside the
    // traceless part of u(M).
    ComplexMatrix sym = (p + pt) * cplx(0.0, 0.5);
    const cplx tr = sym.trace() * cplx(1.0 / degree, 0.0);
    for (int k = 0; k < degree; ++k) sym(k, k) -= tr;

    if (frame.add(skew, kDropTol)) {
      out.mats.push_back(skew);
      out.labels.push_back(labels[i] + ":skew");
    }
    if (frame.add(sym, kDropTol)) {
      out.mats.push_back(sym);
      out.labels.push_back(labels[i] + ":sym");
    }
  }
  if (out.mats.empty()) {
    throw std::invalid_argument("generator basis: empty after dropping");
  }
  return out;
}

GeneratorBasis natural_basis(int degree) {
  if (degree < 2) throw std::invalid_argument("natural_basis: degree must be >= 2");
  std::vector<int> shift(degree), shift2(degree), refl(degree), refl2(degree);
  for (int k = 0; k < degree; ++k) {
    shift[k] = (k + 1) % degree;
    shift2[k] = (k + 2) % degree;
    refl[k] = (degree - k) % degree;
    refl2[k] = (degree - 1 - k + degree) % degree;
  }
  return basis_from_permutations(
      degree,
      {Permutation(shift), Permutation(shift2), Permutation(refl),
       Permutation(refl2)},
      {"shift", "shift2", "reflect", "reflect2"});
}

GeneratorBasis transposition_basis(int degree) {
  if (degree < 2) {
    throw std::invalid_argument("transposition_basis: degree must be >= 2");
  }
  std::vector<Permutation> perms;
  std::vector<std::string> labels;
  for (int i = 0; i < degree; ++i) {
    for (int j = i + 1; j < degree; ++j) {
      std::vector<int> map(degree);
      for (int k = 0; k < degree; ++k) map[k] = k;
      std::swap(map[i], map[j]);
      perms.emplace_back(map);
      labels.push_back("t(" + std::to_string(i) + " " + std::to_string(j) + ")");
    }
  }
  return basis_from_permutations(degree, perms, labels);
}

MinDirection solve_min_direction(const HermitianMatrix& r,
                                 const GeneratorBasis& basis) {
  const std::size_t d = basis.mats.size();
  if (d == 0) throw std::invalid_argument("solve_min_direction: empty basis");
  if (static_cast<int>(r.dim()) != basis.degree) {
    throw std::invalid_argument("solve_min_direction: dimension mismatch");
  }
  // K_i = [R, B_i]; the quadratic form is the Gram matrix of the K_i, which
  // keeps it exactly Hermitian PSD in floating point.
  std::vector<ComplexMatrix> k(d);
  for (std::size_t i = 0; i < d; ++i) k[i] = commutator(r.matrix(), basis.mats[i]);

  ComplexMatrix mmat(d, d), gmat(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const cplx mij = frob_inner(k[i], k[j]);
      const cplx gij = frob_inner(basis.mats[i], basis.mats[j]);
      mmat(i, j) = mij;
      mmat(j, i) = std::conj(mij);
      gmat(i, j) = gij;
      gmat(j, i) = std::conj(gij);
    }
  }
  const std::vector<GevpPair> pairs =
      solve_gevp(HermitianMatrix(mmat), HermitianMatrix(gmat));

  // Degenerate bottom eigenspace (several directions commute equally well):
  // resolve deterministically by projecting the earliest basis coordinate
  // into the eigenspace under the G inner product, so the direction follows
  // the caller's basis order instead of eigensolver artifacts.
  const double lam0 = pairs.front().eigenvalue;
  // lambda / ||R||^2 is a squared commutation residual, so this threshold
  // treats directions as tied when their residuals agree to ~1e-6 relative.
  const double rnorm = r.frobenius_norm();
  const double scale = rnorm * rnorm;
  std::size_t deg_count = 1;
  while (deg_count < pairs.size() &&
         pairs[deg_count].eigenvalue - lam0 <= 1e-12 * scale) {
    ++deg_count;
  }
  std::vector<cplx> coeffs = pairs.front().coeffs;
  if (deg_count > 1) {
    for (std::size_t target = 0; target < d; ++target) {
      std::vector<cplx> proj(pairs.front().coeffs.size(), cplx(0.0, 0.0));
      double norm2 = 0.0;
      for (std::size_t s = 0; s < deg_count; ++s) {
        // <c_s, e_target>_G with G-orthonormal eigenvectors.
        cplx ip = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          ip += std::conj(pairs[s].coeffs[i]) * gmat(i, target);
        }
        norm2 += std::norm(ip);
        for (std::size_t i = 0; i < proj.size(); ++i) {
          proj[i] += ip * pairs[s].coeffs[i];
        }
      }
      if (norm2 > 1e-16) {
        coeffs = std::move(proj);
        break;
      }
    }
  }

  ComplexMatrix a(basis.degree, basis.degree);
  for (std::size_t i = 0; i < d; ++i) {
    const cplx c = coeffs[i];
    const auto& db = basis.mats[i].data();
    auto& da = a.data();
    for (std::size_t e = 0; e < da.size(); ++e) da[e] += c * db[e];
  }
  const double n = a.frobenius_norm();
  if (n <= 1e-14) throw std::runtime_error("solve_min_direction: null direction");
  MinDirection out;
  out.a_star = a * cplx(1.0 / n, 0.0);
  out.lambda_min = lam0;
  return out;
}

PermResidual perm_residual_eigdiff(const HermitianMatrix& r,
                                   const Permutation& sigma) {
  const int m = static_cast<int>(r.dim());
  if (sigma.degree() != m) {
    throw std::invalid_argument("perm_residual_eigdiff: degree mismatch");
  }
  const ComplexMatrix p = perm_matrix(sigma);
  const double exact_norm = commutator(p, r.matrix()).frobenius_norm();

  PermResidual out;
  out.exact = exact_norm * exact_norm;

  double offdiag = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j) offdiag = std::max(offdiag, std::abs(r(i, j)));
    }
  }
  std::vector<double> lam(m);
  if (offdiag <= 1e-12 * (1.0 + r.frobenius_norm())) {
    for (int i = 0; i < m; ++i) lam[i] = r(i, i).real();
  } else {
    lam = hermitian_eig(r).eigenvalues;
  }
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const double d = lam[k] - lam[sigma(k)];
    acc += d * d;
  }
  out.eigdiff = acc;
  return out;
}

namespace {

std::vector<std::vector<double>> rounding_profit(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  // Profit of sigma is <P_sigma, Re A*> = sum_k Re A*(sigma(k), k). A purely
  // imaginary direction therefore degrades to the all-zero tie-break, which is
  // the deterministic lowest-index rounding.
  std::vector<std::vector<double>> profit(m, std::vector<double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) profit[k][j] = a(j, k).real();
  }
  return profit;
}

}  // namespace

Permutation round_to_permutation(const ComplexMatrix& a_star, bool forbid_identity) {
  if (a_star.rows() != a_star.cols() || a_star.rows() == 0) {
    throw std::invalid_argument("round_to_permutation: not square");
  }
  return Permutation(assignment_max(rounding_profit(a_star), forbid_identity));
}

SeqGevpTrace sequential_gevp(const HermitianMatrix& r, const GeneratorBasis& basis,
                             double tau, std::size_t cap) {
  if (tau < 0.0) throw std::invalid_argument("sequential_gevp: tau must be >= 0");
  const int m = static_cast<int>(r.dim());
  if (basis.degree != m) {
    throw std::invalid_argument("sequential_gevp: dimension mismatch");
  }
  const double r_norm = r.frobenius_norm();

  SeqGevpTrace trace;
  trace.tau = tau;
  std::vector<Permutation> gens;
  FiniteGroup group = trivial_group(m);
  group.label = "seq-gevp";

  std::vector<ComplexMatrix> mats = basis.mats;
  std::vector<std::string> labels = basis.labels;

  // Deflate the working basis against span{P_g : g in G}. With G = {id} this
  // removes the i*I direction that commutes with everything.
  const auto deflate = [&]() {
    OrthoFrame frame;
    for (const Permutation& g : group.elements) frame.add(perm_matrix(g), kDropTol);
    std::vector<ComplexMatrix> kept;
    std::vector<std::string> kept_labels;
    for (std::size_t i = 0; i < mats.size(); ++i) {
      ComplexMatrix res = frame.project_out(mats[i]);
      if (res.frobenius_norm() > kDropTol) {
        kept.push_back(std::move(res));
        kept_labels.push_back(labels[i]);
      }
    }
    mats = std::move(kept);
    labels = std::move(kept_labels);
  };
  deflate();

  trace.termination = SeqGevpTermination::cap;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    if (mats.empty()) {
      trace.termination = SeqGevpTermination::basis_exhausted;
      break;
    }
    GeneratorBasis cur;
    cur.degree = m;
    cur.mats = mats;
    cur.labels = labels;
    const MinDirection md = solve_min_direction(r, cur);

    Permutation sigma;
    bool feasible = true;
    if (m <= 8) {
      // Exclude everything already in the group so an accepted permutation
      // always enlarges it.
      std::vector<std::vector<int>> excluded;
      excluded.reserve(group.size());
      for (const Permutation& g : group.elements) excluded.push_back(g.map());
      try {
        sigma = Permutation(
            assignment_max_excluding(rounding_profit(md.a_star), excluded));
      } catch (const std::runtime_error&) {
        feasible = false;
      }
    } else {
      sigma = round_to_permutation(md.a_star, true);
      if (group.contains(sigma)) feasible = false;
    }
    if (!feasible) {
      trace.termination = SeqGevpTermination::basis_exhausted;
      break;
    }

    SeqGevpIteration it;
    it.lambda_min = md.lambda_min;
    it.rounded_perm = sigma;
    it.residual =
        commutator(perm_matrix(sigma), r.matrix()).frobenius_norm() / r_norm;
    it.accepted = it.residual <= tau;
    trace.iterations.push_back(it);
    if (!it.accepted) {
      trace.termination = SeqGevpTermination::rejection;
      break;
    }

    gens.push_back(sigma);
    group = group_from_generators(m, gens, kGroupCapDefault, "seq-gevp");
    deflate();
  }

  trace.final_group = group;
  return trace;
}

MatchReport library_match_dcv(const SnapshotSet& snaps,
                              const std::vector<FiniteGroup>& library) {
  if (snaps.L < 2) {
    throw std::invalid_argument("library_match_dcv: need at least two snapshots");
  }
  if (library.empty()) {
    throw std::invalid_argument("library_match_dcv: empty library");
  }
  struct Entry {
    std::string label;
    double value;
    std::size_t order;
  };
  std::vector<Entry> entries;
  entries.reserve(library.size());
  for (const FiniteGroup& g : library) {
    if (g.degree != static_cast<int>(snaps.M)) {
      throw std::invalid_argument("library_match_dcv: group degree mismatch");
    }
    entries.push_back({g.label, dcv(Representation(g), snaps), g.size()});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.order > b.order;  // ties break toward the larger group
  });

  MatchReport report;
  for (const Entry& e : entries) report.ranked.emplace_back(e.label, e.value);
  report.alpha_gate = diagnostics_record(sample_covariance(snaps).R_hat).alpha;
  report.selected = entries.front().label;
  return report;
}

namespace {

std::vector<double> kaiser_window(int m, double beta) {
  std::vector<double> w(m, 1.0);
  if (m < 2) return w;
  const double denom = std::cyl_bessel_i(0.0, beta);
  for (int n = 0; n < m; ++n) {
    const double t = 2.0 * n / (m - 1.0) - 1.0;
    w[n] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - t * t))) /
           denom;
  }
  return w;
}

double psi_of(const Representation& rep, const SnapshotSet& snaps) {
  return diagnostics_record(group_avg_covariance(rep, snaps).R_hat).psi;
}

}  // namespace

SweepResult param_sweep(const SnapshotSet& snaps, const SweepSpec& spec) {
  SweepResult out;
  const int m = static_cast<int>(snaps.M);
  const bool want_psi = spec.criterion == SweepCriterion::psi;

  if (spec.kind == SweepSpec::Kind::group_library) {
    if (spec.groups.empty()) throw std::invalid_argument("param_sweep: empty library");
    if (want_psi) {
      const std::size_t first = spec.groups.front().size();
      for (const FiniteGroup& g : spec.groups) {
        if (g.size() != first) {
          throw std::invalid_argument(
              "param_sweep: psi across heterogeneous group orders is invalid "
              "(orbit-size bias); use the cross-validation criterion");
        }
      }
    }
    for (std::size_t i = 0; i < spec.groups.size(); ++i) {
      const Representation rep(spec.groups[i]);
      const double v = want_psi ? psi_of(rep, snaps) : dcv(rep, snaps);
      out.curve.emplace_back(static_cast<double>(i), v);
    }
  } else {
    if (spec.grid.empty()) throw std::invalid_argument("param_sweep: empty grid");
    for (double param : spec.grid) {
      double v = 0.0;
      if (spec.kind == SweepSpec::Kind::chirp_mu) {
        const Representation rep(cyclic_group(m), chirp_diag(m, param));
        v = want_psi ? psi_of(rep, snaps) : dcv(rep, snaps);
      } else {
        const std::vector<double> w = kaiser_window(m, param);
        SnapshotSet windowed = snaps;
        for (auto& x : windowed.data) {
          for (int n = 0; n < m; ++n) x[n] *= w[n];
        }
        const Representation rep(cyclic_group(m));
        v = want_psi ? psi_of(rep, windowed) : dcv(rep, windowed);
      }
      out.curve.emplace_back(param, v);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    const bool better = want_psi ? out.curve[i].second > out.curve[best].second
                                 : out.curve[i].second < out.curve[best].second;
    if (better) best = i;
  }
  out.best_param = out.curve[best].first;
  return out;
}

MatchReport pipeline(const SnapshotSet& snaps, const PipelineConfig& config) {
  const int m = static_cast<int>(snaps.M);
  const CovEstimate sc = sample_covariance(snaps);
  const DiagnosticsRecord diag = diagnostics_record(sc.R_hat);

  MatchReport report;
  report.alpha_gate = diag.alpha;
  std::string notes;

  std::vector<FiniteGroup> candidates = config.library;
  if (candidates.empty()) {
    candidates = enumerate_abelian_groups(m);
    candidates.push_back(trivial_group(m));
  }

  // Continuous candidate generation and sequential assembly.
  try {
    const SeqGevpTrace trace =
        sequential_gevp(sc.R_hat, natural_basis(m), config.tau, config.seq_cap);
    if (trace.final_group.size() > 1) {
      FiniteGroup assembled = trace.final_group;
      assembled.label = "assembled";
      bool dup = false;
      for (const FiniteGroup& g : candidates) {
        if (g.size() == assembled.size() && is_subgroup(assembled, g) &&
            is_subgroup(g, assembled)) {
          dup = true;
          break;
        }
      }
      if (!dup) candidates.push_back(assembled);
      notes += "sequential stage: assembled group of order " +
               std::to_string(assembled.size()) + "; ";
    } else {
      notes += "sequential stage: no generator accepted; ";
    }
  } catch (const std::exception& e) {
    notes += std::string("sequential stage skipped: ") + e.what() + "; ";
  }

  if (snaps.L >= 2) {
    try {
      const MatchReport ranked = library_match_dcv(snaps, candidates);
      report.ranked = ranked.ranked;
      report.selected = ranked.selected;
    } catch (const std::exception& e) {
      notes += std::string("cross-validation stage skipped: ") + e.what() + "; ";
    }
  } else {
    notes += "single snapshot: cross-validation skipped; ";
  }
  if (report.selected.empty()) report.selected = "trivial";

  if (diag.alpha < config.alpha_threshold) {
    report.selected = "trivial";
    notes += "alpha below gate: signal is white, no group helps; ";
  }

  const std::size_t lmax = std::min<std::size_t>(config.kappa_lmax, snaps.L);
  if (lmax >= 2) {
    const FiniteGroup* chosen = nullptr;
    for (const FiniteGroup& g : candidates) {
      if (g.label == report.selected) {
        chosen = &g;
        break;
      }
    }
    if (chosen == nullptr) {
      // The gate can select "trivial" even when it is absent from a custom
      // library; verify against the trivial group in that case.
      static thread_local FiniteGroup fallback;
      fallback = trivial_group(m);
      chosen = &fallback;
    }
    report.kappa_trajectory = kappa_trajectory(Representation(*chosen), snaps, lmax);
    const double k1 = report.kappa_trajectory[0];
    const double k2 = report.kappa_trajectory[1];
    const double rel = std::abs(k2 - k1) / k1;
    notes += (rel < config.kappa_rel_threshold)
                 ? "kappa trajectory: flat, structure captured"
                 : "kappa trajectory: rising, structure incomplete";
  } else {
    notes += "kappa trajectory skipped (needs two snapshots)";
  }

  report.notes = notes;
  return report;
}

}  // namespace ad
