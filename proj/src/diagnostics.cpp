#include "ad/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ad {

DiagnosticsRecord diagnostics_record(const HermitianMatrix& r) {
  const std::size_t m = r.dim();
  const double tr = r.trace_real();
  if (tr <= 0.0) throw std::invalid_argument("diagnostics_record: trace must be positive");
  const double fro = r.frobenius_norm();

  DiagnosticsRecord out;
  const double qbar = tr / static_cast<double>(m);
  double dev = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const cplx e = r(i, j) - (i == j ? cplx(qbar, 0.0) : cplx(0.0, 0.0));
      dev += std::norm(e);
    }
  }
  out.alpha = std::sqrt(dev) / fro;
  out.r_eff = (tr * tr) / (fro * fro);
  out.kappa = 1.0 + out.r_eff;

  const EigDecomposition d = hermitian_eig(r);
  out.psi = d.eigenvalues[0] / tr;
  double h = 0.0;
  for (double lam : d.eigenvalues) {
    if (lam <= 1e-14 * tr) continue;  // 0 log 0 = 0
    const double p = lam / tr;
    h -= p * std::log2(p);
  }
  out.h_struct = h;
  return out;
}

double delta_discrete(const Representation& rep, const HermitianMatrix& r) {
  if (rep.degree() != static_cast<int>(r.dim())) {
    throw std::invalid_argument("delta_discrete: dimension mismatch");
  }
  const double fro = r.frobenius_norm();
  if (fro <= 0.0) throw std::invalid_argument("delta_discrete: zero matrix");
  double worst = 0.0;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const ComplexMatrix pg = rep.matrix(g);
    worst = std::max(worst, commutator(pg, r.matrix()).frobenius_norm());
  }
  return worst / fro;
}

double delta_continuous(const ComplexMatrix& a, const HermitianMatrix& r) {
  if (a.rows() != a.cols() || a.rows() != r.dim()) {
    throw std::invalid_argument("delta_continuous: dimension mismatch");
  }
  const double anorm = a.frobenius_norm();
  const double rnorm = r.frobenius_norm();
  if (anorm <= 0.0 || rnorm <= 0.0) {
    throw std::invalid_argument("delta_continuous: zero matrix");
  }
  if ((a + a.adjoint()).frobenius_norm() > 1e-10 * anorm) {
    throw std::invalid_argument("delta_continuous: A is not skew-Hermitian");
  }
  return commutator(a, r.matrix()).frobenius_norm() / (anorm * rnorm);
}

namespace {

HermitianMatrix trace_normalized(const HermitianMatrix& r) {
  const double tr = r.trace_real();
  if (tr <= 0.0) throw std::runtime_error("trace normalization: nonpositive trace");
  return HermitianMatrix(r.matrix() * cplx(1.0 / tr, 0.0));
}

}  // namespace

double dcv(const Representation& rep, const SnapshotSet& snaps) {
  if (snaps.L < 2) {
    throw std::invalid_argument("cross-validation requires at least two snapshots");
  }
  std::vector<HermitianMatrix> estimates;
  estimates.reserve(snaps.L);
  for (std::size_t l = 0; l < snaps.L; ++l) {
    SnapshotSet one;
    one.M = snaps.M;
    one.L = 1;
    one.data = {snaps.data[l]};
    estimates.push_back(trace_normalized(group_avg_covariance(rep, one).R_hat));
  }
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < snaps.L; ++a) {
    for (std::size_t b = a + 1; b < snaps.L; ++b) {
      const double d = (estimates[a].matrix() - estimates[b].matrix()).frobenius_norm();
      acc += d * d;
      ++pairs;
    }
  }
  return acc / static_cast<double>(pairs);
}

std::vector<double> kappa_trajectory(const Representation& rep,
                                     const SnapshotSet& snaps, std::size_t lmax) {
  if (lmax < 2 || snaps.L < lmax) {
    throw std::invalid_argument("kappa_trajectory: need snaps.L >= Lmax >= 2");
  }
  std::vector<double> out;
  out.reserve(lmax);
  for (std::size_t l = 1; l <= lmax; ++l) {
    SnapshotSet head;
    head.M = snaps.M;
    head.L = l;
    head.data.assign(snaps.data.begin(), snaps.data.begin() + l);
    const HermitianMatrix r = group_avg_covariance(rep, head).R_hat;
    const double tr = r.trace_real();
    const double fro = r.frobenius_norm();
    out.push_back(1.0 + (tr * tr) / (fro * fro));
  }
  return out;
}

PowerLawFit power_law_fit(const std::vector<double>& snr_db,
                          const std::vector<double>& sigma) {
  if (snr_db.size() != sigma.size() || snr_db.size() < 4) {
    throw std::invalid_argument("power_law_fit: need >= 4 (SNR, sigma) pairs");
  }
  const std::size_t n = snr_db.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma[i] <= 0.0) throw std::invalid_argument("power_law_fit: sigma must be positive");
    lx[i] = std::log(std::pow(10.0, snr_db[i] / 20.0));
    ly[i] = std::log(sigma[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  PowerLawFit fit;
  fit.beta = -slope;
  fit.c = std::exp(my - slope * mx);
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ConjugateCheck conjugate_capacity_check(const HermitianMatrix& a,
                                        const HermitianMatrix& b,
                                        const std::vector<cplx>& x) {
  const std::size_t m = a.dim();
  if (b.dim() != m || x.size() != m) {
    throw std::invalid_argument("conjugate_capacity_check: dimension mismatch");
  }
  double xnorm = 0.0;
  for (const cplx& z : x) xnorm += std::norm(z);
  if (std::abs(std::sqrt(xnorm) - 1.0) > 1e-12) {
    throw std::invalid_argument("conjugate_capacity_check: x must be a unit vector");
  }

  auto variance = [&](const HermitianMatrix& h) {
    const std::vector<cplx> hx = mat_vec(h.matrix(), x);
    cplx mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mean += std::conj(x[i]) * hx[i];
      second += std::norm(hx[i]);
    }
    return second - std::norm(mean);  // <A^2> - <A>^2 for Hermitian A, unit x
  };

  // [A,B] = icI + C with c real and C the traceless remainder; the mean
  // commutator i(c + Im x^H C x) drives the Robertson bound.
  const ComplexMatrix k = commutator(a.matrix(), b.matrix());
  if ((k + k.adjoint()).frobenius_norm() > 1e-9 * (1.0 + k.frobenius_norm())) {
    throw std::runtime_error("conjugate_capacity_check: commutator not anti-Hermitian");
  }
  cplx mean_comm = 0.0;
  const std::vector<cplx> kx = mat_vec(k, x);
  for (std::size_t i = 0; i < m; ++i) mean_comm += std::conj(x[i]) * kx[i];

  ConjugateCheck out;
  const double var_a = variance(a);
  const double var_b = variance(b);
  const double inf = std::numeric_limits<double>::infinity();
  if (var_a <= 0.0 || var_b <= 0.0) {
    out.kappa_a = (var_a <= 0.0) ? inf : 1.0 / var_a;
    out.kappa_b = (var_b <= 0.0) ? inf : 1.0 / var_b;
    out.bound = inf;
    out.skipped = true;
    out.holds = true;
    return out;
  }
  out.kappa_a = 1.0 / var_a;
  out.kappa_b = 1.0 / var_b;
  const double denom = std::norm(mean_comm);
  out.bound = (denom > 0.0) ? 4.0 / denom : inf;
  out.holds = (out.bound == inf) || (out.kappa_a * out.kappa_b <= out.bound * (1.0 + 1e-9));
  return out;
}

}  // namespace ad
