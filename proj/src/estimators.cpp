#include "ad/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace ad {

CovEstimate group_avg_covariance(const Representation& rep, const SnapshotSet& snaps) {
  const std::size_t m = snaps.M;
  if (rep.degree() != static_cast<int>(m)) {
    throw std::invalid_argument("group_avg_covariance: dimension mismatch");
  }
  ComplexMatrix acc(m, m);
  for (const auto& x : snaps.data) {
    for (std::size_t g = 0; g < rep.size(); ++g) {
      const std::vector<cplx> y = rep.apply(g, x);
      for (std::size_t i = 0; i < m; ++i) {
        const cplx yi = y[i];
        for (std::size_t j = 0; j <= i; ++j) {
          acc(i, j) += yi * std::conj(y[j]);
        }
      }
    }
  }
  const double scale = 1.0 / (static_cast<double>(snaps.L) * static_cast<double>(rep.size()));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      acc(i, j) *= scale;
      acc(j, i) = std::conj(acc(i, j));
    }
  }
  CovEstimate out;
  out.R_hat = HermitianMatrix(acc);
  out.group_label = rep.group().label;
  out.L_used = snaps.L;
  out.d_eff_claimed = rep.size();
  out.fast_path = false;
  return out;
}

namespace {

// In-place per-axis unitary DFT of a row-major tensor with the given factors.
void tensor_dft(std::vector<cplx>& t, const std::vector<int>& factors, bool inverse) {
  const int k = static_cast<int>(factors.size());
  std::vector<int> stride(k, 1);
  for (int a = k - 2; a >= 0; --a) stride[a] = stride[a + 1] * factors[a + 1];
  const int total = static_cast<int>(t.size());

  for (int a = 0; a < k; ++a) {
    const int n = factors[a];
    if (n == 1) continue;
    const int s = stride[a];
    const int block = s * n;
    std::vector<cplx> line(n);
    for (int base = 0; base < total; base += block) {
      for (int off = 0; off < s; ++off) {
        for (int i = 0; i < n; ++i) line[i] = t[base + off + i * s];
        const std::vector<cplx> out = dft(line, inverse);
        for (int i = 0; i < n; ++i) t[base + off + i * s] = out[i];
      }
    }
  }
}

}  // namespace

std::vector<double> fast_path_spectrum(const std::vector<int>& factors,
                                       const SnapshotSet& snaps) {
  long long prod = 1;
  for (int f : factors) {
    if (f < 1) throw std::invalid_argument("fast_path: factors must be >= 1");
    prod *= f;
  }
  if (prod != static_cast<long long>(snaps.M)) {
    throw std::invalid_argument("fast_path: factors do not multiply to M");
  }
  std::vector<double> spectrum(snaps.M, 0.0);
  for (const auto& x : snaps.data) {
    std::vector<cplx> t = x;
    tensor_dft(t, factors, false);
    for (std::size_t i = 0; i < t.size(); ++i) spectrum[i] += std::norm(t[i]);
  }
  const double inv_l = 1.0 / static_cast<double>(snaps.L);
  for (double& s : spectrum) s *= inv_l;
  return spectrum;
}

CovEstimate fast_path_abelian(const std::vector<int>& factors,
                              const SnapshotSet& snaps) {
  const std::size_t m = snaps.M;
  const std::vector<double> spectrum = fast_path_spectrum(factors, snaps);

  // R_hat is G-circulant: entry (p,q) depends on the per-axis index
  // difference. Build the difference kernel via the inverse tensor DFT.
  std::vector<cplx> kernel(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) kernel[i] = spectrum[i];
  tensor_dft(kernel, factors, true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (cplx& z : kernel) z *= scale;

  const int k = static_cast<int>(factors.size());
  std::vector<int> stride(k, 1);
  for (int a = k - 2; a >= 0; --a) stride[a] = stride[a + 1] * factors[a + 1];

  ComplexMatrix r(m, m);
  std::vector<int> pi(k), qi(k);
  for (std::size_t p = 0; p < m; ++p) {
    int rem = static_cast<int>(p);
    for (int a = 0; a < k; ++a) {
      pi[a] = rem / stride[a];
      rem %= stride[a];
    }
    for (std::size_t q = 0; q < m; ++q) {
      rem = static_cast<int>(q);
      int diff = 0;
      for (int a = 0; a < k; ++a) {
        qi[a] = rem / stride[a];
        rem %= stride[a];
        diff += ((pi[a] - qi[a] + factors[a]) % factors[a]) * stride[a];
      }
      r(p, q) = kernel[diff];
    }
  }

  std::string label;
  for (int a = 0; a < k; ++a) {
    if (a) label += "x";
    label += "Z" + std::to_string(factors[a]);
  }
  CovEstimate out;
  out.R_hat = HermitianMatrix(r);
  out.group_label = label;
  out.L_used = snaps.L;
  out.d_eff_claimed = m;
  out.fast_path = true;
  return out;
}

HermitianMatrix reynolds_project(const Representation& rep, const HermitianMatrix& r) {
  const int m = rep.degree();
  if (static_cast<int>(r.dim()) != m) {
    throw std::invalid_argument("reynolds_project: dimension mismatch");
  }
  ComplexMatrix acc(m, m);
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const ComplexMatrix pg = rep.matrix(g);
    const ComplexMatrix conj = pg * r.matrix() * pg.adjoint();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) acc(i, j) += conj(i, j);
    }
  }
  const double scale = 1.0 / static_cast<double>(rep.size());
  return HermitianMatrix(acc * cplx(scale, 0.0));
}

GaatMoments gaat_moments(const Representation& rep, const std::vector<cplx>& x) {
  if (static_cast<int>(x.size()) != rep.degree()) {
    throw std::invalid_argument("gaat_moments: dimension mismatch");
  }
  const std::size_t n = rep.size();
  std::vector<cplx> probe(n);
  for (std::size_t g = 0; g < n; ++g) probe[g] = rep.apply(g, x)[0];

  GaatMoments out;
  cplx mean = 0.0;
  for (const cplx& z : probe) mean += z;
  mean /= static_cast<double>(n);
  out.mean = mean;

  double var = 0.0;
  for (const cplx& z : probe) var += std::norm(z - mean);
  var /= static_cast<double>(n);
  out.variance = var;

  if (var > 0.0) {
    const double sigma = std::sqrt(var);
    cplx m3 = 0.0;
    double m4 = 0.0;
    for (const cplx& z : probe) {
      const cplx d = z - mean;
      m3 += d * d * d;
      m4 += std::norm(d) * std::norm(d);
    }
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    out.skewness = m3 / (sigma * sigma * sigma);
    out.kurtosis = m4 / (var * var);
  }
  return out;
}

CovEstimate sample_covariance(const SnapshotSet& snaps) {
  const Representation triv(trivial_group(static_cast<int>(snaps.M)));
  CovEstimate out = group_avg_covariance(triv, snaps);
  out.d_eff_claimed = 1;
  return out;
}

}  // namespace ad
