#include "ad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ad {

namespace {

void check_finite(const std::vector<cplx>& v, const char* what) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("ComplexMatrix: entry count mismatch");
  }
  check_finite(data_, "ComplexMatrix");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("matrix add: shape mismatch");
  }
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] = data_[i] + other.data_[i];
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("matrix sub: shape mismatch");
  }
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] = data_[i] - other.data_[i];
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
  if (cols_ != other.rows_) {
    throw std::invalid_argument("matrix mul: shape mismatch");
  }
  ComplexMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out(i, j) += aik * other(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx scalar) const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scalar;
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = std::conj((*this)(i, j));
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = (*this)(i, j);
    }
  }
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  }
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cplx& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

std::vector<cplx> mat_vec(const ComplexMatrix& m, const std::vector<cplx>& x) {
  if (m.cols() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<cplx> y(m.rows(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
  if (!m.all_finite()) {
    throw std::invalid_argument("HermitianMatrix: non-finite entry");
  }
  const std::size_t n = m.rows();
  double asym = 0.0;
  double scale = 0.0;
  ComplexMatrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx s = 0.5 * (m(i, j) + std::conj(m(j, i)));
      sym(i, j) = s;
      asym += std::norm(m(i, j) - s);
      scale += std::norm(m(i, j));
    }
  }
  for (std::size_t i = 0; i < n; ++i) sym(i, i) = cplx(sym(i, i).real(), 0.0);
  if (scale > 0.0 && std::sqrt(asym) > 1e-12 * std::sqrt(scale)) {
    throw std::invalid_argument("HermitianMatrix: input not Hermitian to 1e-12");
  }
  mat_ = std::move(sym);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

double HermitianMatrix::trace_real() const { return mat_.trace().real(); }

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic Jacobi.

EigDecomposition hermitian_eig(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  if (n == 0) throw std::invalid_argument("hermitian_eig: empty matrix");

  ComplexMatrix a = h.matrix();
  ComplexMatrix u = ComplexMatrix::identity(n);
  const double norm = a.frobenius_norm();
  const double tol = 1e-13 * norm;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
    }
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > max_sweeps) {
      throw std::runtime_error("hermitian_eig: no convergence after 100 sweeps at dim " +
                               std::to_string(n));
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx b = a(p, q);
        const double babs = std::abs(b);
        if (babs < 1e-300) continue;
        const cplx phase = b / babs;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (app - aqq) / (2.0 * babs);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;        // J[p][q]
        const cplx spc = std::conj(sp);   // -J[q][p]

        // Rows p, q of J^H A.
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a(p, j);
          const cplx aqj = a(q, j);
          a(p, j) = c * apj - sp * aqj;
          a(q, j) = spc * apj + c * aqj;
        }
        // Columns p, q of (J^H A) J, and accumulate U <- U J.
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = c * aip - spc * aiq;
          a(i, q) = sp * aip + c * aiq;
          const cplx uip = u(i, p);
          const cplx uiq = u(i, q);
          u(i, p) = c * uip - spc * uiq;
          u(i, q) = sp * uip + c * uiq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
      }
    }
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(idx[k], idx[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = u(i, idx[k]);
  }

  // Deterministic phase: first component of magnitude > 1e-8 made real positive.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = out.eigenvectors(i, k);
      if (std::abs(v) > 1e-8) {
        const cplx rot = std::conj(v) / std::abs(v);
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) *= rot;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GEVP via whitening.

std::vector<GevpPair> solve_gevp(const HermitianMatrix& mmat,
                                 const HermitianMatrix& gmat) {
  const std::size_t d = mmat.dim();
  if (gmat.dim() != d) throw std::invalid_argument("solve_gevp: dim mismatch");

  const EigDecomposition eg = hermitian_eig(gmat);
  const double gmax = eg.eigenvalues.empty() ? 0.0 : eg.eigenvalues[0];
  if (gmax <= 0.0) throw std::runtime_error("solve_gevp: degenerate Gram");

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d; ++i) {
    if (eg.eigenvalues[i] > 1e-12 * gmax) keep.push_back(i);
  }
  if (keep.empty()) throw std::runtime_error("solve_gevp: degenerate Gram");
  const std::size_t r = keep.size();

  // W = U_r diag(1/sqrt(g)); reduced problem W^H M W.
  ComplexMatrix w(d, r);
  for (std::size_t j = 0; j < r; ++j) {
    const double inv = 1.0 / std::sqrt(eg.eigenvalues[keep[j]]);
    for (std::size_t i = 0; i < d; ++i) {
      w(i, j) = eg.eigenvectors(i, keep[j]) * inv;
    }
  }
  const ComplexMatrix reduced = w.adjoint() * mmat.matrix() * w;
  const EigDecomposition er = hermitian_eig(HermitianMatrix(reduced));

  std::vector<GevpPair> out;
  out.reserve(r);
  for (std::size_t k = r; k-- > 0;) {  // ascending
    GevpPair p;
    p.eigenvalue = er.eigenvalues[k];
    p.coeffs.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < r; ++j) acc += w(i, j) * er.eigenvectors(j, k);
      p.coeffs[i] = acc;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear assignment.

namespace {

// Hungarian algorithm with potentials (minimization), exact. cost is square.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, n), way(n + 1, n);
  for (int i = 0; i < n; ++i) {
    p[n] = i;
    int j0 = n;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = n;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  std::vector<int> sigma(n);
  for (int j = 0; j < n; ++j) sigma[p[j]] = j;
  return sigma;
}

double assignment_value(const std::vector<std::vector<double>>& profit,
                        const std::vector<int>& sigma) {
  double v = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) v += profit[k][sigma[k]];
  return v;
}

bool is_identity_map(const std::vector<int>& sigma) {
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] != static_cast<int>(k)) return false;
  }
  return true;
}

// Exhaustive search in lexicographic order: exact optimum with the
// lexicographically smallest optimal permutation. Used for small dims.
std::vector<int> assignment_brute(const std::vector<std::vector<double>>& profit,
                                  bool forbid_identity) {
  const int n = static_cast<int>(profit.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  double best_v = -std::numeric_limits<double>::infinity();
  do {
    if (forbid_identity && is_identity_map(perm)) continue;
    const double v = assignment_value(profit, perm);
    if (v > best_v) {
      best_v = v;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<int> assignment_max(const std::vector<std::vector<double>>& profit,
                                bool forbid_identity) {
  const std::size_t n = profit.size();
  if (n == 0) throw std::invalid_argument("assignment_max: empty matrix");
  for (const auto& row : profit) {
    if (row.size() != n) throw std::invalid_argument("assignment_max: not square");
    for (double x : row) {
      if (!std::isfinite(x)) throw std::invalid_argument("assignment_max: non-finite");
    }
  }
  if (forbid_identity && n == 1) {
    throw std::invalid_argument("assignment_max: no non-identity permutation at dim 1");
  }

  if (n <= 8) return assignment_brute(profit, forbid_identity);

  double maxabs = 0.0;
  for (const auto& row : profit) {
    for (double x : row) maxabs = std::max(maxabs, std::abs(x));
  }
  const double big = (maxabs + 1.0) * 1e9;

  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = -profit[i][j];
  }
  std::vector<int> sigma = hungarian_min(cost);
  if (!forbid_identity || !is_identity_map(sigma)) return sigma;

  // Identity won unconstrained: the best non-identity permutation has at
  // least one non-fixed point; force each position off-diagonal in turn.
  std::vector<int> best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    auto blocked = cost;
    blocked[k][k] += big;
    const std::vector<int> cand = hungarian_min(blocked);
    if (cand[k] == static_cast<int>(k)) continue;
    const double v = assignment_value(profit, cand);
    if (v > best_v) {
      best_v = v;
      best = cand;
    }
  }
  if (best.empty()) {
    throw std::runtime_error("assignment_max: no feasible non-identity permutation");
  }
  return best;
}

std::vector<int> assignment_max_excluding(
    const std::vector<std::vector<double>>& profit,
    const std::vector<std::vector<int>>& excluded) {
  const std::size_t n = profit.size();
  if (n == 0 || n > 8) {
    throw std::invalid_argument("assignment_max_excluding: dim must be 1..8");
  }
  for (const auto& row : profit) {
    if (row.size() != n) {
      throw std::invalid_argument("assignment_max_excluding: not square");
    }
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("assignment_max_excluding: non-finite");
      }
    }
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  double best_v = -std::numeric_limits<double>::infinity();
  do {
    bool skip = false;
    for (const auto& ex : excluded) {
      if (ex == perm) {
        skip = true;
        break;
      }
    }
    if (skip) continue;
    const double v = assignment_value(profit, perm);
    if (v > best_v) {
      best_v = v;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best.empty()) {
    throw std::runtime_error("assignment_max_excluding: all permutations excluded");
  }
  return best;
}

// ---------------------------------------------------------------------------
// Unitary DFT.

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place unnormalized radix-2 FFT; sign -1 forward, +1 inverse.
void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx x = a[i + j];
        const cplx y = a[i + j + len / 2] * w;
        a[i + j] = x + y;
        a[i + j + len / 2] = x - y;
        w *= wlen;
      }
    }
  }
}

// Unnormalized forward DFT of arbitrary length via Bluestein's chirp-z.
std::vector<cplx> bluestein_forward(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::size_t l = 1;
  while (l < 2 * n - 1) l <<= 1;

  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long long kk = (static_cast<long long>(k) * static_cast<long long>(k)) %
                         (2LL * static_cast<long long>(n));
    const double ang = -std::numbers::pi * static_cast<double>(kk) /
                       static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> a(l, cplx(0.0, 0.0)), b(l, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[l - k] = b[k];
  }
  fft_pow2(a, -1);
  fft_pow2(b, -1);
  for (std::size_t i = 0; i < l; ++i) a[i] *= b[i];
  fft_pow2(a, +1);
  const double inv_l = 1.0 / static_cast<double>(l);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * inv_l * chirp[k];
  return out;
}

}  // namespace

std::vector<cplx> dft(const std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("dft: empty input");
  check_finite(x, "dft");
  if (n == 1) return x;

  std::vector<cplx> work = x;
  if (inverse) {
    for (cplx& z : work) z = std::conj(z);
  }
  std::vector<cplx> out;
  if (is_pow2(n)) {
    fft_pow2(work, -1);
    out = std::move(work);
  } else {
    out = bluestein_forward(work);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  if (inverse) {
    for (cplx& z : out) z = std::conj(z) * scale;
  } else {
    for (cplx& z : out) z *= scale;
  }
  return out;
}

}  // namespace ad
