#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace ad {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. Constructors reject non-finite
/// entries so numerical failures surface at the point of creation.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  ComplexMatrix operator+(const ComplexMatrix& other) const;
  ComplexMatrix operator-(const ComplexMatrix& other) const;
  ComplexMatrix operator*(const ComplexMatrix& other) const;
  ComplexMatrix operator*(cplx scalar) const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  cplx trace() const;
  double frobenius_norm() const;

  /// Largest |entry| difference against another matrix of the same shape.
  double max_abs_diff(const ComplexMatrix& other) const;

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> mat_vec(const ComplexMatrix& m, const std::vector<cplx>& x);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian matrix. The constructor symmetrizes via (X + X^H)/2 and rejects
/// inputs whose asymmetry exceeds 1e-12 relative.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(const std::vector<double>& d);

  std::size_t dim() const { return mat_.rows(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
  const ComplexMatrix& matrix() const { return mat_; }

  double trace_real() const;
  double frobenius_norm() const { return mat_.frobenius_norm(); }

 private:
  ComplexMatrix mat_;
};

struct EigDecomposition {
  std::vector<double> eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalue k
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Deterministic: fixed
/// sweep order, eigenvalues sorted descending, and each eigenvector's first
/// component of magnitude > 1e-8 is rotated to be real positive.
EigDecomposition hermitian_eig(const HermitianMatrix& h);

struct GevpPair {
  double eigenvalue;
  std::vector<cplx> coeffs;
};

/// Generalized eigenvalue problem M c = lambda G c for Hermitian M and PSD G.
/// G is eigendecomposed, directions below 1e-12 relative are truncated, the
/// problem is whitened and solved as an ordinary Hermitian eigenproblem.
/// Pairs return sorted ascending. Throws "degenerate Gram" when G is null.
std::vector<GevpPair> solve_gevp(const HermitianMatrix& mmat,
                                 const HermitianMatrix& gmat);

/// Exact linear assignment: permutation sigma maximizing
/// sum_k profit[k][sigma(k)]. With forbid_identity, the maximum is taken over
/// non-identity permutations only. Ties resolve to the lexicographically
/// smallest optimal permutation for dims <= 8.
std::vector<int> assignment_max(const std::vector<std::vector<double>>& profit,
                                bool forbid_identity);

/// assignment_max with an explicit list of excluded permutations (given as
/// image maps). Exhaustive, so dims are limited to 8; larger problems should
/// use assignment_max and filter the result.
std::vector<int> assignment_max_excluding(
    const std::vector<std::vector<double>>& profit,
    const std::vector<std::vector<int>>& excluded);

/// Unitary DFT (1/sqrt(M) both directions). Radix-2 for power-of-two lengths,
/// Bluestein chirp-z otherwise.
std::vector<cplx> dft(const std::vector<cplx>& x, bool inverse);

}  // namespace ad
