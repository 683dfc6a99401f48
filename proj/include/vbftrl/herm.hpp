#pragma once

// Complex Hermitian linear algebra: Hermitian and density matrix value types,
// column-major vectorization, Kronecker products, Hilbert-Schmidt geometry and
// an orthonormal real coordinate chart (generalized Gell-Mann basis).

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace vbftrl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultTolPsd = 1e-9;
inline constexpr double kDefaultTolTrace = 1e-9;

/// d x d complex Hermitian matrix. Construction replaces M by (M + M^*)/2, so
/// entries(i, j) == conj(entries(j, i)) holds exactly afterwards.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(int d);
  static HermitianMatrix zero(int d);
  static HermitianMatrix diagonal(std::span<const double> diag);
  static HermitianMatrix diagonal(std::initializer_list<double> diag);
  /// v v^*
  static HermitianMatrix outer(const CVector& v);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& mat() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  CMatrix m_;
};

/// Hermitian, PSD within tol_psd, unit trace within tol_trace.
class DensityMatrix {
 public:
  /// Throws DomainError when `m` is not a density matrix within tolerance.
  static DensityMatrix from(HermitianMatrix m, double tol_psd = kDefaultTolPsd,
                            double tol_trace = kDefaultTolTrace);
  /// I/d
  static DensityMatrix maximally_mixed(int d);

  const HermitianMatrix& herm() const noexcept { return m_; }
  operator const HermitianMatrix&() const noexcept { return m_; }  // NOLINT
  const CMatrix& mat() const noexcept { return m_.mat(); }
  int dim() const noexcept { return m_.dim(); }

 private:
  explicit DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {}
  HermitianMatrix m_;
};

/// Column-stacked vectorization (length d^2).
CVector vec(const CMatrix& m);
inline CVector vec(const HermitianMatrix& m) { return vec(m.mat()); }

/// Inverse of vec. Rejects lengths that are not perfect squares and reshapes
/// whose anti-Hermitian part exceeds `tol` (relative to the Frobenius norm).
HermitianMatrix vec_inv(const CVector& v, double tol = 1e-9);

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, columns are eigenvectors
};

/// Throws SolverError when the underlying iteration fails to converge.
HermitianEigen eig_herm(const HermitianMatrix& m);
/// Eigenvalues (ascending) of a Hermitian matrix of any size, e.g. a d^2 x d^2 Hessian.
RVector eigvals_herm(const CMatrix& m);

/// tr(A^* B); the imaginary part vanishes for Hermitian inputs and is dropped.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Orthonormal basis of the real Hilbert space of d x d Hermitian matrices.
/// basis(0) = I/sqrt(d); then the d-1 diagonal traceless elements, then
/// (E_jk + E_kj)/sqrt(2) and (-i E_jk + i E_kj)/sqrt(2) for j < k in
/// lexicographic order.
class RealChart {
 public:
  explicit RealChart(int d);

  int dim() const noexcept { return d_; }
  int real_dim() const noexcept { return d_ * d_; }
  const HermitianMatrix& basis(int k) const { return basis_.at(static_cast<std::size_t>(k)); }
  const std::vector<HermitianMatrix>& basis() const noexcept { return basis_; }

 private:
  int d_;
  std::vector<HermitianMatrix> basis_;
};

HermitianMatrix chart_to_herm(const RVector& coords, const RealChart& chart);
RVector herm_to_chart(const HermitianMatrix& m, const RealChart& chart);

bool is_density(const HermitianMatrix& m, double tol_psd = kDefaultTolPsd,
                double tol_trace = kDefaultTolTrace);

/// Inverse of a strictly positive definite Hermitian matrix via its
/// eigendecomposition. Throws DomainError when the smallest eigenvalue is <= 0.
CMatrix inverse_pd(const HermitianMatrix& m);

}  // namespace vbftrl
