#include "vbftrl/herm.hpp"

#include "vbftrl/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vbftrl {

namespace {

CMatrix symmetrize(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("HermitianMatrix: expected a non-empty square matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) : m_(symmetrize(m)) {}

HermitianMatrix HermitianMatrix::identity(int d) { return HermitianMatrix(CMatrix::Identity(d, d)); }

HermitianMatrix HermitianMatrix::zero(int d) { return HermitianMatrix(CMatrix::Zero(d, d)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  const auto d = static_cast<Eigen::Index>(diag.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

HermitianMatrix HermitianMatrix::outer(const CVector& v) { return HermitianMatrix(v * v.adjoint()); }

double HermitianMatrix::trace() const { return m_.trace().real(); }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * s); }

DensityMatrix DensityMatrix::from(HermitianMatrix m, double tol_psd, double tol_trace) {
  if (!is_density(m, tol_psd, tol_trace)) {
    throw DomainError("DensityMatrix: matrix is not PSD with unit trace within tolerance");
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(HermitianMatrix::identity(d) * (1.0 / d));
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

HermitianMatrix vec_inv(const CVector& v, double tol) {
  const auto n = v.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || d * d != n) {
    throw std::invalid_argument("vec_inv: length " + std::to_string(n) + " is not a perfect square");
  }
  CMatrix m = Eigen::Map<const CMatrix>(v.data(), d, d);
  const double skew = (m - m.adjoint()).norm() * 0.5;
  if (skew > tol * std::max(1.0, m.norm())) {
    throw std::invalid_argument("vec_inv: reshaped matrix is not Hermitian");
  }
  return HermitianMatrix(m);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianEigen eig_herm(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.mat());
  if (es.info() != Eigen::Success) throw SolverError("eig_herm: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector eigvals_herm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("eigvals_herm: eigensolver did not converge");
  return es.eigenvalues();
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("hs_inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
  // tr(A^* B) = sum_ij conj(A_ij) B_ij
  return (a.mat().conjugate().cwiseProduct(b.mat())).sum().real();
}

RealChart::RealChart(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("RealChart: dimension must be >= 1");
  basis_.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  basis_.push_back(HermitianMatrix::identity(d) * (1.0 / std::sqrt(static_cast<double>(d))));
  for (int l = 1; l < d; ++l) {
    CMatrix m = CMatrix::Zero(d, d);
    const double norm = std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) m(i, i) = 1.0 / norm;
    m(l, l) = -static_cast<double>(l) / norm;
    basis_.emplace_back(m);
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = r;
      m(k, j) = r;
      basis_.emplace_back(m);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = Complex(0.0, -r);
      m(k, j) = Complex(0.0, r);
      basis_.emplace_back(m);
    }
  }
}

HermitianMatrix chart_to_herm(const RVector& coords, const RealChart& chart) {
  if (coords.size() != chart.real_dim()) {
    throw std::invalid_argument("chart_to_herm: coordinate length does not match chart");
  }
  CMatrix m = CMatrix::Zero(chart.dim(), chart.dim());
  for (int k = 0; k < chart.real_dim(); ++k) m += coords(k) * chart.basis(k).mat();
  return HermitianMatrix(m);
}

RVector herm_to_chart(const HermitianMatrix& m, const RealChart& chart) {
  if (m.dim() != chart.dim()) throw std::invalid_argument("herm_to_chart: dimension mismatch");
  RVector out(chart.real_dim());
  for (int k = 0; k < chart.real_dim(); ++k) out(k) = hs_inner(chart.basis(k), m);
  return out;
}

bool is_density(const HermitianMatrix& m, double tol_psd, double tol_trace) {
  if (std::abs(m.trace() - 1.0) > tol_trace) return false;
  return eig_herm(m).values(0) >= -tol_psd;
}

CMatrix inverse_pd(const HermitianMatrix& m) {
  const auto eig = eig_herm(m);
  if (!(eig.values(0) > 0.0)) throw DomainError("inverse_pd: matrix is not positive definite");
  return eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace vbftrl
