#include "carflow/densemat.hpp"

#include <cmath>

namespace carflow {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  require(cols_ == rhs.rows_, "DenseMatrix: dimension mismatch in product");
  DenseMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const cplx a = at(i, k);
      if (a == cplx{}) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_,
          "DenseMatrix: dimension mismatch in difference");
  DenseMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
  return out;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

double DenseMatrix::frobenius() const {
  double s = 0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double DenseMatrix::isometry_residual() const {
  return (adjoint() * *this - identity(cols_)).frobenius();
}

cplx determinant(DenseMatrix m) {
  require(m.rows() == m.cols(), "determinant: matrix not square");
  const int n = m.rows();
  if (n == 0) return 1.0;
  cplx det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(m.at(c, c));
    for (int r = c + 1; r < n; ++r) {
      const double v = std::abs(m.at(r, c));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = c; j < n; ++j) std::swap(m.at(c, j), m.at(piv, j));
      det = -det;
    }
    const cplx p = m.at(c, c);
    det *= p;
    for (int r = c + 1; r < n; ++r) {
      const cplx f = m.at(r, c) / p;
      if (f == cplx{}) continue;
      for (int j = c; j < n; ++j) m.at(r, j) -= f * m.at(c, j);
    }
  }
  return det;
}

DenseMatrix random_matrix(SplitMix64& rng, int rows, int cols) {
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = rng.uniform_cplx();
  return m;
}

DenseMatrix random_isometry(SplitMix64& rng, int rows, int cols) {
  require(rows >= cols, "random_isometry: need rows >= cols");
  DenseMatrix m = random_matrix(rng, rows, cols);
  // modified Gram-Schmidt, applied twice
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < cols; ++j) {
      for (int k = 0; k < j; ++k) {
        cplx proj = 0;
        for (int i = 0; i < rows; ++i) proj += std::conj(m.at(i, k)) * m.at(i, j);
        for (int i = 0; i < rows; ++i) m.at(i, j) -= proj * m.at(i, k);
      }
      double nrm = 0;
      for (int i = 0; i < rows; ++i) nrm += std::norm(m.at(i, j));
      nrm = std::sqrt(nrm);
      require(nrm > 1e-12, "random_isometry: degenerate column");
      for (int i = 0; i < rows; ++i) m.at(i, j) /= nrm;
    }
  }
  return m;
}

}  // namespace carflow
