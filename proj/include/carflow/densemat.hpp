#pragma once

#include <vector>

#include "carflow/rng.hpp"
#include "carflow/types.hpp"

namespace carflow {

// Dense complex matrix for single-particle scale work: isometries fed to the
// second quantization and kernel restrictions.  Row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const cplx& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix operator-(const DenseMatrix& rhs) const;
  DenseMatrix adjoint() const;

  double frobenius() const;

  // ||W*W - I||_F, the deviation from being an isometry
  double isometry_residual() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

// Determinant by LU with partial pivoting; the argument is consumed.
cplx determinant(DenseMatrix m);

// Random matrix with entries uniform in the [-1,1)^2 square of the plane.
DenseMatrix random_matrix(SplitMix64& rng, int rows, int cols);

// Random isometry (rows >= cols) via twice-applied modified Gram-Schmidt.
DenseMatrix random_isometry(SplitMix64& rng, int rows, int cols);

}  // namespace carflow
