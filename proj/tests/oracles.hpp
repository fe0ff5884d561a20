#pragma once

// Test-only oracles, independent of the library's sparse code paths:
//   * a formal antisymmetric-tensor calculus (ordered tuples with resorting
//     signs) used as the brute-force wedge expansion oracle;
//   * dense-matrix twins of the sparse Fock operators.

#include <algorithm>
#include <map>
#include <vector>

#include "carflow/fock.hpp"

namespace oracle {

using carflow::cplx;
using carflow::DenseMatrix;
using carflow::Mask;
using carflow::fock::FockOperator;
using carflow::fock::FockVector;
using carflow::fock::SpVector;

// formal sum of elementary wedges, keyed by strictly increasing mode tuples
using Tensor = std::map<std::vector<int>, cplx>;

// sorts a tuple, counting transpositions; repeated entries annihilate
inline bool sort_tuple(std::vector<int>& t, int& sign) {
  sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && t[j - 1] > t[j]) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
      --j;
    }
    if (j > 0 && t[j - 1] == t[j]) return false;
  }
  return true;
}

inline void accumulate(Tensor& t, std::vector<int> tuple, cplx v) {
  int sign;
  if (!sort_tuple(tuple, sign)) return;
  t[std::move(tuple)] += v * static_cast<double>(sign);
}

inline Tensor from_fock(const FockVector& v) {
  Tensor t;
  for (const auto& [m, a] : v.amplitudes()) {
    std::vector<int> tuple;
    for (Mask rest = m; rest; rest &= rest - 1)
      tuple.push_back(std::countr_zero(rest));
    t[std::move(tuple)] = a;
  }
  return t;
}

inline FockVector to_fock(const Tensor& t, int modes) {
  FockVector v(modes);
  for (const auto& [tuple, a] : t) {
    Mask m = 0;
    for (int i : tuple) m |= Mask{1} << i;
    v.add(m, a);
  }
  return v;
}

// f wedge t, expanded multilinearly over the coefficients of f
inline Tensor wedge_with(const SpVector& f, const Tensor& t) {
  Tensor out;
  for (const auto& [tuple, a] : t) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] == cplx{}) continue;
      std::vector<int> ext;
      ext.push_back(static_cast<int>(i));
      ext.insert(ext.end(), tuple.begin(), tuple.end());
      accumulate(out, std::move(ext), f[i] * a);
    }
  }
  return out;
}

// Gamma(W) t by applying W to every tensor factor and expanding
inline Tensor apply_matrix(const DenseMatrix& w, const Tensor& t) {
  Tensor out;
  for (const auto& [tuple, a] : t) {
    std::vector<int> choice(tuple.size(), 0);
    std::vector<int> image(tuple.size());
    while (true) {
      cplx coeff = a;
      for (std::size_t k = 0; k < tuple.size(); ++k) {
        coeff *= w.at(choice[k], tuple[k]);
        image[k] = choice[k];
      }
      if (coeff != cplx{}) accumulate(out, image, coeff);
      // odometer over target modes
      std::size_t k = 0;
      while (k < choice.size() && choice[k] == w.rows() - 1) choice[k++] = 0;
      if (k == choice.size()) break;
      ++choice[k];
    }
  }
  return out;
}

// dense twin of a sparse Fock operator
inline DenseMatrix to_dense(const FockOperator& op) {
  DenseMatrix m(static_cast<int>(op.target_dimension()),
                static_cast<int>(op.source_dimension()));
  for (Mask s = 0; s < op.source_dimension(); ++s)
    for (const auto& [d, v] : op.column(s)) m.at(static_cast<int>(d), static_cast<int>(s)) = v;
  return m;
}

inline DenseMatrix dense_mul(const FockOperator& a, const FockOperator& b) {
  return to_dense(a) * to_dense(b);
}

inline double dense_distance(const FockOperator& a, const FockOperator& b) {
  return (to_dense(a) - to_dense(b)).frobenius();
}

}  // namespace oracle
