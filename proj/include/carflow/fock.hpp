#pragma once

#include <bit>
#include <map>
#include <optional>
#include <vector>

#include "carflow/densemat.hpp"
#include "carflow/rng.hpp"
#include "carflow/types.hpp"

// Finite-dimensional antisymmetric Fock space over n <= 14 modes.
//
// Conventions, fixed once for the whole project:
//   * inner products are conjugate-linear in the FIRST argument and linear in
//     the second; creation(f) is linear in f, annihilation(f) antilinear;
//   * basis states are occupation masks with the ordered-wedge sign rule:
//     creating mode i on mask S costs (-1)^(number of occupied modes below i);
//   * operator norms reported by residual checks are Frobenius norms, an
//     upper bound for the spectral norm.
namespace carflow::fock {

// Single-particle vector: one complex coefficient per mode.
using SpVector = std::vector<cplx>;

inline int weight(Mask s) { return std::popcount(s); }

// occupied modes strictly below `mode`
inline int lower_count(Mask s, int mode) {
  return std::popcount(s & ((Mask{1} << mode) - 1));
}

// Parity of the permutation sorting concat(bits of left asc, bits of right
// asc) into one ascending sequence.  left and right must be disjoint.
int interleave_sign(Mask left, Mask right);

// Parity of the number of inversions of an integer sequence (+1 or -1).
int reorder_sign(const std::vector<int>& positions);

// Sparse vector on the Fock space over a fixed number of modes.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(int modes);

  int modes() const { return modes_; }
  std::size_t dimension() const { return std::size_t{1} << modes_; }

  void set(Mask m, cplx v);  // exact zeros are dropped
  void add(Mask m, cplx v);
  cplx amplitude(Mask m) const;
  const std::map<Mask, cplx>& amplitudes() const { return amp_; }

  FockVector& operator+=(const FockVector& rhs);
  FockVector& operator-=(const FockVector& rhs);
  FockVector& operator*=(cplx s);

  double norm() const;

  // 0 = even, 1 = odd, nullopt = not parity-homogeneous.
  // The zero vector (and the vacuum) count as even.
  std::optional<int> parity() const;

 private:
  int modes_ = 0;
  std::map<Mask, cplx> amp_;
};

// conjugate-linear in a, linear in b
cplx inner(const FockVector& a, const FockVector& b);

// Sparse operator between Fock spaces, stored column-wise: for every source
// mask the (target mask, value) entries sorted by target mask.
class FockOperator {
 public:
  using Entry = std::pair<Mask, cplx>;
  using Column = std::vector<Entry>;

  FockOperator() = default;
  FockOperator(int target_modes, int source_modes);

  static FockOperator identity(int modes);

  int source_modes() const { return src_modes_; }
  int target_modes() const { return dst_modes_; }
  std::size_t source_dimension() const { return std::size_t{1} << src_modes_; }
  std::size_t target_dimension() const { return std::size_t{1} << dst_modes_; }

  const Column& column(Mask src) const { return cols_[src]; }
  void set_column(Mask src, Column entries);  // entries must be sorted by mask
  void add_entry(Mask dst, Mask src, cplx v);

  cplx entry(Mask dst, Mask src) const;
  std::size_t nnz() const;

  FockVector apply(const FockVector& v) const;
  FockOperator adjoint() const;
  double frobenius() const;

  FockOperator& operator+=(const FockOperator& rhs);
  FockOperator& operator-=(const FockOperator& rhs);
  FockOperator& operator*=(cplx s);

  // Two-sided compression: keep entries whose target mask is supported on
  // dst_allowed and whose source mask is supported on src_allowed.
  FockOperator restricted(Mask dst_allowed, Mask src_allowed) const;

 private:
  int src_modes_ = 0;
  int dst_modes_ = 0;
  std::vector<Column> cols_;
};

FockOperator operator+(FockOperator a, const FockOperator& b);
FockOperator operator-(FockOperator a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
double distance(const FockOperator& a, const FockOperator& b);

FockVector vacuum(int modes);

// wedge-with-f; linear in f
FockOperator creation(const SpVector& f);

// adjoint of creation; antilinear in f
FockOperator annihilation(const SpVector& f);

FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

// diagonal (-1)^(particle number)
FockOperator parity_operator(int modes);

// Functorial lift of an isometry w (target_modes x source_modes).  The entry
// between masks I (source) and J (target) of equal cardinality k is the k x k
// minor det(w[J, I]); everything else vanishes.  Throws when ||w*w - I||
// exceeds isometry_tol.
FockOperator second_quantization(const DenseMatrix& w, double isometry_tol = 1e-8);

// Fock lift of a partial single-particle mode map: map[i] is the target mode
// of source mode i, or -1 when the mode leaves the space (the column dies).
// Exact signed-permutation arithmetic, no floating-point determinants.
FockOperator lift_mode_map(const std::vector<int>& map, int target_modes);

// Unitary from Gamma(C^p) (x) Gamma(C^q) onto Gamma(C^(p+q)): mask pair
// (S1, S2) goes to S1 | (S2 << p) with sign +1.
FockVector wedge_embed(const FockVector& u, const FockVector& v);

FockVector random_vector(SplitMix64& rng, int modes);           // normalized
FockVector random_homogeneous(SplitMix64& rng, int modes, int parity);
SpVector random_sp_vector(SplitMix64& rng, int modes);

}  // namespace carflow::fock
