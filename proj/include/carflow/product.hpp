#pragma once

#include <vector>

#include "carflow/fock.hpp"
#include "carflow/lattice.hpp"

// The concrete product system over a shift representation: fibers are Fock
// spaces over kernel slices, the product wedges the left vector with the
// translated right vector, and every identification is a signed relabelling
// of lattice points.
//
// Mode-ordering contract: a product fiber lists the left factor's kernel
// points first, then the translated kernel points of the right factor, and is
// then re-sorted into lexicographic order with the corresponding permutation
// sign.  All wedge signs in this module are defined relative to that order.
namespace carflow::product {

struct Fiber {
  Point shift;                // x
  int direction = +1;         // +1 forward representation, -1 opposite
  std::vector<Point> modes;   // kernel slice, lexicographic

  int mode_count() const { return static_cast<int>(modes.size()); }
};

Fiber fiber(const lattice::ShiftRep& rep, const Point& x, const lattice::Window& w,
            int max_modes = kMaxFockModes);

struct PSElement {
  Fiber fib;
  fock::FockVector vec;  // over fib.modes

  double norm() const { return vec.norm(); }
};

PSElement element(Fiber f, fock::FockVector v);
PSElement vacuum_element(Fiber f);
PSElement random_element(SplitMix64& rng, Fiber f);
PSElement random_homogeneous_element(SplitMix64& rng, Fiber f, int parity);

// (x,f).(y,g) = (x+y, f wedge translated g); bilinear, norm-multiplicative.
PSElement forward_product(const PSElement& e1, const PSElement& e2);

// (x,f) o (y,g) = (x+y, g wedge translated f) = forward_product(e2, e1).
PSElement opposite_product(const PSElement& e1, const PSElement& e2);

// ||e1 - e2|| for elements over identical fibers.
double element_distance(const PSElement& e1, const PSElement& e2);

// Ambient single-particle data for embeddings: the modes of l^2(carrier or W).
struct Ambient {
  lattice::ShiftRep rep;
  lattice::Window window;
  std::vector<Point> modes;  // carrier points of W, lexicographic

  int mode_count() const { return static_cast<int>(modes.size()); }
  int mode_index(const Point& p) const;  // -1 when absent
};

Ambient make_ambient(lattice::ShiftRep rep, lattice::Window w,
                     int max_modes = kMaxFockModes);

enum class Convention { literal, parity_twisted };

struct Embedding {
  fock::FockOperator op;
  Mask valid_sources;   // single-particle modes whose translate stays in W
  Mask kernel_modes;    // ambient positions of the fiber modes
};

// The left-multiplication operator eta -> f wedge Gamma(V_x) eta on the
// ambient Fock space.  literal: as written; parity_twisted: the grading
// operator to the parity of f is applied to eta first (f must be
// parity-homogeneous).  Columns are exact on masks supported in
// valid_sources.
Embedding left_embedding(const Ambient& h, const PSElement& e, Convention c);

struct SignEntry {
  int left_parity;   // 0 even, 1 odd
  int right_parity;
  int sign;          // +1, -1, or 0 = neither sign matches
  double residual;   // best residual over both signs
};

struct SignTable {
  Convention convention;
  std::vector<SignEntry> entries;  // 4 parity pairs in (ee, eo, oe, oo) order
};

struct SignCheck {
  int sign;         // +1, -1, or 0 = neither sign matches
  double residual;  // best residual over both signs
};

// ||T_{e1} T_{e2} - s T_{e1.e2}|| on the columns where both routes are exact,
// reported for the better of s = +1, -1.
SignCheck multiplicativity_check(const Ambient& h, const PSElement& e1,
                                 const PSElement& e2, Convention c, double tol);

// The full 2x2 parity table of multiplicativity_check over random
// parity-homogeneous elements at shifts x and y.
SignTable multiplicativity_table(const Ambient& h, const Point& x, const Point& y,
                                 Convention c, SplitMix64& rng, double tol);

// (x, f) over V^A  ->  (x, translated f) over V^op: the fiber points move by
// -x with the order preserved, and the N-particle sector picks up the Klein
// sign (-1)^(N(N-1)/2).  The sign is what makes the map anti-multiplicative
// on the antisymmetric Fock space; without it the identity fails by
// (-1)^(p(f)p(g)) on odd-odd pairs.
PSElement opposite_transport(const PSElement& e);

// (x, f) over V^op -> (x, reflected f) over the shift representation of
// -(A^c); reflection reverses the mode order, so masks pick up the
// reversal permutation sign.
PSElement reflect_to_opposite_module(const PSElement& e);

// ||phi(e1.e2) - phi(e2).phi(e1)|| with both sides over V^op.
double transport_antihom_residual(const PSElement& e1, const PSElement& e2);

// Fiber-wise anti-automorphism of E^{V^A} for a certified translation witness
// z (A = -(A^c) + z): the point map k -> x + z - k composed over the
// reflection-translation unitary and the opposite transport.
PSElement symmetry_automorphism(const PSElement& e, const Point& z);

}  // namespace carflow::product
