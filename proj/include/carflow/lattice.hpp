#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carflow/densemat.hpp"
#include "carflow/types.hpp"

// Lattice cones P in Z^d, P-modules A (A + P contained in A), and the shift
// isometries they generate on windowed l^2 spaces.  All set arithmetic is
// exact integer arithmetic; truncation to a window never enters a membership
// test, only the choice of which points get a basis index.
namespace carflow::lattice {

Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point negate(const Point& a);
long long dot(const Point& a, const Point& b);
long long norm1(const Point& a);
std::string to_string(const Point& a);

inline constexpr long long kDefaultWindowCap = 200000;

// Axis-aligned box, the truncation device for every operator in the project.
struct Window {
  Point lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& p) const;
  bool empty() const;
  long long point_count() const;

  // all points in lexicographic order
  std::vector<Point> points(long long cap = kDefaultWindowCap) const;

  // {w in W : w + x in W}
  Window core(const Point& x) const;

  // {-h : h in W}
  Window reflected() const;
};

struct ConeValidation {
  std::vector<std::string> issues;
  std::optional<Point> positive_functional;
  bool ok() const { return issues.empty(); }
};

// Finitely generated lattice cone (monoid).  Membership is exact: Cramer
// solve when the generators are simplicial, otherwise a depth-bounded search
// capped by a strictly positive integer functional.
class ConeSpec {
 public:
  ConeSpec(int dim, std::vector<Point> generators);

  int dim() const { return dim_; }
  const std::vector<Point>& generators() const { return gens_; }

  // group-span of Z^d plus pointedness (via the positive functional)
  ConeValidation validate() const;

  bool contains(const Point& x) const;

  // cone elements x with 1 <= |x|_1 <= max_norm1, lexicographic
  std::vector<Point> elements_up_to(int max_norm1) const;

 private:
  int dim_;
  std::vector<Point> gens_;
  std::optional<Point> functional_;  // <w, g> >= 1 for every generator
  bool simplicial_ = false;
  long long det_ = 0;                // generator matrix determinant when simplicial
};

// P-module in one of three forms: an intersection of integer halfspaces, a
// finite union of cone translates, or the complement-reflection of another
// module (the generic carrier of an opposite representation).
class ModuleSpec {
 public:
  struct Halfspace {
    Point normal;
    long long offset;  // constraint <normal, y> >= offset
  };

  enum class Form { halfspaces, translates, opposite };

  static ModuleSpec halfspaces(int dim, std::vector<Halfspace> constraints);
  static ModuleSpec translates(ConeSpec cone, std::vector<Point> origins);

  int dim() const { return dim_; }
  Form form() const { return form_; }
  const std::vector<Halfspace>& halfspace_list() const { return half_; }
  const std::vector<Point>& origin_list() const { return origins_; }

  bool contains(const Point& y) const;

  // B with y in B iff -y not in A.  A single halfspace maps to a halfspace
  // (<n,y> >= c becomes <n,y> >= 1-c); everything else gets the generic
  // complement-reflection carrier.  B is again a P-module.
  ModuleSpec opposite() const;

  std::vector<Point> window_points(const Window& w) const;

 private:
  ModuleSpec() = default;

  Form form_ = Form::halfspaces;
  int dim_ = 0;
  std::vector<Halfspace> half_;
  std::optional<ConeSpec> cone_;
  std::vector<Point> origins_;
  std::shared_ptr<const ModuleSpec> base_;
};

struct ModuleValidation {
  // (point, generator) pairs with point in A but point + generator outside
  std::vector<std::pair<Point, Point>> violations;
  bool ok() const { return violations.empty(); }
};

ModuleValidation validate_module(const ModuleSpec& a, const ConeSpec& p, const Window& w);

// (A \ (A + x)) within the window, lexicographic: the points indexing an
// orthonormal basis of Ker(V_x^*).
std::vector<Point> kernel_basis(const ModuleSpec& a, const Point& x, const Window& w);

struct SetIdentityReport {
  std::vector<Point> missing;  // in the left side only
  std::vector<Point> extra;    // in the right side only
  std::vector<Point> overlap;  // right side pieces not disjoint
  bool ok() const { return missing.empty() && extra.empty() && overlap.empty(); }
};

// Exact check of A\(A+x+y) = (A\(A+x)) disjoint-union (x + (A\(A+y))) on the
// core sub-window where translation by x stays inside w.
SetIdentityReport kernel_decomposition_check(const ModuleSpec& a, const Point& x,
                                             const Point& y, const Window& w);

// Windowed lattice operator: a partial permutation of basis points carrying
// an explicit validity mask.  Columns indexed by valid points are exact
// standard basis vectors.
struct LatticeOperator {
  Point shift;
  std::vector<Point> basis;   // source = target basis, lexicographic
  std::vector<int> image;     // basis index -> basis index, -1 when outside
  std::vector<char> valid;    // validity mask over source indices

  int index_of(const Point& p) const;
  DenseMatrix matrix() const;  // 0/1 matrix over the basis
};

// V^A_x on l^2(A cap W); requires x in the cone.
LatticeOperator shift_isometry(const ModuleSpec& a, const ConeSpec& p,
                               const Point& x, const Window& w);

// Translation by x on l^2(Z^d cap W); x is unrestricted (group element).
LatticeOperator dilation_shift(const Point& x, const Window& w);

struct OppositeRep {
  LatticeOperator op;              // on l^2(A^c cap W), basis = complement points
  ModuleSpec reflected_module;     // -(A^c), i.e. opposite()
  std::vector<Point> reflected_basis;  // reflected window points of -(A^c), lex
  std::vector<int> reflection;     // complement basis index -> reflected index
};

// V^op_x = U_{-x} restricted to l^2(A^c cap W), together with the reflection
// that identifies it with the shift representation of -(A^c).
OppositeRep opposite_rep(const ModuleSpec& a, const ConeSpec& p,
                         const Point& x, const Window& w);

// First z (lexicographic in box) with b = a + z on the verification window.
std::optional<Point> translation_equivalence_search(const ModuleSpec& a,
                                                    const ModuleSpec& b,
                                                    const Window& box,
                                                    const Window& verify);

struct SymmetryResult {
  std::optional<Point> witness;  // z with A = opposite(A) + z on the window
  std::string verdict;           // "symmetric (witnessed)" or "no witness in box"
};

SymmetryResult symmetry_check(const ModuleSpec& a, const Window& box, const Window& verify);

std::vector<std::size_t> kernel_dimension_profile(const ModuleSpec& a,
                                                  const std::vector<Point>& xs,
                                                  const Window& w);

// Shift representation abstraction: the forward representation V^A (carrier
// A, translation +x) or its opposite (carrier A^c, translation -x).
struct ShiftRep {
  ModuleSpec module;
  bool on_complement = false;
  int direction = +1;

  static ShiftRep forward(ModuleSpec a) { return {std::move(a), false, +1}; }
  static ShiftRep opposite_of(ModuleSpec a) { return {std::move(a), true, -1}; }

  int dim() const { return module.dim(); }
  bool carrier_contains(const Point& p) const {
    return on_complement ? !module.contains(p) : module.contains(p);
  }
  Point translate(const Point& y, const Point& x) const;
  std::vector<Point> carrier_points(const Window& w) const;
  // {w in carrier : w - direction*x not in carrier}, lexicographic
  std::vector<Point> kernel_points(const Point& x, const Window& w) const;
};

}  // namespace carflow::lattice
