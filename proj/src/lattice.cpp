#include "carflow/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "carflow/kernels.hpp"

namespace carflow::lattice {

Point add(const Point& a, const Point& b) {
  require(a.size() == b.size(), "point dimension mismatch");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point sub(const Point& a, const Point& b) {
  require(a.size() == b.size(), "point dimension mismatch");
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point negate(const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

long long dot(const Point& a, const Point& b) {
  require(a.size() == b.size(), "point dimension mismatch");
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += static_cast<long long>(a[i]) * b[i];
  return s;
}

long long norm1(const Point& a) {
  long long s = 0;
  for (int c : a) s += std::abs(static_cast<long long>(c));
  return s;
}

std::string to_string(const Point& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << a[i];
  }
  os << ')';
  return os.str();
}

bool Window::contains(const Point& p) const {
  require(p.size() == lo.size(), "Window::contains: dimension mismatch");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

bool Window::empty() const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) return true;
  return lo.empty();
}

long long Window::point_count() const {
  if (empty()) return 0;
  long long n = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) n *= hi[i] - lo[i] + 1;
  return n;
}

std::vector<Point> Window::points(long long cap) const {
  if (empty()) return {};
  const long long n = point_count();
  if (n > cap)
    throw CapExceeded("window holds " + std::to_string(n) +
                      " points, cap is " + std::to_string(cap));
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  Point p = lo;
  while (true) {
    out.push_back(p);
    int i = dim() - 1;
    while (i >= 0 && p[i] == hi[i]) {
      p[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++p[i];
  }
  return out;
}

Window Window::core(const Point& x) const {
  require(x.size() == lo.size(), "Window::core: dimension mismatch");
  Window w = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    w.lo[i] = lo[i] + std::max(0, -x[i]);
    w.hi[i] = hi[i] - std::max(0, x[i]);
  }
  return w;
}

Window Window::reflected() const {
  Window w;
  w.lo = negate(hi);
  w.hi = negate(lo);
  return w;
}

namespace {

// exact integer determinant (Bareiss)
long long int_det(std::vector<std::vector<long long>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      sign = -sign;
    }
    for (int r = c + 1; r < n; ++r)
      for (int j = c + 1; j < n; ++j)
        m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
    prev = m[c][c];
  }
  return sign * m[n - 1][n - 1];
}

std::optional<Point> find_positive_functional(int dim, const std::vector<Point>& gens,
                                              int box) {
  Window b;
  b.lo.assign(dim, -box);
  b.hi.assign(dim, box);
  for (const Point& w : b.points(2'000'000)) {
    bool ok = true;
    for (const Point& g : gens)
      if (dot(w, g) < 1) {
        ok = false;
        break;
      }
    if (ok) return w;
  }
  return std::nullopt;
}

}  // namespace

ConeSpec::ConeSpec(int dim, std::vector<Point> generators)
    : dim_(dim), gens_(std::move(generators)) {
  require(dim >= 1, "ConeSpec: dimension must be positive");
  for (const Point& g : gens_)
    require(static_cast<int>(g.size()) == dim, "ConeSpec: generator dimension mismatch");
  functional_ = find_positive_functional(dim_, gens_, 8);
  if (static_cast<int>(gens_.size()) == dim_) {
    std::vector<std::vector<long long>> m(dim_, std::vector<long long>(dim_));
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m[i][j] = gens_[j][i];  // columns = generators
    det_ = int_det(m);
    simplicial_ = det_ != 0;
  }
}

ConeValidation ConeSpec::validate() const {
  ConeValidation v;
  v.positive_functional = functional_;
  if (static_cast<int>(gens_.size()) < dim_) {
    v.issues.push_back("fewer generators than the dimension: the monoid cannot span Z^d");
    return v;
  }
  // group span: gcd of all d x d generator minors must be 1
  std::vector<int> idx(gens_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(dim_);
  long long g = 0;
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == dim_) {
      std::vector<std::vector<long long>> m(dim_, std::vector<long long>(dim_));
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m[i][j] = gens_[pick[j]][i];
      g = std::gcd(g, std::abs(int_det(m)));
      return;
    }
    for (int i = start; i <= static_cast<int>(gens_.size()) - (dim_ - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  if (g != 1)
    v.issues.push_back("generators span a proper sublattice (gcd of maximal minors = " +
                       std::to_string(g) + "), P - P != Z^d");
  if (!functional_)
    v.issues.push_back(
        "no strictly positive integer functional found in [-8,8]^d; "
        "the cone is not pointed or needs a larger functional search box");
  return v;
}

bool ConeSpec::contains(const Point& x) const {
  require(static_cast<int>(x.size()) == dim_, "ConeSpec::contains: dimension mismatch");
  if (std::all_of(x.begin(), x.end(), [](int c) { return c == 0; })) return true;
  if (simplicial_) {
    // Cramer: coordinates must be nonnegative integers
    for (int i = 0; i < dim_; ++i) {
      std::vector<std::vector<long long>> m(dim_, std::vector<long long>(dim_));
      for (int r = 0; r < dim_; ++r)
        for (int j = 0; j < dim_; ++j)
          m[r][j] = (j == i) ? x[r] : gens_[j][r];
      const long long di = int_det(m);
      if (di % det_ != 0) return false;
      if (di / det_ < 0) return false;
    }
    return true;
  }
  require(functional_.has_value(),
          "ConeSpec::contains: no positive functional, membership search unbounded");
  const long long budget = dot(*functional_, x);
  if (budget < 0) return false;
  std::map<Point, bool> memo;
  std::function<bool(const Point&)> reach = [&](const Point& p) -> bool {
    if (std::all_of(p.begin(), p.end(), [](int c) { return c == 0; })) return true;
    auto it = memo.find(p);
    if (it != memo.end()) return it->second;
    memo[p] = false;  // guards cycles; <w,p> strictly decreases so none occur
    bool ok = false;
    for (const Point& g : gens_) {
      const Point q = sub(p, g);
      if (dot(*functional_, q) < 0) continue;
      if (reach(q)) {
        ok = true;
        break;
      }
    }
    memo[p] = ok;
    return ok;
  };
  return reach(x);
}

std::vector<Point> ConeSpec::elements_up_to(int max_norm1) const {
  Window b;
  b.lo.assign(dim_, -max_norm1);
  b.hi.assign(dim_, max_norm1);
  std::vector<Point> out;
  for (const Point& p : b.points())
    if (norm1(p) >= 1 && norm1(p) <= max_norm1 && contains(p)) out.push_back(p);
  return out;
}

ModuleSpec ModuleSpec::halfspaces(int dim, std::vector<Halfspace> constraints) {
  require(dim >= 1, "ModuleSpec: dimension must be positive");
  require(!constraints.empty(), "ModuleSpec: need at least one halfspace");
  for (const auto& h : constraints)
    require(static_cast<int>(h.normal.size()) == dim,
            "ModuleSpec: halfspace normal dimension mismatch");
  ModuleSpec m;
  m.form_ = Form::halfspaces;
  m.dim_ = dim;
  m.half_ = std::move(constraints);
  return m;
}

ModuleSpec ModuleSpec::translates(ConeSpec cone, std::vector<Point> origins) {
  require(!origins.empty(), "ModuleSpec: need at least one translate origin");
  for (const auto& o : origins)
    require(static_cast<int>(o.size()) == cone.dim(),
            "ModuleSpec: origin dimension mismatch");
  ModuleSpec m;
  m.form_ = Form::translates;
  m.dim_ = cone.dim();
  m.origins_ = std::move(origins);
  m.cone_ = std::move(cone);
  return m;
}

bool ModuleSpec::contains(const Point& y) const {
  require(static_cast<int>(y.size()) == dim_, "ModuleSpec::contains: dimension mismatch");
  switch (form_) {
    case Form::halfspaces:
      for (const auto& h : half_)
        if (dot(h.normal, y) < h.offset) return false;
      return true;
    case Form::translates:
      for (const auto& f : origins_)
        if (cone_->contains(sub(y, f))) return true;
      return false;
    case Form::opposite:
      return !base_->contains(negate(y));
  }
  return false;
}

ModuleSpec ModuleSpec::opposite() const {
  if (form_ == Form::opposite) return *base_;
  if (form_ == Form::halfspaces && half_.size() == 1) {
    // complement of a halfspace, reflected: <n,y> >= c  ->  <n,y> >= 1-c
    return halfspaces(dim_, {{half_[0].normal, 1 - half_[0].offset}});
  }
  ModuleSpec m;
  m.form_ = Form::opposite;
  m.dim_ = dim_;
  m.base_ = std::make_shared<const ModuleSpec>(*this);
  return m;
}

std::vector<Point> ModuleSpec::window_points(const Window& w) const {
  std::vector<Point> out;
  for (const Point& p : w.points())
    if (contains(p)) out.push_back(p);
  return out;
}

ModuleValidation validate_module(const ModuleSpec& a, const ConeSpec& p, const Window& w) {
  ModuleValidation v;
  for (const Point& y : w.points()) {
    if (!a.contains(y)) continue;
    for (const Point& g : p.generators())
      if (!a.contains(add(y, g))) v.violations.push_back({y, g});
  }
  return v;
}

std::vector<Point> kernel_basis(const ModuleSpec& a, const Point& x, const Window& w) {
  std::vector<Point> out;
  for (const Point& y : w.points())
    if (a.contains(y) && !a.contains(sub(y, x))) out.push_back(y);
  return out;
}

SetIdentityReport kernel_decomposition_check(const ModuleSpec& a, const Point& x,
                                             const Point& y, const Window& w) {
  SetIdentityReport rep;
  const Window core = w.core(x);
  const Point xy = add(x, y);
  for (const Point& p : core.points()) {
    const bool lhs = a.contains(p) && !a.contains(sub(p, xy));
    const bool r1 = a.contains(p) && !a.contains(sub(p, x));
    // p in x + (A \ (A+y))  iff  p-x in A and p-x-y not in A
    const bool r2 = a.contains(sub(p, x)) && !a.contains(sub(sub(p, x), y));
    if (r1 && r2) rep.overlap.push_back(p);
    const bool rhs = r1 || r2;
    if (lhs && !rhs) rep.missing.push_back(p);
    if (!lhs && rhs) rep.extra.push_back(p);
  }
  return rep;
}

int LatticeOperator::index_of(const Point& p) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), p);
  if (it == basis.end() || *it != p) return -1;
  return static_cast<int>(it - basis.begin());
}

DenseMatrix LatticeOperator::matrix() const {
  const int n = static_cast<int>(basis.size());
  DenseMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    if (valid[j] && image[j] >= 0) m.at(image[j], j) = 1.0;
  return m;
}

namespace {

LatticeOperator shift_on_basis(std::vector<Point> basis, const Point& x, const Window& w) {
  LatticeOperator op;
  op.shift = x;
  op.basis = std::move(basis);
  op.image.resize(op.basis.size(), -1);
  op.valid.resize(op.basis.size(), 0);
  for (std::size_t j = 0; j < op.basis.size(); ++j) {
    const Point target = add(op.basis[j], x);
    if (!w.contains(target)) continue;
    const int idx = op.index_of(target);
    require(idx >= 0, "shift_on_basis: translated point " + to_string(target) +
                          " is inside the window but not in the basis");
    op.image[j] = idx;
    op.valid[j] = 1;
  }
  return op;
}

}  // namespace

LatticeOperator shift_isometry(const ModuleSpec& a, const ConeSpec& p, const Point& x,
                               const Window& w) {
  require(p.contains(x), "shift_isometry: " + to_string(x) + " is not in the cone");
  return shift_on_basis(a.window_points(w), x, w);
}

LatticeOperator dilation_shift(const Point& x, const Window& w) {
  return shift_on_basis(w.points(), x, w);
}

OppositeRep opposite_rep(const ModuleSpec& a, const ConeSpec& p, const Point& x,
                         const Window& w) {
  require(p.contains(x), "opposite_rep: " + to_string(x) + " is not in the cone");
  std::vector<Point> complement;
  for (const Point& q : w.points())
    if (!a.contains(q)) complement.push_back(q);

  OppositeRep rep{.op = shift_on_basis(std::move(complement), negate(x), w),
                  .reflected_module = a.opposite(),
                  .reflected_basis = {},
                  .reflection = {}};
  rep.op.shift = x;  // indexed by the cone element, acts as U_{-x}
  rep.reflected_basis = rep.reflected_module.window_points(w.reflected());
  rep.reflection.resize(rep.op.basis.size(), -1);
  for (std::size_t j = 0; j < rep.op.basis.size(); ++j) {
    const Point r = negate(rep.op.basis[j]);
    auto it = std::lower_bound(rep.reflected_basis.begin(), rep.reflected_basis.end(), r);
    require(it != rep.reflected_basis.end() && *it == r,
            "opposite_rep: reflected point missing from -(A^c) basis");
    rep.reflection[j] = static_cast<int>(it - rep.reflected_basis.begin());
  }
  return rep;
}

std::optional<Point> translation_equivalence_search(const ModuleSpec& a,
                                                    const ModuleSpec& b,
                                                    const Window& box,
                                                    const Window& verify) {
  require(a.dim() == b.dim(), "translation search: dimension mismatch");
  const std::vector<Point> probes = verify.points();
  const auto matches = [&](const Point& z) {
    for (const Point& w : probes)
      if (b.contains(w) != a.contains(sub(w, z))) return false;
    return true;
  };
  return kernels::first_match(box.points(), matches);
}

SymmetryResult symmetry_check(const ModuleSpec& a, const Window& box, const Window& verify) {
  // z with A = opposite(A) + z on the verification window
  const ModuleSpec opp = a.opposite();
  SymmetryResult r;
  r.witness = translation_equivalence_search(opp, a, box, verify);
  r.verdict = r.witness ? "symmetric (witnessed)" : "no witness in box";
  return r;
}

std::vector<std::size_t> kernel_dimension_profile(const ModuleSpec& a,
                                                  const std::vector<Point>& xs,
                                                  const Window& w) {
  std::vector<std::size_t> out;
  out.reserve(xs.size());
  for (const Point& x : xs) out.push_back(kernel_basis(a, x, w).size());
  return out;
}

Point ShiftRep::translate(const Point& y, const Point& x) const {
  return direction > 0 ? add(y, x) : sub(y, x);
}

std::vector<Point> ShiftRep::carrier_points(const Window& w) const {
  std::vector<Point> out;
  for (const Point& p : w.points())
    if (carrier_contains(p)) out.push_back(p);
  return out;
}

std::vector<Point> ShiftRep::kernel_points(const Point& x, const Window& w) const {
  std::vector<Point> out;
  for (const Point& p : w.points()) {
    if (!carrier_contains(p)) continue;
    const Point pre = direction > 0 ? sub(p, x) : add(p, x);
    if (!carrier_contains(pre)) out.push_back(p);
  }
  return out;
}

}  // namespace carflow::lattice
