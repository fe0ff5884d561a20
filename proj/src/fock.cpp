#include "carflow/fock.hpp"

#include <algorithm>
#include <cmath>

#include "carflow/kernels.hpp"

namespace carflow::fock {

int interleave_sign(Mask left, Mask right) {
  int inversions = 0;
  Mask l = left;
  while (l) {
    const int t = std::countr_zero(l);
    inversions += std::popcount(right & ((Mask{1} << t) - 1));
    l &= l - 1;
  }
  return (inversions & 1) ? -1 : +1;
}

int reorder_sign(const std::vector<int>& positions) {
  int inversions = 0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if (positions[i] > positions[j]) ++inversions;
  return (inversions & 1) ? -1 : +1;
}

FockVector::FockVector(int modes) : modes_(modes) {
  check_mode_cap(modes, "FockVector");
}

void FockVector::set(Mask m, cplx v) {
  if (v == cplx{})
    amp_.erase(m);
  else
    amp_[m] = v;
}

void FockVector::add(Mask m, cplx v) {
  auto it = amp_.find(m);
  if (it == amp_.end()) {
    if (v != cplx{}) amp_.emplace(m, v);
    return;
  }
  it->second += v;
  if (it->second == cplx{}) amp_.erase(it);
}

cplx FockVector::amplitude(Mask m) const {
  auto it = amp_.find(m);
  return it == amp_.end() ? cplx{} : it->second;
}

FockVector& FockVector::operator+=(const FockVector& rhs) {
  require(modes_ == rhs.modes_, "FockVector: mode count mismatch in sum");
  for (const auto& [m, v] : rhs.amp_) add(m, v);
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& rhs) {
  require(modes_ == rhs.modes_, "FockVector: mode count mismatch in difference");
  for (const auto& [m, v] : rhs.amp_) add(m, -v);
  return *this;
}

FockVector& FockVector::operator*=(cplx s) {
  if (s == cplx{}) {
    amp_.clear();
    return *this;
  }
  for (auto& [m, v] : amp_) v *= s;
  return *this;
}

double FockVector::norm() const {
  double s = 0;
  for (const auto& [m, v] : amp_) s += std::norm(v);
  return std::sqrt(s);
}

std::optional<int> FockVector::parity() const {
  if (amp_.empty()) return 0;
  const int p = weight(amp_.begin()->first) & 1;
  for (const auto& [m, v] : amp_)
    if ((weight(m) & 1) != p) return std::nullopt;
  return p;
}

cplx inner(const FockVector& a, const FockVector& b) {
  require(a.modes() == b.modes(), "inner: mode count mismatch");
  // iterate over the sparser vector
  const auto& small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  cplx s = 0;
  for (const auto& [m, v] : small.amplitudes())
    s += std::conj(a.amplitude(m)) * b.amplitude(m);
  return s;
}

FockOperator::FockOperator(int target_modes, int source_modes)
    : src_modes_(source_modes), dst_modes_(target_modes) {
  check_mode_cap(source_modes, "FockOperator");
  check_mode_cap(target_modes, "FockOperator");
  cols_.resize(std::size_t{1} << source_modes);
}

FockOperator FockOperator::identity(int modes) {
  FockOperator id(modes, modes);
  for (Mask s = 0; s < (Mask{1} << modes); ++s) id.cols_[s] = {{s, 1.0}};
  return id;
}

void FockOperator::set_column(Mask src, Column entries) {
  cols_[src] = std::move(entries);
}

void FockOperator::add_entry(Mask dst, Mask src, cplx v) {
  if (v == cplx{}) return;
  auto& col = cols_[src];
  auto it = std::lower_bound(col.begin(), col.end(), dst,
                             [](const Entry& e, Mask m) { return e.first < m; });
  if (it != col.end() && it->first == dst) {
    it->second += v;
    if (it->second == cplx{}) col.erase(it);
  } else {
    col.insert(it, {dst, v});
  }
}

cplx FockOperator::entry(Mask dst, Mask src) const {
  const auto& col = cols_[src];
  auto it = std::lower_bound(col.begin(), col.end(), dst,
                             [](const Entry& e, Mask m) { return e.first < m; });
  return (it != col.end() && it->first == dst) ? it->second : cplx{};
}

std::size_t FockOperator::nnz() const {
  std::size_t n = 0;
  for (const auto& col : cols_) n += col.size();
  return n;
}

FockVector FockOperator::apply(const FockVector& v) const {
  require(v.modes() == src_modes_, "FockOperator::apply: mode count mismatch");
  FockVector out(dst_modes_);
  for (const auto& [s, a] : v.amplitudes())
    for (const auto& [d, w] : cols_[s]) out.add(d, w * a);
  return out;
}

FockOperator FockOperator::adjoint() const {
  FockOperator out(src_modes_, dst_modes_);
  for (Mask s = 0; s < cols_.size(); ++s)
    for (const auto& [d, v] : cols_[s]) out.cols_[d].push_back({s, std::conj(v)});
  for (auto& col : out.cols_)
    std::sort(col.begin(), col.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
  return out;
}

double FockOperator::frobenius() const {
  double s = 0;
  for (const auto& col : cols_)
    for (const auto& [d, v] : col) s += std::norm(v);
  return std::sqrt(s);
}

FockOperator& FockOperator::operator+=(const FockOperator& rhs) {
  require(src_modes_ == rhs.src_modes_ && dst_modes_ == rhs.dst_modes_,
          "FockOperator: shape mismatch in sum");
  for (Mask s = 0; s < cols_.size(); ++s) {
    if (rhs.cols_[s].empty()) continue;
    Column merged;
    merged.reserve(cols_[s].size() + rhs.cols_[s].size());
    auto a = cols_[s].begin(), ae = cols_[s].end();
    auto b = rhs.cols_[s].begin(), be = rhs.cols_[s].end();
    while (a != ae && b != be) {
      if (a->first < b->first)
        merged.push_back(*a++);
      else if (b->first < a->first)
        merged.push_back(*b++);
      else {
        const cplx v = a->second + b->second;
        if (v != cplx{}) merged.push_back({a->first, v});
        ++a;
        ++b;
      }
    }
    merged.insert(merged.end(), a, ae);
    merged.insert(merged.end(), b, be);
    cols_[s] = std::move(merged);
  }
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& rhs) {
  FockOperator neg = rhs;
  neg *= cplx{-1.0};
  return *this += neg;
}

FockOperator& FockOperator::operator*=(cplx s) {
  for (auto& col : cols_) {
    if (s == cplx{}) {
      col.clear();
      continue;
    }
    for (auto& [d, v] : col) v *= s;
  }
  return *this;
}

FockOperator FockOperator::restricted(Mask dst_allowed, Mask src_allowed) const {
  FockOperator out(dst_modes_, src_modes_);
  for (Mask s = 0; s < cols_.size(); ++s) {
    if (s & ~src_allowed) continue;
    Column kept;
    for (const auto& e : cols_[s])
      if (!(e.first & ~dst_allowed)) kept.push_back(e);
    out.cols_[s] = std::move(kept);
  }
  return out;
}

FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return kernels::compose(a, b);
}

double distance(const FockOperator& a, const FockOperator& b) {
  return (a - b).frobenius();
}

FockVector vacuum(int modes) {
  check_mode_cap(modes, "vacuum");
  FockVector v(modes);
  v.set(0, 1.0);
  return v;
}

FockOperator creation(const SpVector& f) {
  const int n = static_cast<int>(f.size());
  FockOperator out(n, n);
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    FockOperator::Column col;
    for (int i = 0; i < n; ++i) {
      if (f[i] == cplx{} || (s >> i) & 1) continue;
      const int sign = (lower_count(s, i) & 1) ? -1 : +1;
      // target masks s | 1<<i are strictly increasing in i
      col.push_back({s | (Mask{1} << i), static_cast<double>(sign) * f[i]});
    }
    out.set_column(s, std::move(col));
  }
  return out;
}

FockOperator annihilation(const SpVector& f) { return creation(f).adjoint(); }

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return a * b + b * a;
}

FockOperator parity_operator(int modes) {
  FockOperator out(modes, modes);
  for (Mask s = 0; s < (Mask{1} << modes); ++s)
    out.set_column(s, {{s, (weight(s) & 1) ? -1.0 : 1.0}});
  return out;
}

FockOperator second_quantization(const DenseMatrix& w, double isometry_tol) {
  check_mode_cap(w.cols(), "second_quantization");
  check_mode_cap(w.rows(), "second_quantization");
  const double res = w.isometry_residual();
  require(res <= isometry_tol,
          "second_quantization: input is not an isometry, ||W*W - I|| = " +
              std::to_string(res));
  return kernels::sq_minors(w);
}

FockOperator lift_mode_map(const std::vector<int>& map, int target_modes) {
  const int n = static_cast<int>(map.size());
  check_mode_cap(n, "lift_mode_map");
  check_mode_cap(target_modes, "lift_mode_map");
  FockOperator out(target_modes, n);
  std::vector<int> positions;
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    positions.clear();
    bool alive = true;
    Mask dst = 0;
    for (Mask rest = s; rest; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      if (map[i] < 0) {
        alive = false;
        break;
      }
      positions.push_back(map[i]);
      dst |= Mask{1} << map[i];
    }
    if (!alive || static_cast<int>(positions.size()) != weight(dst)) continue;
    out.set_column(s, {{dst, static_cast<double>(reorder_sign(positions))}});
  }
  return out;
}

FockVector wedge_embed(const FockVector& u, const FockVector& v) {
  const int p = u.modes(), q = v.modes();
  check_mode_cap(p + q, "wedge_embed");
  FockVector out(p + q);
  for (const auto& [s1, a1] : u.amplitudes())
    for (const auto& [s2, a2] : v.amplitudes())
      out.add(s1 | (s2 << p), a1 * a2);
  return out;
}

FockVector random_vector(SplitMix64& rng, int modes) {
  FockVector v(modes);
  for (Mask s = 0; s < (Mask{1} << modes); ++s) v.set(s, rng.uniform_cplx());
  const double n = v.norm();
  if (n > 0) v *= cplx{1.0 / n};
  return v;
}

FockVector random_homogeneous(SplitMix64& rng, int modes, int parity) {
  require(modes >= 1 || parity == 0, "random_homogeneous: no odd masks over 0 modes");
  FockVector v(modes);
  for (Mask s = 0; s < (Mask{1} << modes); ++s) {
    const cplx a = rng.uniform_cplx();  // always drawn, keeps streams aligned
    if ((weight(s) & 1) == parity) v.set(s, a);
  }
  const double n = v.norm();
  require(n > 1e-12, "random_homogeneous: degenerate sample");
  v *= cplx{1.0 / n};
  return v;
}

SpVector random_sp_vector(SplitMix64& rng, int modes) {
  SpVector f(modes);
  for (auto& c : f) c = rng.uniform_cplx();
  return f;
}

}  // namespace carflow::fock
