#include "carflow/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carflow::kernels {

using fock::FockOperator;

bool parallel_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// per-thread accumulator for one output column
struct Scratch {
  std::vector<cplx> acc;
  std::vector<Mask> touched;

  void ensure(std::size_t dim) {
    if (acc.size() < dim) acc.assign(dim, cplx{});
  }
};

void compose_column(const FockOperator& a, const FockOperator& b, Mask s,
                    Scratch& scratch, FockOperator::Column& out) {
  out.clear();
  auto& acc = scratch.acc;
  auto& touched = scratch.touched;
  touched.clear();
  for (const auto& [k, bv] : b.column(s)) {
    for (const auto& [d, av] : a.column(k)) {
      if (acc[d] == cplx{}) touched.push_back(d);
      acc[d] += av * bv;
    }
  }
  std::sort(touched.begin(), touched.end());
  for (Mask d : touched) {
    if (acc[d] != cplx{}) out.push_back({d, acc[d]});
    acc[d] = cplx{};
  }
}

}  // namespace

FockOperator compose(const FockOperator& a, const FockOperator& b) {
  require(a.source_modes() == b.target_modes(),
          "compose: target modes of the right factor must equal source modes "
          "of the left factor");
  FockOperator c(a.target_modes(), b.source_modes());
  const long long ncols = static_cast<long long>(b.source_dimension());
  const std::size_t dim = a.target_dimension();
#ifdef _OPENMP
#pragma omp parallel
  {
    Scratch scratch;
    scratch.ensure(dim);
    FockOperator::Column col;
#pragma omp for schedule(dynamic, 64)
    for (long long s = 0; s < ncols; ++s) {
      if (b.column(static_cast<Mask>(s)).empty()) continue;
      compose_column(a, b, static_cast<Mask>(s), scratch, col);
      c.set_column(static_cast<Mask>(s), col);
    }
  }
#else
  Scratch scratch;
  scratch.ensure(dim);
  FockOperator::Column col;
  for (long long s = 0; s < ncols; ++s) {
    if (b.column(static_cast<Mask>(s)).empty()) continue;
    compose_column(a, b, static_cast<Mask>(s), scratch, col);
    c.set_column(static_cast<Mask>(s), col);
  }
#endif
  return c;
}

FockOperator compose_reference(const FockOperator& a, const FockOperator& b) {
  require(a.source_modes() == b.target_modes(), "compose_reference: shape mismatch");
  FockOperator c(a.target_modes(), b.source_modes());
  for (Mask s = 0; s < b.source_dimension(); ++s) {
    std::map<Mask, cplx> acc;
    for (const auto& [k, bv] : b.column(s))
      for (const auto& [d, av] : a.column(k)) acc[d] += av * bv;
    FockOperator::Column col;
    for (const auto& [d, v] : acc)
      if (v != cplx{}) col.push_back({d, v});
    c.set_column(s, std::move(col));
  }
  return c;
}

namespace {

void minors_column(const DenseMatrix& w, const std::vector<Mask>& col_support,
                   Mask src, FockOperator::Column& out) {
  out.clear();
  const int k = fock::weight(src);
  if (k == 0) {
    out.push_back({0, 1.0});
    return;
  }
  // union of the column supports; an empty column kills every minor
  Mask support = 0;
  bool dead = false;
  std::vector<int> src_modes;
  for (Mask rest = src; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    if (col_support[j] == 0) {
      dead = true;
      break;
    }
    support |= col_support[j];
    src_modes.push_back(j);
  }
  if (dead || fock::weight(support) < k) return;

  std::vector<int> dst_modes(k);
  DenseMatrix sub(k, k);
  // ascending enumeration of the subsets of `support`
  Mask j_mask = 0;
  do {
    j_mask = (j_mask - support) & support;
    if (fock::weight(j_mask) != k) continue;
    int r = 0;
    for (Mask rest = j_mask; rest; rest &= rest - 1) dst_modes[r++] = std::countr_zero(rest);
    for (int rr = 0; rr < k; ++rr)
      for (int cc = 0; cc < k; ++cc) sub.at(rr, cc) = w.at(dst_modes[rr], src_modes[cc]);
    const cplx det = determinant(sub);
    if (det != cplx{}) out.push_back({j_mask, det});
  } while (j_mask != support);
}

}  // namespace

FockOperator sq_minors(const DenseMatrix& w) {
  const int m = w.rows(), n = w.cols();
  FockOperator out(m, n);
  std::vector<Mask> col_support(n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      if (w.at(i, j) != cplx{}) col_support[j] |= Mask{1} << i;

  const long long ncols = static_cast<long long>(out.source_dimension());
#ifdef _OPENMP
#pragma omp parallel
  {
    FockOperator::Column col;
#pragma omp for schedule(dynamic, 16)
    for (long long s = 0; s < ncols; ++s) {
      minors_column(w, col_support, static_cast<Mask>(s), col);
      if (!col.empty()) out.set_column(static_cast<Mask>(s), col);
    }
  }
#else
  FockOperator::Column col;
  for (long long s = 0; s < ncols; ++s) {
    minors_column(w, col_support, static_cast<Mask>(s), col);
    if (!col.empty()) out.set_column(static_cast<Mask>(s), col);
  }
#endif
  return out;
}

FockOperator sq_minors_reference(const DenseMatrix& w) {
  const int m = w.rows(), n = w.cols();
  FockOperator out(m, n);
  for (Mask src = 0; src < (Mask{1} << n); ++src) {
    const int k = fock::weight(src);
    std::vector<int> src_modes;
    for (Mask rest = src; rest; rest &= rest - 1)
      src_modes.push_back(std::countr_zero(rest));
    FockOperator::Column col;
    for (Mask dst = 0; dst < (Mask{1} << m); ++dst) {
      if (fock::weight(dst) != k) continue;
      std::vector<int> dst_modes;
      for (Mask rest = dst; rest; rest &= rest - 1)
        dst_modes.push_back(std::countr_zero(rest));
      DenseMatrix sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub.at(r, c) = w.at(dst_modes[r], src_modes[c]);
      const cplx det = determinant(std::move(sub));
      if (det != cplx{}) col.push_back({dst, det});
    }
    out.set_column(src, std::move(col));
  }
  return out;
}

FockOperator tree_sum(std::vector<FockOperator> terms, int target_modes,
                      int source_modes) {
  if (terms.empty()) return FockOperator(target_modes, source_modes);
  while (terms.size() > 1) {
    const std::size_t pairs = terms.size() / 2;
    std::vector<FockOperator> next(pairs + (terms.size() & 1));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (pairs > 1)
#endif
    for (long long i = 0; i < static_cast<long long>(pairs); ++i)
      next[i] = terms[2 * i] + terms[2 * i + 1];
    if (terms.size() & 1) next[pairs] = std::move(terms.back());
    terms = std::move(next);
  }
  return std::move(terms.front());
}

FockOperator tree_sum_reference(std::vector<FockOperator> terms, int target_modes,
                                int source_modes) {
  if (terms.empty()) return FockOperator(target_modes, source_modes);
  while (terms.size() > 1) {
    const std::size_t pairs = terms.size() / 2;
    std::vector<FockOperator> next(pairs + (terms.size() & 1));
    for (std::size_t i = 0; i < pairs; ++i) next[i] = terms[2 * i] + terms[2 * i + 1];
    if (terms.size() & 1) next[pairs] = std::move(terms.back());
    terms = std::move(next);
  }
  return std::move(terms.front());
}

std::optional<Point> first_match(const std::vector<Point>& candidates,
                                 const std::function<bool(const Point&)>& pred) {
  const long long n = static_cast<long long>(candidates.size());
  const long long block = 64;
  for (long long start = 0; start < n; start += block) {
    const long long end = std::min(n, start + block);
    std::vector<char> hits(end - start, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = start; i < end; ++i) hits[i - start] = pred(candidates[i]) ? 1 : 0;
    for (long long i = start; i < end; ++i)
      if (hits[i - start]) return candidates[i];
  }
  return std::nullopt;
}

std::optional<Point> first_match_reference(
    const std::vector<Point>& candidates,
    const std::function<bool(const Point&)>& pred) {
  for (const Point& c : candidates)
    if (pred(c)) return c;
  return std::nullopt;
}

}  // namespace carflow::kernels
