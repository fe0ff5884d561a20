#include "carflow/product.hpp"

#include <algorithm>

#include "carflow/kernels.hpp"

namespace carflow::product {

using lattice::add;
using lattice::negate;
using lattice::sub;
using lattice::to_string;

Fiber fiber(const lattice::ShiftRep& rep, const Point& x, const lattice::Window& w,
            int max_modes) {
  Fiber f;
  f.shift = x;
  f.direction = rep.direction;
  f.modes = rep.kernel_points(x, w);
  if (static_cast<int>(f.modes.size()) > max_modes)
    throw CapExceeded("fiber at " + to_string(x) + " needs " +
                      std::to_string(f.modes.size()) + " modes, cap is " +
                      std::to_string(max_modes) +
                      "; use a smaller window or shift");
  return f;
}

PSElement element(Fiber f, fock::FockVector v) {
  require(v.modes() == f.mode_count(),
          "product element: vector mode count does not match the fiber");
  return {std::move(f), std::move(v)};
}

PSElement vacuum_element(Fiber f) {
  fock::FockVector v = fock::vacuum(f.mode_count());
  return {std::move(f), std::move(v)};
}

PSElement random_element(SplitMix64& rng, Fiber f) {
  fock::FockVector v = fock::random_vector(rng, f.mode_count());
  return {std::move(f), std::move(v)};
}

PSElement random_homogeneous_element(SplitMix64& rng, Fiber f, int parity) {
  fock::FockVector v = fock::random_homogeneous(rng, f.mode_count(), parity);
  return {std::move(f), std::move(v)};
}

namespace {

std::vector<int> positions_in(const std::vector<Point>& sub,
                              const std::vector<Point>& super, const char* who) {
  std::vector<int> pos(sub.size());
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto it = std::lower_bound(super.begin(), super.end(), sub[i]);
    require(it != super.end() && *it == sub[i],
            std::string(who) + ": mode " + to_string(sub[i]) + " missing");
    pos[i] = static_cast<int>(it - super.begin());
  }
  return pos;
}

}  // namespace

PSElement forward_product(const PSElement& e1, const PSElement& e2) {
  require(e1.fib.direction == e2.fib.direction,
          "forward_product: elements live over different representations");
  const int dir = e1.fib.direction;
  const Point& x = e1.fib.shift;

  std::vector<Point> translated(e2.fib.modes.size());
  for (std::size_t j = 0; j < translated.size(); ++j)
    translated[j] = dir > 0 ? add(e2.fib.modes[j], x) : sub(e2.fib.modes[j], x);

  Fiber target;
  target.shift = add(x, e2.fib.shift);
  target.direction = dir;
  target.modes = e1.fib.modes;
  target.modes.insert(target.modes.end(), translated.begin(), translated.end());
  std::sort(target.modes.begin(), target.modes.end());
  require(std::adjacent_find(target.modes.begin(), target.modes.end()) ==
              target.modes.end(),
          "forward_product: kernel slices are not disjoint");
  check_mode_cap(target.mode_count(), "forward_product");

  const std::vector<int> pos1 = positions_in(e1.fib.modes, target.modes, "forward_product");
  const std::vector<int> pos2 = positions_in(translated, target.modes, "forward_product");

  fock::FockVector out(target.mode_count());
  std::vector<int> seq;
  for (const auto& [m1, a1] : e1.vec.amplitudes()) {
    for (const auto& [m2, a2] : e2.vec.amplitudes()) {
      seq.clear();
      Mask dst = 0;
      for (Mask rest = m1; rest; rest &= rest - 1) {
        const int p = pos1[std::countr_zero(rest)];
        seq.push_back(p);
        dst |= Mask{1} << p;
      }
      for (Mask rest = m2; rest; rest &= rest - 1) {
        const int p = pos2[std::countr_zero(rest)];
        seq.push_back(p);
        dst |= Mask{1} << p;
      }
      out.add(dst, a1 * a2 * static_cast<double>(fock::reorder_sign(seq)));
    }
  }
  return {std::move(target), std::move(out)};
}

PSElement opposite_product(const PSElement& e1, const PSElement& e2) {
  return forward_product(e2, e1);
}

double element_distance(const PSElement& e1, const PSElement& e2) {
  require(e1.fib.shift == e2.fib.shift && e1.fib.direction == e2.fib.direction &&
              e1.fib.modes == e2.fib.modes,
          "element_distance: fibers differ");
  fock::FockVector d = e1.vec;
  d -= e2.vec;
  return d.norm();
}

int Ambient::mode_index(const Point& p) const {
  auto it = std::lower_bound(modes.begin(), modes.end(), p);
  if (it == modes.end() || *it != p) return -1;
  return static_cast<int>(it - modes.begin());
}

Ambient make_ambient(lattice::ShiftRep rep, lattice::Window w, int max_modes) {
  Ambient h{std::move(rep), std::move(w), {}};
  h.modes = h.rep.carrier_points(h.window);
  if (static_cast<int>(h.modes.size()) > max_modes)
    throw CapExceeded("ambient space needs " + std::to_string(h.modes.size()) +
                      " modes, cap is " + std::to_string(max_modes) +
                      "; use a smaller window");
  return h;
}

Embedding left_embedding(const Ambient& h, const PSElement& e, Convention c) {
  require(e.fib.direction == h.rep.direction,
          "left_embedding: element and ambient representation disagree");
  const int n = h.mode_count();
  const Point& x = e.fib.shift;

  const std::vector<int> kernel_pos =
      positions_in(e.fib.modes, h.modes, "left_embedding");
  Mask kernel_mask = 0;
  for (int p : kernel_pos) kernel_mask |= Mask{1} << p;

  // translation map on ambient modes; lexicographic order is preserved
  std::vector<int> shifted(n, -1);
  Mask valid = 0;
  for (int j = 0; j < n; ++j) {
    const Point t = h.rep.translate(h.modes[j], x);
    if (!h.window.contains(t)) continue;
    const int idx = h.mode_index(t);
    require(idx >= 0, "left_embedding: carrier not invariant under the shift");
    shifted[j] = idx;
    valid |= Mask{1} << j;
  }

  int twist = 0;
  if (c == Convention::parity_twisted) {
    const auto p = e.vec.parity();
    require(p.has_value(),
            "left_embedding: parity-twisted convention requires a "
            "parity-homogeneous fiber vector");
    twist = *p;
  }

  Embedding emb{fock::FockOperator(n, n), valid, kernel_mask};
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    if (s & ~valid) continue;
    Mask img = 0;
    for (Mask rest = s; rest; rest &= rest - 1)
      img |= Mask{1} << shifted[std::countr_zero(rest)];
    const double tw = (twist && (fock::weight(s) & 1)) ? -1.0 : 1.0;
    fock::FockOperator::Column col;
    for (const auto& [fm, amp] : e.vec.amplitudes()) {
      Mask dk = 0;
      for (Mask rest = fm; rest; rest &= rest - 1)
        dk |= Mask{1} << kernel_pos[std::countr_zero(rest)];
      const int sign = fock::interleave_sign(dk, img);
      col.push_back({dk | img, amp * tw * static_cast<double>(sign)});
    }
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    emb.op.set_column(s, std::move(col));
  }
  return emb;
}

SignCheck multiplicativity_check(const Ambient& h, const PSElement& e1,
                                 const PSElement& e2, Convention c, double tol) {
  // columns on which both embedding routes are exact
  const Point& x = e1.fib.shift;
  const Point& y = e2.fib.shift;
  Mask combined_valid = 0;
  for (int j = 0; j < h.mode_count(); ++j) {
    const Point t1 = h.rep.translate(h.modes[j], y);
    if (!h.window.contains(t1)) continue;
    const Point t2 = h.rep.translate(t1, x);
    if (!h.window.contains(t2)) continue;
    combined_valid |= Mask{1} << j;
  }
  const Mask all = (Mask{1} << h.mode_count()) - 1;

  const Embedding t1 = left_embedding(h, e1, c);
  const Embedding t2 = left_embedding(h, e2, c);
  const Embedding t12 = left_embedding(h, forward_product(e1, e2), c);
  const fock::FockOperator lhs = (t1.op * t2.op).restricted(all, combined_valid);
  const fock::FockOperator rhs = t12.op.restricted(all, combined_valid);
  fock::FockOperator plus = lhs;
  plus -= rhs;
  fock::FockOperator minus = lhs;
  minus += rhs;
  const double rp = plus.frobenius();
  const double rm = minus.frobenius();
  SignCheck check{0, std::min(rp, rm)};
  if (rp <= tol)
    check.sign = +1;
  else if (rm <= tol)
    check.sign = -1;
  return check;
}

SignTable multiplicativity_table(const Ambient& h, const Point& x, const Point& y,
                                 Convention c, SplitMix64& rng, double tol) {
  const Fiber fx = fiber(h.rep, x, h.window);
  // slice the right fiber on the core sub-window so its translate by x stays
  // inside the ambient
  const lattice::Window core =
      h.window.core(h.rep.direction > 0 ? x : negate(x));
  const Fiber fy = fiber(h.rep, y, core);
  require(fx.mode_count() >= 1 && fy.mode_count() >= 1,
          "multiplicativity_table: fibers need at least one mode for odd parity");

  SignTable table{c, {}};
  for (int p1 = 0; p1 <= 1; ++p1) {
    for (int p2 = 0; p2 <= 1; ++p2) {
      const PSElement e1 = random_homogeneous_element(rng, fx, p1);
      const PSElement e2 = random_homogeneous_element(rng, fy, p2);
      const SignCheck check = multiplicativity_check(h, e1, e2, c, tol);
      table.entries.push_back({p1, p2, check.sign, check.residual});
    }
  }
  return table;
}

namespace {

// Relabel the fiber points of an element through an injective point map,
// re-sorting the image and carrying the permutation signs on every mask.
// graded_twist additionally multiplies the N-particle sector by
// (-1)^(N(N-1)/2), the Klein sign that turns a factor swap of the graded
// tensor product into an exact identity.
PSElement relabel(const PSElement& e, const std::vector<Point>& image_points,
                  int new_direction, bool graded_twist) {
  const std::size_t k = image_points.size();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return image_points[a] < image_points[b];
  });

  Fiber target;
  target.shift = e.fib.shift;
  target.direction = new_direction;
  target.modes.resize(k);
  std::vector<int> new_pos(k);  // old mode index -> new mode index
  for (std::size_t r = 0; r < k; ++r) {
    target.modes[r] = image_points[order[r]];
    new_pos[order[r]] = static_cast<int>(r);
  }
  require(std::adjacent_find(target.modes.begin(), target.modes.end()) ==
              target.modes.end(),
          "relabel: point map is not injective");

  fock::FockVector out(static_cast<int>(k));
  std::vector<int> seq;
  for (const auto& [m, a] : e.vec.amplitudes()) {
    seq.clear();
    Mask dst = 0;
    for (Mask rest = m; rest; rest &= rest - 1) {
      const int p = new_pos[std::countr_zero(rest)];
      seq.push_back(p);
      dst |= Mask{1} << p;
    }
    int sign = fock::reorder_sign(seq);
    if (graded_twist) {
      const int w = fock::weight(m);
      if (((w * (w - 1)) / 2) & 1) sign = -sign;
    }
    out.add(dst, a * static_cast<double>(sign));
  }
  return {std::move(target), std::move(out)};
}

}  // namespace

PSElement opposite_transport(const PSElement& e) {
  require(e.fib.direction == +1, "opposite_transport: expected a forward-fiber element");
  std::vector<Point> image(e.fib.modes.size());
  for (std::size_t i = 0; i < image.size(); ++i)
    image[i] = sub(e.fib.modes[i], e.fib.shift);
  return relabel(e, image, -1, /*graded_twist=*/true);
}

PSElement reflect_to_opposite_module(const PSElement& e) {
  require(e.fib.direction == -1, "reflect_to_opposite_module: expected an opposite-fiber element");
  std::vector<Point> image(e.fib.modes.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = negate(e.fib.modes[i]);
  return relabel(e, image, +1, /*graded_twist=*/false);
}

double transport_antihom_residual(const PSElement& e1, const PSElement& e2) {
  const PSElement lhs = opposite_transport(forward_product(e1, e2));
  const PSElement rhs =
      forward_product(opposite_transport(e2), opposite_transport(e1));
  return element_distance(lhs, rhs);
}

PSElement symmetry_automorphism(const PSElement& e, const Point& z) {
  require(e.fib.direction == +1, "symmetry_automorphism: expected a forward-fiber element");
  const Point c = add(e.fib.shift, z);
  std::vector<Point> image(e.fib.modes.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = sub(c, e.fib.modes[i]);
  return relabel(e, image, +1, /*graded_twist=*/true);
}

}  // namespace carflow::product
