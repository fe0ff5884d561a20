#include "carflow/flow.hpp"

#include <algorithm>

namespace carflow::flow {

using fock::FockOperator;
using lattice::add;
using lattice::sub;
using lattice::to_string;

FlowContext make_context(const lattice::ModuleSpec& a, const lattice::ConeSpec& p,
                         const lattice::Window& w, int max_modes) {
  lattice::ShiftRep rep = lattice::ShiftRep::forward(a);
  product::Ambient ambient = product::make_ambient(rep, w, max_modes);
  return {std::move(rep), p, w, std::move(ambient)};
}

namespace {

struct ShiftData {
  std::vector<int> shifted;  // ambient mode -> translated mode, -1 outside
  Mask valid = 0;            // modes whose translate stays in the window
  Mask kernel = 0;           // ambient positions of the kernel slice
  Mask corner = 0;           // kernel | image of valid
};

Mask shift_mask(const ShiftData& d, Mask source_modes) {
  Mask out = 0;
  for (Mask rest = source_modes; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    if (d.shifted[j] >= 0) out |= Mask{1} << d.shifted[j];
  }
  return out;
}

ShiftData shift_data(const FlowContext& ctx, const Point& x) {
  const auto& h = ctx.ambient;
  ShiftData d;
  d.shifted.assign(h.mode_count(), -1);
  for (int j = 0; j < h.mode_count(); ++j) {
    const Point t = h.rep.translate(h.modes[j], x);
    if (!h.window.contains(t)) continue;
    const int idx = h.mode_index(t);
    require(idx >= 0, "flow: carrier not invariant under the shift");
    d.shifted[j] = idx;
    d.valid |= Mask{1} << j;
  }
  for (const Point& kp : h.rep.kernel_points(x, h.window)) {
    const int idx = h.mode_index(kp);
    d.kernel |= Mask{1} << idx;
  }
  d.corner = d.kernel | shift_mask(d, d.valid);
  return d;
}

Mask shift_image(const ShiftData& d, Mask s) {
  Mask out = 0;
  for (Mask rest = s; rest; rest &= rest - 1)
    out |= Mask{1} << d.shifted[std::countr_zero(rest)];
  return out;
}

// all submasks of `space` in ascending order
std::vector<Mask> submasks_of(Mask space) {
  std::vector<Mask> out;
  out.reserve(std::size_t{1} << fock::weight(space));
  Mask s = 0;
  while (true) {
    out.push_back(s);
    if (s == space) break;
    s = (s - space) & space;
  }
  return out;
}

}  // namespace

// The product-system expansion sum_F S_F T S_F^* over the parity-twisted
// embeddings S_F of the fiber's Fock basis.  The kernel-versus-image split of
// every mask is unique, so each output entry receives exactly one
// contribution: the expansion is a signed scatter, embarrassingly parallel
// over the fiber basis and bit-identical to materializing the embeddings.
FlowResult flow_action(const FlowContext& ctx, const Point& x, const FockOperator& t) {
  require(ctx.cone.contains(x), "flow_action: " + to_string(x) + " is not in the cone");
  require(t.source_modes() == ctx.modes() && t.target_modes() == ctx.modes(),
          "flow_action: operator does not act on the ambient Fock space");
  const ShiftData d = shift_data(ctx, x);
  if (fock::weight(d.kernel) > kMaxFockModes)
    throw CapExceeded("flow_action: fiber at " + to_string(x) + " exceeds the cap");

  FockOperator out(ctx.modes(), ctx.modes());
  const std::vector<Mask> fiber_masks = submasks_of(d.kernel);
  const std::vector<Mask> source_masks = submasks_of(d.valid);

  const long long nf = static_cast<long long>(fiber_masks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (nf > 8)
#endif
  for (long long fi = 0; fi < nf; ++fi) {
    const Mask f = fiber_masks[fi];
    const int pf = fock::weight(f) & 1;
    FockOperator::Column col;
    for (Mask s : source_masks) {
      const auto& in = t.column(s);
      if (in.empty()) continue;
      const Mask s_img = shift_image(d, s);
      const int sign_s = fock::interleave_sign(f, s_img) *
                         ((pf && (fock::weight(s) & 1)) ? -1 : 1);
      col.clear();
      for (const auto& [dst, v] : in) {
        if (dst & ~d.valid) continue;
        const Mask d_img = shift_image(d, dst);
        const int sign_d = fock::interleave_sign(f, d_img) *
                           ((pf && (fock::weight(dst) & 1)) ? -1 : 1);
        col.push_back({f | d_img, static_cast<double>(sign_s * sign_d) * v});
      }
      if (!col.empty()) out.set_column(f | s_img, col);
    }
  }
  return {std::move(out), d.corner, d.valid};
}

double defining_relation_residual(const FlowContext& ctx, const Point& x,
                                  const fock::SpVector& f) {
  require(static_cast<int>(f.size()) == ctx.modes(),
          "defining_relation: vector does not match the ambient modes");
  const ShiftData d = shift_data(ctx, x);
  fock::SpVector g(f.size(), cplx{});
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] == cplx{}) continue;
    if (d.shifted[j] < 0)
      throw WindowTooSmall("defining_relation: support of f escapes the window "
                           "under translation by " + to_string(x));
    g[d.shifted[j]] = f[j];
  }
  const FlowResult lhs = flow_action(ctx, x, fock::annihilation(f));
  const FockOperator rhs = fock::annihilation(g);
  return (lhs.op - rhs).restricted(lhs.corner, lhs.corner).frobenius();
}

double semigroup_residual(const FlowContext& ctx, const Point& x, const Point& y) {
  const ShiftData dx = shift_data(ctx, x);
  const ShiftData dy = shift_data(ctx, y);
  const ShiftData dxy = shift_data(ctx, add(x, y));

  // corner where the nested and the direct expansion are both exact
  const Mask corner = dxy.corner & (dx.kernel | shift_mask(dx, dy.corner & dx.valid));

  // generator modes whose full translation path stays inside the window
  std::vector<int> gen_modes;
  for (int m = 0; m < ctx.modes(); ++m) {
    if (!((dy.valid >> m) & 1)) continue;
    if (!((dxy.valid >> m) & 1)) continue;
    if (!((dx.valid >> dy.shifted[m]) & 1)) continue;
    gen_modes.push_back(m);
  }

  double worst = 0;
  for (int m : gen_modes) {
    fock::SpVector delta(ctx.modes(), cplx{});
    delta[m] = 1.0;
    const FockOperator ops[2] = {fock::annihilation(delta), fock::creation(delta)};
    for (const FockOperator& g : ops) {
      const FlowResult inner = flow_action(ctx, y, g);
      const FockOperator inner_c = inner.op.restricted(inner.corner, inner.corner);
      const FlowResult outer = flow_action(ctx, x, inner_c);
      const FlowResult direct = flow_action(ctx, add(x, y), g);
      const double r =
          (outer.op - direct.op).restricted(corner, corner).frobenius();
      worst = std::max(worst, r);
    }
  }
  return worst;
}

std::vector<IntertwinerRow> intertwiner_residuals(const FlowContext& ctx, const Point& x,
                                                  const FockOperator& t,
                                                  Mask t_valid_sources) {
  const Mask all = (Mask{1} << ctx.modes()) - 1;
  std::vector<IntertwinerRow> rows;
  for (int m = 0; m < ctx.modes(); ++m) {
    if (!((t_valid_sources >> m) & 1)) continue;
    fock::SpVector delta(ctx.modes(), cplx{});
    delta[m] = 1.0;
    const FockOperator ann = fock::annihilation(delta);
    const FockOperator cre = fock::creation(delta);
    const std::pair<const char*, const FockOperator*> gens[2] = {{"a", &ann},
                                                                 {"a*", &cre}};
    for (const auto& [label, g] : gens) {
      const FlowResult bg = flow_action(ctx, x, *g);
      const FockOperator lhs = bg.op * t;
      const FockOperator rhs = t * *g;
      const double r =
          (lhs - rhs).restricted(all, t_valid_sources).frobenius();
      rows.push_back({std::string(label) + "(" + std::to_string(m) + ")", r});
    }
  }
  return rows;
}

WitnessCheck symmetry_witness_check(const lattice::ModuleSpec& a, const Point& z,
                                    const lattice::Window& verify,
                                    const lattice::Window& fiber_window,
                                    const std::vector<Point>& shifts,
                                    SplitMix64& rng, int pairs, int max_modes) {
  const lattice::ModuleSpec opp = a.opposite();
  for (const Point& w : verify.points())
    require(a.contains(w) == opp.contains(sub(w, z)),
            "symmetry witness: z = " + to_string(z) +
                " fails A = -(A^c) + z at " + to_string(w));
  require(!shifts.empty(), "symmetry witness: need at least one shift");

  const lattice::ShiftRep rep = lattice::ShiftRep::forward(a);
  std::vector<product::Fiber> fibers;
  fibers.reserve(shifts.size());
  for (const Point& x : shifts)
    fibers.push_back(product::fiber(rep, x, fiber_window, max_modes));

  WitnessCheck out{0.0, 0.0, pairs};
  for (int i = 0; i < pairs; ++i) {
    const product::Fiber& fx = fibers[rng.below(fibers.size())];
    const product::Fiber& fy = fibers[rng.below(fibers.size())];
    const product::PSElement e1 = product::random_element(rng, fx);
    const product::PSElement e2 = product::random_element(rng, fy);
    const product::PSElement lhs =
        product::symmetry_automorphism(product::forward_product(e1, e2), z);
    const product::PSElement rhs = product::forward_product(
        product::symmetry_automorphism(e2, z), product::symmetry_automorphism(e1, z));
    out.max_residual = std::max(out.max_residual, product::element_distance(lhs, rhs));
    out.max_norm_defect = std::max(
        out.max_norm_defect,
        std::abs(product::symmetry_automorphism(e1, z).norm() - e1.norm()));
  }
  return out;
}

}  // namespace carflow::flow
