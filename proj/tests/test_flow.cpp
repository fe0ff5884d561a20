#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "carflow/flow.hpp"
#include "oracles.hpp"

using namespace carflow;
using namespace carflow::flow;
using carflow::fock::FockOperator;
using carflow::fock::SpVector;
using lattice::ConeSpec;
using lattice::ModuleSpec;
using lattice::Window;

namespace {

FlowContext halfline_ctx(int upper = 7) {
  const ModuleSpec a = ModuleSpec::halfspaces(1, {{{1}, 0}});
  const ConeSpec p(1, {{1}});
  return make_context(a, p, Window{{0}, {upper}});
}

FlowContext halfplane_ctx() {
  const ModuleSpec a = ModuleSpec::halfspaces(2, {{{1, 1}, 0}});
  const ConeSpec p(2, {{1, 0}, {0, 1}});
  return make_context(a, p, Window{{-2, -2}, {2, 1}});
}

FlowContext quadrant_ctx() {
  const ModuleSpec a = ModuleSpec::halfspaces(2, {{{1, 0}, 0}, {{0, 1}, 0}});
  const ConeSpec p(2, {{1, 0}, {0, 1}});
  return make_context(a, p, Window{{0, 0}, {3, 2}});
}

SpVector delta(int n, int i) {
  SpVector f(n, cplx{});
  f[i] = 1.0;
  return f;
}

}  // namespace

TEST_CASE("flow at x = 0 is the identity endomorphism") {
  const FlowContext ctx = halfline_ctx();
  SplitMix64 rng(501);
  const FockOperator t = fock::creation(fock::random_sp_vector(rng, ctx.modes()));
  const FlowResult r = flow_action(ctx, {0}, t);
  CHECK(r.corner == (Mask{1} << ctx.modes()) - 1);
  CHECK(fock::distance(r.op, t) == 0.0);
}

TEST_CASE("flow of the identity is the corner projection") {
  const FlowContext ctx = halfline_ctx();
  const FlowResult r =
      flow_action(ctx, {2}, FockOperator::identity(ctx.modes()));
  for (Mask s = 0; s < r.op.source_dimension(); ++s) {
    const bool inside = !(s & ~r.corner);
    CHECK(r.op.entry(s, s) == (inside ? cplx{1.0} : cplx{0.0}));
    CHECK(r.op.column(s).size() == (inside ? 1u : 0u));
  }
}

TEST_CASE("flow moves a creation operator along the shift") {
  const FlowContext ctx = halfline_ctx();
  const FlowResult r = flow_action(ctx, {1}, fock::creation(delta(ctx.modes(), 0)));
  const FockOperator expect = fock::creation(delta(ctx.modes(), 1));
  CHECK((r.op - expect).restricted(r.corner, r.corner).frobenius() <= 1e-10);
}

TEST_CASE("defining relation") {
  const FlowContext ctx = halfline_ctx();
  CHECK(defining_relation_residual(ctx, {2}, SpVector(ctx.modes(), cplx{})) == 0.0);
  CHECK(defining_relation_residual(ctx, {2}, delta(ctx.modes(), 0)) <= 1e-10);

  SplitMix64 rng(502);
  const FlowContext hp = halfplane_ctx();
  const FlowResult probe =
      flow_action(hp, {1, 0}, FockOperator::identity(hp.modes()));
  SpVector f = fock::random_sp_vector(rng, hp.modes());
  for (int j = 0; j < hp.modes(); ++j)
    if (!((probe.valid_sources >> j) & 1)) f[j] = 0;
  CHECK(defining_relation_residual(hp, {1, 0}, f) <= 1e-10);

  // support escaping the window is rejected
  SpVector bad(ctx.modes(), cplx{});
  bad[ctx.modes() - 1] = 1.0;
  CHECK_THROWS_AS(defining_relation_residual(ctx, {2}, bad), WindowTooSmall);
}

TEST_CASE("semigroup law") {
  const FlowContext ctx = halfline_ctx();
  CHECK(semigroup_residual(ctx, {0}, {0}) == 0.0);
  CHECK(semigroup_residual(ctx, {1}, {2}) <= 1e-9);
  CHECK(semigroup_residual(halfplane_ctx(), {1, 0}, {0, 1}) <= 1e-9);
  CHECK(semigroup_residual(quadrant_ctx(), {1, 0}, {0, 1}) <= 1e-9);
}

TEST_CASE("flow is multiplicative on the valid corner") {
  const FlowContext ctx = halfline_ctx();
  SplitMix64 rng(503);
  const Point x{2};
  const FlowResult probe = flow_action(ctx, x, FockOperator::identity(ctx.modes()));
  Mask valid_masks_modes = probe.valid_sources;
  for (int trial = 0; trial < 5; ++trial) {
    FockOperator s = fock::creation(fock::random_sp_vector(rng, ctx.modes()))
                         .restricted(valid_masks_modes, valid_masks_modes);
    FockOperator t = fock::annihilation(fock::random_sp_vector(rng, ctx.modes()))
                         .restricted(valid_masks_modes, valid_masks_modes);
    const FockOperator lhs = flow_action(ctx, x, s * t).op;
    const FockOperator rhs = flow_action(ctx, x, s).op * flow_action(ctx, x, t).op;
    CHECK((lhs - rhs).restricted(probe.corner, probe.corner).frobenius() <= 1e-9);
  }
}

TEST_CASE("flow commutes with adjoints, entrywise exactly") {
  const FlowContext ctx = halfline_ctx();
  SplitMix64 rng(504);
  const FockOperator t = fock::creation(fock::random_sp_vector(rng, ctx.modes()));
  const FockOperator lhs = flow_action(ctx, {2}, t.adjoint()).op;
  const FockOperator rhs = flow_action(ctx, {2}, t).op.adjoint();
  CHECK(fock::distance(lhs, rhs) == 0.0);
}

TEST_CASE("flow relations hold in three dimensions") {
  const ModuleSpec octant = ModuleSpec::halfspaces(
      3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}});
  const ConeSpec p(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const FlowContext ctx = make_context(octant, p, Window{{0, 0, 0}, {1, 1, 1}});
  REQUIRE(ctx.modes() == 8);
  SplitMix64 rng(508);
  const FlowResult probe =
      flow_action(ctx, {1, 0, 0}, FockOperator::identity(ctx.modes()));
  fock::SpVector f = fock::random_sp_vector(rng, ctx.modes());
  for (int j = 0; j < ctx.modes(); ++j)
    if (!((probe.valid_sources >> j) & 1)) f[j] = 0;
  CHECK(defining_relation_residual(ctx, {1, 0, 0}, f) <= 1e-10);
  CHECK(semigroup_residual(ctx, {1, 0, 0}, {0, 0, 1}) <= 1e-9);
}

TEST_CASE("intertwiner table: twisted embeddings intertwine, literal flips on odd parity") {
  const FlowContext ctx = halfline_ctx();
  const Point x{2};
  const product::Fiber fib = product::fiber(ctx.rep, x, ctx.window);
  SplitMix64 rng(505);

  // the vacuum embedding intertwines under both conventions
  for (product::Convention c :
       {product::Convention::literal, product::Convention::parity_twisted}) {
    const product::Embedding t =
        product::left_embedding(ctx.ambient, product::vacuum_element(fib), c);
    for (const IntertwinerRow& row :
         intertwiner_residuals(ctx, x, t.op, t.valid_sources))
      CHECK(row.residual <= 1e-10);
  }

  // literal embeddings of odd-parity vectors anticommute with the flow of a
  // generator, so the defect is exactly twice the compressed product norm
  const product::PSElement odd = product::random_homogeneous_element(rng, fib, 1);
  const product::Embedding lit =
      product::left_embedding(ctx.ambient, odd, product::Convention::literal);
  const Mask all = (Mask{1} << ctx.modes()) - 1;
  double worst_literal = 0;
  for (int m = 0; m < ctx.modes(); ++m) {
    if (!((lit.valid_sources >> m) & 1)) continue;
    fock::SpVector dm(ctx.modes(), cplx{});
    dm[m] = 1.0;
    for (const FockOperator& g : {fock::annihilation(dm), fock::creation(dm)}) {
      const FockOperator lhs = flow_action(ctx, x, g).op * lit.op;
      const FockOperator rhs = lit.op * g;
      const double defect =
          (lhs - rhs).restricted(all, lit.valid_sources).frobenius();
      const double scale = (rhs + rhs).restricted(all, lit.valid_sources).frobenius();
      CHECK(defect == doctest::Approx(scale).epsilon(1e-10));
      worst_literal = std::max(worst_literal, defect);
    }
  }
  CHECK(worst_literal > 0.1);  // the sign flip is an O(1) defect

  const product::Embedding tw =
      product::left_embedding(ctx.ambient, odd, product::Convention::parity_twisted);
  for (const IntertwinerRow& row :
       intertwiner_residuals(ctx, x, tw.op, tw.valid_sources))
    CHECK(row.residual <= 1e-10);

  // even-parity literal embeddings intertwine as well
  const product::PSElement even = product::random_homogeneous_element(rng, fib, 0);
  const product::Embedding lit_even =
      product::left_embedding(ctx.ambient, even, product::Convention::literal);
  for (const IntertwinerRow& row :
       intertwiner_residuals(ctx, x, lit_even.op, lit_even.valid_sources))
    CHECK(row.residual <= 1e-10);
}

TEST_CASE("symmetry witness check on the half line and the half plane") {
  SplitMix64 rng(506);
  const ModuleSpec line = ModuleSpec::halfspaces(1, {{{1}, 0}});
  const WitnessCheck wl = symmetry_witness_check(
      line, {-1}, Window{{-6}, {11}}, Window{{0}, {11}}, {{1}, {2}}, rng, 50);
  CHECK(wl.max_residual <= 1e-10);
  CHECK(wl.max_norm_defect <= 1e-12);

  const ModuleSpec plane = ModuleSpec::halfspaces(2, {{{1, 1}, 0}});
  const WitnessCheck wp = symmetry_witness_check(
      plane, {-1, 0}, Window{{-4, -4}, {4, 4}}, Window{{-2, -2}, {2, 2}},
      {{1, 0}, {0, 1}}, rng, 50);
  CHECK(wp.max_residual <= 1e-10);

  // a wrong witness is rejected up front
  CHECK_THROWS_AS(symmetry_witness_check(line, {3}, Window{{-6}, {11}},
                                         Window{{0}, {11}}, {{1}}, rng, 5),
                  std::invalid_argument);
}

TEST_CASE("vacuum pair gives an exactly zero witness residual") {
  SplitMix64 rng(507);
  const ModuleSpec line = ModuleSpec::halfspaces(1, {{{1}, 0}});
  const lattice::ShiftRep rep = lattice::ShiftRep::forward(line);
  const product::PSElement v1 =
      product::vacuum_element(product::fiber(rep, {1}, Window{{0}, {11}}));
  const product::PSElement v2 =
      product::vacuum_element(product::fiber(rep, {2}, Window{{0}, {11}}));
  const product::PSElement lhs =
      product::symmetry_automorphism(product::forward_product(v1, v2), {-1});
  const product::PSElement rhs = product::forward_product(
      product::symmetry_automorphism(v2, {-1}), product::symmetry_automorphism(v1, {-1}));
  CHECK(product::element_distance(lhs, rhs) == 0.0);
}

TEST_CASE("flow over a non-axis simplicial cone") {
  // P generated by (1,0) and (1,1); A is the cone itself as a translate module
  const ConeSpec p(2, {{1, 0}, {1, 1}});
  REQUIRE(p.validate().ok());
  const ModuleSpec a = ModuleSpec::translates(p, {{0, 0}});
  REQUIRE(lattice::validate_module(a, p, Window{{-2, -2}, {4, 4}}).ok());

  const FlowContext ctx = make_context(a, p, Window{{0, 0}, {3, 3}});
  REQUIRE(ctx.modes() == 10);  // points with 0 <= v <= u <= 3

  const Point x{1, 1};
  REQUIRE(p.contains(x));
  CHECK(lattice::kernel_basis(a, x, ctx.window) ==
        std::vector<Point>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});

  SplitMix64 rng(509);
  const FlowResult probe = flow_action(ctx, x, FockOperator::identity(ctx.modes()));
  fock::SpVector f = fock::random_sp_vector(rng, ctx.modes());
  for (int j = 0; j < ctx.modes(); ++j)
    if (!((probe.valid_sources >> j) & 1)) f[j] = 0;
  CHECK(defining_relation_residual(ctx, x, f) <= 1e-10);
  CHECK(semigroup_residual(ctx, {1, 0}, {1, 1}) <= 1e-9);
}

TEST_CASE("on the range corner the flow matches dilation conjugation") {
  // big space l^2(Z cap [-3,5]), carrier modes [0,5]; the flow of T compressed
  // to masks over translated valid modes must equal J* G(U_x) J T J* G(U_x)* J
  // with J the mode injection and G(U_x) the lifted bilateral shift
  const Window big{{-3}, {5}};
  const FlowContext ctx = halfline_ctx(5);
  const Point x{2};

  const auto big_points = big.points();
  const int nbig = static_cast<int>(big_points.size());
  std::vector<int> inject(ctx.modes(), -1);
  for (int j = 0; j < ctx.modes(); ++j) {
    const auto it = std::lower_bound(big_points.begin(), big_points.end(),
                                     ctx.ambient.modes[j]);
    inject[j] = static_cast<int>(it - big_points.begin());
  }
  const FockOperator j_op = fock::lift_mode_map(inject, nbig);

  const lattice::LatticeOperator u = lattice::dilation_shift(x, big);
  std::vector<int> umap(nbig, -1);
  for (int m = 0; m < nbig; ++m)
    if (u.valid[m]) umap[m] = u.image[m];
  const FockOperator g_u = fock::lift_mode_map(umap, nbig);

  SplitMix64 rng(510);
  const FockOperator t = fock::creation(fock::random_sp_vector(rng, ctx.modes()));
  const FockOperator via_dilation =
      j_op.adjoint() * g_u * j_op * t * j_op.adjoint() * g_u.adjoint() * j_op;

  const FlowResult via_flow = flow_action(ctx, x, t);
  // range corner: masks supported on the translated valid modes only
  Mask range_corner = 0;
  const FlowResult probe = flow_action(ctx, x, FockOperator::identity(ctx.modes()));
  for (int j = 0; j < ctx.modes(); ++j)
    if ((probe.valid_sources >> j) & 1) {
      const int shifted = ctx.ambient.mode_index(lattice::add(ctx.ambient.modes[j], x));
      REQUIRE(shifted >= 0);
      range_corner |= Mask{1} << shifted;
    }
  CHECK((via_flow.op - via_dilation)
            .restricted(range_corner, range_corner)
            .frobenius() <= 1e-12);
}
