#pragma once

#include <string>
#include <vector>

#include "carflow/product.hpp"

// The CAR flow as an endomorphism of the windowed operator algebra, realized
// by the product-system expansion beta_x(T) = sum_i S_i T S_i^* over the
// parity-twisted embeddings of a Fock basis of the fiber at x.  Every
// equality is asserted under compression to the exactly-represented corner,
// which is part of each result.
namespace carflow::flow {

struct FlowContext {
  lattice::ShiftRep rep;
  lattice::ConeSpec cone;
  lattice::Window window;
  product::Ambient ambient;

  int modes() const { return ambient.mode_count(); }
};

FlowContext make_context(const lattice::ModuleSpec& a, const lattice::ConeSpec& p,
                         const lattice::Window& w, int max_modes = kMaxFockModes);

struct FlowResult {
  fock::FockOperator op;
  Mask corner;         // masks supported here are computed exactly
  Mask valid_sources;  // single-particle modes translating inside the window
};

FlowResult flow_action(const FlowContext& ctx, const Point& x,
                       const fock::FockOperator& t);

// || P (beta_x(a(f)) - a(V_x f)) P ||  with P the corner projection.
// f must be supported on modes whose translate by x stays in the window.
double defining_relation_residual(const FlowContext& ctx, const Point& x,
                                  const fock::SpVector& f);

// max over generators a(delta_m), a(delta_m)^* of the compressed residual of
// beta_x(beta_y(g)) = beta_{x+y}(g); generators range over modes whose full
// translation path stays in the window.
double semigroup_residual(const FlowContext& ctx, const Point& x, const Point& y);

struct IntertwinerRow {
  std::string generator;  // "a(m)" or "a*(m)"
  double residual;
};

// Residuals of beta_x(S) T = T S per generator S; T is exact on source masks
// supported in t_valid_sources (use Embedding::valid_sources).
std::vector<IntertwinerRow> intertwiner_residuals(const FlowContext& ctx,
                                                  const Point& x,
                                                  const fock::FockOperator& t,
                                                  Mask t_valid_sources);

struct WitnessCheck {
  double max_residual;      // anti-multiplicativity over the sampled pairs
  double max_norm_defect;   // fiber-wise unitarity defect of psi
  int pairs;
};

// Verifies z on the window (throws when A != -(A^c) + z there), then samples
// random element pairs over fibers at the given shifts and measures
// psi(e1.e2) = psi(e2).psi(e1).
WitnessCheck symmetry_witness_check(const lattice::ModuleSpec& a, const Point& z,
                                    const lattice::Window& verify,
                                    const lattice::Window& fiber_window,
                                    const std::vector<Point>& shifts,
                                    SplitMix64& rng, int pairs,
                                    int max_modes = kMaxFockModes);

}  // namespace carflow::flow
