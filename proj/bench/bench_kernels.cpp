// Timings of the OpenMP kernels against their serial reference twins.
// Usage: bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <functional>

#include "carflow/flow.hpp"
#include "carflow/kernels.hpp"

using namespace carflow;

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

volatile std::size_t g_sink = 0;

void row(const char* name, double parallel_ms, double serial_ms) {
  std::printf("  %-28s %10.2f ms %10.2f ms %8.2fx\n", name, parallel_ms, serial_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("carflow kernel benchmark (%d threads%s, best of %d)\n",
              kernels::max_threads(), kernels::parallel_enabled() ? "" : ", serial build",
              repeats);
  std::printf("  %-28s %13s %13s %9s\n", "kernel", "parallel", "reference", "speedup");

  SplitMix64 rng(42);

  {
    const int n = 12;
    const fock::SpVector f = fock::random_sp_vector(rng, n);
    const fock::SpVector g = fock::random_sp_vector(rng, n);
    const fock::FockOperator a = fock::creation(f);
    const fock::FockOperator b = fock::annihilation(g);
    std::size_t sink = 0;
    const double tp = time_ms([&] { sink = sink + kernels::compose(a, b).nnz(); }, repeats);
    const double ts =
        time_ms([&] { sink = sink + kernels::compose_reference(a, b).nnz(); }, repeats);
    g_sink = static_cast<std::size_t>(sink);
    row("compose (n=12)", tp, ts);
  }

  {
    const DenseMatrix w = random_isometry(rng, 11, 7);
    std::size_t sink = 0;
    const double tp = time_ms([&] { sink = sink + kernels::sq_minors(w).nnz(); }, repeats);
    const double ts =
        time_ms([&] { sink = sink + kernels::sq_minors_reference(w).nnz(); }, repeats);
    g_sink = static_cast<std::size_t>(sink);
    row("second quantization 11x7", tp, ts);
  }

  {
    lattice::Window box{{-8, -8, -8}, {8, 8, 8}};
    lattice::Window verify{{-6, -6, -6}, {6, 6, 6}};
    const lattice::ModuleSpec a = lattice::ModuleSpec::halfspaces(
        3, {{{1, 1, 1}, 0}, {{1, 0, 1}, 0}});
    const lattice::ModuleSpec b = lattice::ModuleSpec::halfspaces(
        3, {{{1, 1, 1}, 2}, {{1, 0, 1}, 1}});
    const auto probes = verify.points();
    const auto pred = [&](const Point& z) {
      for (const Point& w : probes)
        if (b.contains(w) != a.contains(lattice::sub(w, z))) return false;
      return true;
    };
    const auto candidates = box.points();
    bool sink = false;
    const double tp = time_ms(
        [&] { sink = sink != kernels::first_match(candidates, pred).has_value(); },
        repeats);
    const double ts = time_ms(
        [&] { sink = sink != kernels::first_match_reference(candidates, pred).has_value(); },
        repeats);
    g_sink = static_cast<std::size_t>(sink);
    row("witness search d=3", tp, ts);
  }

  {
    const lattice::ConeSpec cone(1, {{1}});
    const lattice::ModuleSpec mod = lattice::ModuleSpec::halfspaces(1, {{{1}, 0}});
    lattice::Window w{{0}, {11}};
    const flow::FlowContext ctx = flow::make_context(mod, cone, w);
    fock::SpVector f(ctx.modes(), cplx{});
    f[0] = 1.0;
    const fock::FockOperator t = fock::creation(f);
    std::size_t sink = 0;
    const double tp =
        time_ms([&] { sink = sink + flow::flow_action(ctx, {6}, t).op.nnz(); }, repeats);
    // the expansion dominated by compose + tree_sum; reference = serial twins
    const double ts = time_ms(
        [&] {
          const product::Fiber fib = product::fiber(ctx.rep, {6}, ctx.window);
          std::vector<fock::FockOperator> terms;
          for (Mask m = 0; m < (Mask{1} << fib.mode_count()); ++m) {
            fock::FockVector v(fib.mode_count());
            v.set(m, 1.0);
            const product::Embedding s = product::left_embedding(
                ctx.ambient, product::element(fib, std::move(v)),
                product::Convention::parity_twisted);
            terms.push_back(kernels::compose_reference(
                kernels::compose_reference(s.op, t), s.op.adjoint()));
          }
          sink = sink + kernels::tree_sum_reference(std::move(terms), ctx.modes(), ctx.modes())
                      .nnz();
        },
        repeats);
    g_sink = static_cast<std::size_t>(sink);
    row("flow expansion (12 modes, x=6)", tp, ts);
  }

  return 0;
}
