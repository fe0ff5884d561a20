#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "carflow/fock.hpp"
#include "oracles.hpp"

using namespace carflow;
using namespace carflow::fock;

namespace {

SpVector basis_vec(int n, int i) {
  SpVector f(n, cplx{});
  f[i] = 1.0;
  return f;
}

FockVector basis_state(int n, Mask m) {
  FockVector v(n);
  v.set(m, 1.0);
  return v;
}

}  // namespace

TEST_CASE("vacuum") {
  CHECK(vacuum(0).amplitude(0) == cplx{1.0});
  CHECK(vacuum(0).dimension() == 1);
  CHECK(vacuum(3).dimension() == 8);
  for (int n = 0; n <= 10; ++n) {
    const FockVector omega = vacuum(n);
    CHECK(inner(omega, omega) == cplx{1.0});
  }
}

TEST_CASE("creation on the vacuum and on occupied modes") {
  const FockOperator a0 = creation(basis_vec(1, 0));
  const FockVector fromvac = a0.apply(vacuum(1));
  CHECK(fromvac.amplitude(0b1) == cplx{1.0});
  CHECK(fromvac.amplitudes().size() == 1);
  // f wedge f = 0
  CHECK(a0.apply(basis_state(1, 0b1)).norm() == 0.0);
}

TEST_CASE("creation sign: e1 into {0} over two modes") {
  const FockOperator a1 = creation(basis_vec(2, 1));
  const FockVector out = a1.apply(basis_state(2, 0b01));
  CHECK(out.amplitude(0b11) == cplx{-1.0});
  CHECK(out.amplitudes().size() == 1);
}

TEST_CASE("creation agrees with the wedge oracle on all basis states") {
  SplitMix64 rng(11);
  for (int n = 1; n <= 5; ++n) {
    const SpVector f = random_sp_vector(rng, n);
    const FockOperator op = creation(f);
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      const FockVector got = op.apply(basis_state(n, m));
      const FockVector want =
          oracle::to_fock(oracle::wedge_with(f, oracle::from_fock(basis_state(n, m))), n);
      FockVector diff = got;
      diff -= want;
      CHECK(diff.norm() <= 1e-14);
    }
  }
}

TEST_CASE("annihilation is the entrywise adjoint of creation") {
  SplitMix64 rng(12);
  const SpVector f = random_sp_vector(rng, 4);
  const FockOperator cre = creation(f);
  const FockOperator ann = annihilation(f);
  CHECK(oracle::dense_distance(ann, cre.adjoint()) == 0.0);
  // adjoint of adjoint is the original, entrywise
  CHECK(oracle::dense_distance(cre.adjoint().adjoint(), cre) == 0.0);
}

TEST_CASE("annihilation examples and antilinearity") {
  const SpVector e0 = basis_vec(1, 0);
  CHECK(annihilation(e0).apply(vacuum(1)).norm() == 0.0);
  const FockVector omega = annihilation(e0).apply(basis_state(1, 0b1));
  CHECK(omega.amplitude(0) == cplx{1.0});

  SplitMix64 rng13(13);
  SpVector f = random_sp_vector(rng13, 3);
  SpVector iff(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) iff[k] = cplx{0.0, 1.0} * f[k];
  FockOperator lhs = annihilation(iff);
  FockOperator rhs = annihilation(f);
  rhs *= cplx{0.0, -1.0};
  CHECK(distance(lhs, rhs) == 0.0);
}

TEST_CASE("CAR relations against the dense product oracle") {
  const int n = 2;
  const FockOperator a0 = annihilation(basis_vec(n, 0));
  const FockOperator c0 = creation(basis_vec(n, 0));
  const FockOperator a1 = annihilation(basis_vec(n, 1));

  const FockOperator id = FockOperator::identity(n);
  CHECK(distance(anticommutator(a0, c0), id) <= 1e-15);
  CHECK(anticommutator(a0, a1).frobenius() <= 1e-15);
  CHECK(anticommutator(FockOperator(n, n), FockOperator(n, n)).frobenius() == 0.0);

  // sparse composition agrees with the dense twin
  SplitMix64 rng(14);
  const FockOperator x = creation(random_sp_vector(rng, n));
  const FockOperator y = annihilation(random_sp_vector(rng, n));
  CHECK((oracle::to_dense(x * y) - oracle::dense_mul(x, y)).frobenius() <= 1e-14);
}

TEST_CASE("CAR relations for random vectors, n up to 10") {
  SplitMix64 rng(15);
  for (int n : {2, 5, 10}) {
    const FockOperator id = FockOperator::identity(n);
    for (int trial = 0; trial < 5; ++trial) {
      const SpVector f = random_sp_vector(rng, n);
      const SpVector g = random_sp_vector(rng, n);
      cplx fg = 0;
      for (int i = 0; i < n; ++i) fg += std::conj(f[i]) * g[i];
      FockOperator expect = id;
      expect *= fg;
      CHECK(distance(anticommutator(annihilation(f), creation(g)), expect) <= 1e-10);
      CHECK(anticommutator(annihilation(f), annihilation(g)).frobenius() <= 1e-10);
    }
  }
}

TEST_CASE("second quantization of the identity and the swap") {
  CHECK(distance(second_quantization(DenseMatrix::identity(3)),
                 FockOperator::identity(3)) == 0.0);

  DenseMatrix swap(2, 2);
  swap.at(0, 1) = 1.0;
  swap.at(1, 0) = 1.0;
  const FockOperator g = second_quantization(swap);
  CHECK(g.entry(0b11, 0b11) == cplx{-1.0});
  CHECK(g.entry(0b01, 0b10) == cplx{1.0});
}

TEST_CASE("second quantization rejects non-isometries") {
  DenseMatrix w(2, 2);
  w.at(0, 0) = 2.0;
  CHECK_THROWS_WITH_AS(second_quantization(w),
                       doctest::Contains("not an isometry"), std::invalid_argument);
}

TEST_CASE("second quantization agrees with the brute-force wedge oracle") {
  SplitMix64 rng(16);
  const DenseMatrix w = random_isometry(rng, 4, 2);
  const FockOperator g = second_quantization(w);
  const FockVector v = random_vector(rng, 2);
  const FockVector got = g.apply(v);
  const FockVector want = oracle::to_fock(oracle::apply_matrix(w, oracle::from_fock(v)), 4);
  FockVector diff = got;
  diff -= want;
  CHECK(diff.norm() <= 1e-10);
}

TEST_CASE("second quantization functoriality and adjoint compatibility") {
  SplitMix64 rng(17);
  const DenseMatrix w1 = random_isometry(rng, 5, 3);
  const DenseMatrix w2 = random_isometry(rng, 3, 2);
  CHECK(distance(second_quantization(w1 * w2),
                 second_quantization(w1) * second_quantization(w2)) <= 1e-10);

  const DenseMatrix u = random_isometry(rng, 3, 3);
  CHECK(distance(second_quantization(u).adjoint(), second_quantization(u.adjoint())) <=
        1e-12);
}

TEST_CASE("second quantization conserves particle number exactly") {
  SplitMix64 rng(18);
  const DenseMatrix w = random_isometry(rng, 5, 4);
  const FockOperator g = second_quantization(w);
  for (Mask s = 0; s < g.source_dimension(); ++s)
    for (const auto& [d, v] : g.column(s)) CHECK(weight(d) == weight(s));
}

TEST_CASE("wedge embedding") {
  CHECK(wedge_embed(vacuum(2), vacuum(3)).amplitude(0) == cplx{1.0});

  const FockVector left = basis_state(1, 0b1);
  const FockVector right = basis_state(1, 0b1);
  const FockVector both = wedge_embed(left, right);
  CHECK(both.modes() == 2);
  CHECK(both.amplitude(0b11) == cplx{1.0});

  SplitMix64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const FockVector u = random_vector(rng, 3);
    const FockVector v = random_vector(rng, 2);
    CHECK(wedge_embed(u, v).norm() == doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));
  }
}

TEST_CASE("wedge embedding is associative on basis triples") {
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q)
      for (int r = 0; r <= 3; ++r)
        for (Mask mp = 0; mp < (Mask{1} << p); ++mp)
          for (Mask mq = 0; mq < (Mask{1} << q); ++mq)
            for (Mask mr = 0; mr < (Mask{1} << r); ++mr) {
              const FockVector a = basis_state(p, mp);
              const FockVector b = basis_state(q, mq);
              const FockVector c = basis_state(r, mr);
              FockVector lhs = wedge_embed(wedge_embed(a, b), c);
              const FockVector rhs = wedge_embed(a, wedge_embed(b, c));
              lhs -= rhs;
              CHECK(lhs.norm() == 0.0);
            }
}

TEST_CASE("parity operator") {
  CHECK(distance(parity_operator(0), FockOperator::identity(0)) == 0.0);
  const FockOperator p = parity_operator(2);
  CHECK(p.entry(0b11, 0b11) == cplx{1.0});
  CHECK(p.entry(0b01, 0b01) == cplx{-1.0});

  SplitMix64 rng(20);
  const SpVector f = random_sp_vector(rng, 3);
  const FockOperator p3 = parity_operator(3);
  FockOperator conj = p3 * annihilation(f) * p3;
  FockOperator neg = annihilation(f);
  neg *= cplx{-1.0};
  CHECK(oracle::dense_distance(conj, neg) <= 1e-14);
}

TEST_CASE("parity of vectors") {
  CHECK(vacuum(3).parity() == 0);
  FockVector mixed(2);
  mixed.set(0b1, 1.0);
  mixed.set(0b11, 1.0);
  CHECK(!mixed.parity().has_value());
  SplitMix64 rng(21);
  CHECK(random_homogeneous(rng, 3, 1).parity() == 1);
}

TEST_CASE("mode cap is enforced") {
  CHECK_THROWS_AS(vacuum(15), CapExceeded);
  CHECK_THROWS_AS(FockOperator(15, 2), CapExceeded);
  CHECK_THROWS_AS(wedge_embed(vacuum(8), vacuum(8)), CapExceeded);
}

TEST_CASE("operator dimension mismatches are rejected") {
  const FockOperator a(3, 2);
  const FockOperator b(3, 3);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
  CHECK_THROWS_AS(a.apply(vacuum(3)), std::invalid_argument);
  CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
}
