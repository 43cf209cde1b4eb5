#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "entseq/metrics.hpp"
#include "entseq/rng.hpp"
#include "entseq/su_algebra.hpp"
#include "entseq/types.hpp"

using namespace entseq;

namespace {

constexpr double kPi = std::numbers::pi;

using Matrix2 = Eigen::Matrix2cd;

Matrix4 cnot_gate() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

Matrix4 cz_gate() {
  Matrix4 u = Matrix4::Identity();
  u(3, 3) = -1.0;
  return u;
}

Matrix4 swap_gate() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 2) = 1.0;
  u(2, 1) = 1.0;
  u(3, 3) = 1.0;
  return u;
}

Matrix4 iswap_gate() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 2) = im;
  u(2, 1) = im;
  u(3, 3) = 1.0;
  return u;
}

// Haar-distributed 4x4 unitary: QR of a complex Gaussian matrix with the
// R-diagonal phases absorbed into Q.
Matrix4 random_unitary4(GaussianSampler& g) {
  Matrix4 a;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      a(r, c) = Complex(g.standard(), g.standard());
    }
  }
  Eigen::HouseholderQR<Matrix4> qr(a);
  Matrix4 q = qr.householderQ();
  const Matrix4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 4; ++c) {
    q.col(c) *= r(c, c) / std::abs(r(c, c));
  }
  return q;
}

Matrix2 random_unitary2(GaussianSampler& g) {
  Matrix2 a;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      a(r, c) = Complex(g.standard(), g.standard());
    }
  }
  Eigen::HouseholderQR<Matrix2> qr(a);
  Matrix2 q = qr.householderQ();
  const Matrix2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 2; ++c) {
    q.col(c) *= r(c, c) / std::abs(r(c, c));
  }
  return q;
}

// Embeds a logical 4x4 gate into the two-qutrit space, identity elsewhere.
Matrix9 embed_logical(const Matrix4& u) {
  const int idx[4] = {0, 1, 3, 4};
  Matrix9 big = Matrix9::Identity();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      big(idx[r], idx[c]) = u(r, c);
    }
  }
  return big;
}

void check_invariants(const Matrix4& u, double g1, double g2, double g3) {
  const MakhlinInvariants inv = makhlin_invariants(u);
  CHECK(std::abs(inv.g1 - g1) < 1e-9);
  CHECK(std::abs(inv.g2 - g2) < 1e-9);
  CHECK(std::abs(inv.g3 - g3) < 1e-9);
  CHECK(inv.imag_defect < 1e-9);
}

}  // namespace

TEST_CASE("project_logical picks rows and columns 0,1,3,4") {
  Matrix9 u = Matrix9::Zero();
  for (int r = 0; r < 9; ++r) {
    for (int c = 0; c < 9; ++c) {
      u(r, c) = Complex(r, c);
    }
  }
  const Matrix4 p = project_logical(u);
  const int idx[4] = {0, 1, 3, 4};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      CHECK(p(r, c) == Complex(idx[r], idx[c]));
    }
  }
}

TEST_CASE("gate_error: exact match, global phase, known mismatch") {
  const Matrix9 t = embed_logical(cnot_gate());
  CHECK(gate_error(t, t) < 1e-15);
  const Matrix9 phased = std::exp(im * 0.83) * t;
  CHECK(gate_error(phased, t) < 1e-14);

  // tr(t† u) = 9 - 2 when one diagonal sign flips: error 1 - 49/81.
  Matrix9 flipped = Matrix9::Identity();
  flipped(4, 4) = -1.0;
  CHECK(gate_error(flipped, Matrix9::Identity()) ==
        doctest::Approx(1.0 - 49.0 / 81.0).epsilon(1e-14));
}

TEST_CASE("invariants of the standard gates") {
  check_invariants(Matrix4::Identity(), 1.0, 0.0, 3.0);
  check_invariants(cnot_gate(), 0.0, 0.0, 1.0);
  check_invariants(cz_gate(), 0.0, 0.0, 1.0);
  check_invariants(swap_gate(), -1.0, 0.0, -3.0);
  check_invariants(iswap_gate(), 0.0, 0.0, -1.0);
}

TEST_CASE("invariants reject a singular block") {
  CHECK_THROWS_AS(makhlin_invariants(Matrix4::Zero()), std::domain_error);
}

TEST_CASE("invariants are invariant under local rotations") {
  GaussianSampler g(101);
  const Matrix4 u = random_unitary4(g);
  const MakhlinInvariants base = makhlin_invariants(u);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix4 k1 = Eigen::kroneckerProduct(random_unitary2(g),
                                               random_unitary2(g));
    const Matrix4 k2 = Eigen::kroneckerProduct(random_unitary2(g),
                                               random_unitary2(g));
    const MakhlinInvariants inv = makhlin_invariants(k1 * u * k2);
    CHECK(std::abs(inv.g1 - base.g1) < 1e-9);
    CHECK(std::abs(inv.g2 - base.g2) < 1e-9);
    CHECK(std::abs(inv.g3 - base.g3) < 1e-9);
  }
}

TEST_CASE("entangling-power distance: anchor classes") {
  const PEAssessment id = pe_assessment(makhlin_invariants(Matrix4::Identity()));
  CHECK(id.distance == doctest::Approx(2.0).epsilon(1e-12));
  // Identity-class cubic is (z - 1)^3; a triple root is only conditioned to
  // about eps^(1/3), so the tolerance here is looser than elsewhere.
  for (double root : id.roots) {
    CHECK(std::abs(root - 1.0) < 1e-4);
  }

  const PEAssessment cnot = pe_assessment(makhlin_invariants(cnot_gate()));
  CHECK(cnot.distance == 0.0);
  CHECK(cnot.roots[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cnot.roots[2] == doctest::Approx(-1.0).epsilon(1e-9));

  const PEAssessment swap = pe_assessment(makhlin_invariants(swap_gate()));
  CHECK(swap.distance == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(pe_assessment(makhlin_invariants(iswap_gate())).distance == 0.0);

  // Roots are reported in descending order.
  GaussianSampler g(55);
  for (int trial = 0; trial < 50; ++trial) {
    const PEAssessment a =
        pe_assessment(makhlin_invariants(random_unitary4(g)));
    CHECK(a.roots[0] >= a.roots[1]);
    CHECK(a.roots[1] >= a.roots[2]);
    CHECK(a.distance >= 0.0);
    CHECK(a.root_imag_defect < 1e-7);  // unitary input: genuinely real roots
  }
}

TEST_CASE("pe_distance of embedded gates") {
  CHECK(pe_distance(Matrix9::Identity()) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pe_distance(embed_logical(cnot_gate())) == 0.0);
  CHECK(pe_distance(embed_logical(swap_gate())) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("weyl coordinates of the standard gates") {
  const WeylCoordinates id = weyl_coordinates(Matrix4::Identity());
  CHECK(std::abs(id.c1) < 1e-9);
  CHECK(std::abs(id.c2) < 1e-9);
  CHECK(std::abs(id.c3) < 1e-9);

  const WeylCoordinates cnot = weyl_coordinates(cnot_gate());
  CHECK(cnot.c1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(cnot.c2) < 1e-9);
  CHECK(std::abs(cnot.c3) < 1e-9);

  const WeylCoordinates cz = weyl_coordinates(cz_gate());
  CHECK(cz.c1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(cz.c2) < 1e-9);

  const WeylCoordinates swap = weyl_coordinates(swap_gate());
  CHECK(swap.c1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(swap.c2 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(swap.c3 == doctest::Approx(kPi / 2).epsilon(1e-9));

  const WeylCoordinates iswap = weyl_coordinates(iswap_gate());
  CHECK(iswap.c1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(iswap.c2 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(iswap.c3) < 1e-9);

  CHECK_THROWS_AS(weyl_coordinates(Matrix4::Zero()), std::domain_error);
}

TEST_CASE("weyl coordinates are local invariants and satisfy the chamber") {
  GaussianSampler g(77);
  const Matrix4 u = random_unitary4(g);
  const WeylCoordinates base = weyl_coordinates(u);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix4 k1 = Eigen::kroneckerProduct(random_unitary2(g),
                                               random_unitary2(g));
    const Matrix4 k2 = Eigen::kroneckerProduct(random_unitary2(g),
                                               random_unitary2(g));
    const WeylCoordinates c = weyl_coordinates(k1 * u * k2);
    CHECK(std::abs(c.c1 - base.c1) < 1e-9);
    CHECK(std::abs(c.c2 - base.c2) < 1e-9);
    CHECK(std::abs(c.c3 - base.c3) < 1e-9);
  }

  for (int trial = 0; trial < 200; ++trial) {
    const WeylCoordinates c = weyl_coordinates(random_unitary4(g));
    CHECK(c.c1 >= -1e-12);
    CHECK(c.c1 <= kPi + 1e-12);
    CHECK(c.c2 >= -1e-12);
    CHECK(c.c2 <= kPi / 2 + 1e-12);
    CHECK(c.c3 >= -1e-12);
    CHECK(c.c3 <= c.c2 + 1e-12);
    CHECK(c.c2 <= c.c1 + 1e-12);
  }
}

TEST_CASE("canonical_gate round-trips through the extraction") {
  // Hand-picked interior and boundary points of the canonical cell.
  const WeylCoordinates points[] = {
      {0.9, 0.6, 0.3}, {kPi / 2, 0.4, 0.1}, {kPi / 4, kPi / 4, kPi / 4},
      {1.2, 0.7, 0.0}, {kPi / 2, kPi / 2, kPi / 2}};
  for (const auto& c : points) {
    const WeylCoordinates back = weyl_coordinates(canonical_gate(c));
    CHECK(std::abs(back.c1 - c.c1) < 1e-9);
    CHECK(std::abs(back.c2 - c.c2) < 1e-9);
    CHECK(std::abs(back.c3 - c.c3) < 1e-9);
  }

  // Self-consistency on random classes: extracting, rebuilding and
  // re-extracting is a fixed point.
  GaussianSampler g(31);
  for (int trial = 0; trial < 100; ++trial) {
    const WeylCoordinates c = weyl_coordinates(random_unitary4(g));
    const WeylCoordinates back = weyl_coordinates(canonical_gate(c));
    CHECK(std::abs(back.c1 - c.c1) < 1e-9);
    CHECK(std::abs(back.c2 - c.c2) < 1e-9);
    CHECK(std::abs(back.c3 - c.c3) < 1e-9);
  }
}

TEST_CASE("pe_fidelity: known values and the polytope equivalence") {
  CHECK(pe_fidelity({0.0, 0.0, 0.0}) ==
        doctest::Approx(std::cos(kPi / 8) * std::cos(kPi / 8)).epsilon(1e-12));
  CHECK(pe_fidelity({kPi / 2, 0.0, 0.0}) == 1.0);
  CHECK(pe_fidelity({kPi / 2, kPi / 2, kPi / 2}) ==
        doctest::Approx(std::cos(kPi / 8) * std::cos(kPi / 8)).epsilon(1e-12));
  CHECK(pe_fidelity({kPi / 2, kPi / 4, 0.0}) == 1.0);  // interior point

  GaussianSampler g(202);
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix4 u = random_unitary4(g);
    const double dist = pe_assessment(makhlin_invariants(u)).distance;
    const double fid = pe_fidelity(weyl_coordinates(u));
    CHECK(fid <= 1.0);
    CHECK(fid >= 0.0);
    // Zero distance exactly characterizes unit fidelity.
    CHECK((dist < 1e-9) == (fid > 1.0 - 1e-9));
  }
}

TEST_CASE("polar_unitarize returns the nearest unitary") {
  GaussianSampler g(404);
  const Matrix4 w = random_unitary4(g);
  CHECK((polar_unitarize(w) - w).cwiseAbs().maxCoeff() < 1e-13);

  // A positive-definite Hermitian stretch is removed exactly.
  Matrix4 h = Matrix4::Zero();
  h(0, 0) = 1.3;
  h(1, 1) = 0.8;
  h(2, 2) = 1.0;
  h(3, 3) = 0.6;
  const Matrix4 stretched = w * h;
  CHECK((polar_unitarize(stretched) - w).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(unitarity_defect(polar_unitarize(stretched)) < 1e-13);
}

TEST_CASE("pe_error_ensemble: embeddings, averaging, unitarize flag") {
  const double identity_error = 1.0 - std::cos(kPi / 8) * std::cos(kPi / 8);
  const std::vector<Matrix9> ids = {Matrix9::Identity()};
  CHECK(pe_error_ensemble(ids) == doctest::Approx(identity_error).epsilon(1e-12));

  const std::vector<Matrix9> cnots = {embed_logical(cnot_gate())};
  CHECK(pe_error_ensemble(cnots) < 1e-12);

  const std::vector<Matrix9> mixed = {Matrix9::Identity(),
                                      embed_logical(cnot_gate())};
  CHECK(pe_error_ensemble(mixed) ==
        doctest::Approx(identity_error / 2.0).epsilon(1e-12));

  // Unitarize is a no-op on exactly unitary blocks.
  CHECK(pe_error_ensemble(mixed, true) ==
        doctest::Approx(identity_error / 2.0).epsilon(1e-12));
}

TEST_CASE("pe_error_ensemble names the failing realization") {
  const std::vector<Matrix9> us = {Matrix9::Identity(), Matrix9::Zero()};
  try {
    pe_error_ensemble(us);
    FAIL("expected a domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("realization 1") != std::string::npos);
  }
}
