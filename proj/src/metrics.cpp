#include "entseq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace entseq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kQuarterPi = kPi / 4.0;

// Transformation to the magic (Bell) basis, in which local gates become real
// orthogonal and the class invariants are traces of m = u_B^T u_B.
const Matrix4& magic_basis() {
  static const Matrix4 q = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix4 m;
    m << 1, 0, 0, im,
         0, im, 1, 0,
         0, im, -1, 0,
         1, 0, 0, -im;
    return Matrix4(s * m);
  }();
  return q;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

struct CubicRoots {
  std::array<double, 3> real{};
  double imag_defect = 0.0;
};

// Roots of z^3 + a z^2 + b z + c with real coefficients, real parts sorted
// descending; imag_defect is the largest |imaginary part| encountered.
CubicRoots solve_cubic(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double discriminant = q * q / 4.0 + p * p * p / 27.0;
  CubicRoots roots;
  if (discriminant >= 0.0) {
    // One real root and a complex-conjugate pair.
    const double sq = std::sqrt(discriminant);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    const double t_real = u + v;
    const double pair_real = -t_real / 2.0;
    roots.real = {t_real, pair_real, pair_real};
    roots.imag_defect = std::abs(std::sqrt(3.0) / 2.0 * (u - v));
  } else {
    // Three real roots (trigonometric form; p < 0 here).
    const double magnitude = 2.0 * std::sqrt(-p / 3.0);
    const double arg = clamp_unit(3.0 * q / (p * magnitude));
    const double angle = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.real[static_cast<std::size_t>(k)] =
          magnitude * std::cos(angle - 2.0 * kPi * k / 3.0);
    }
  }
  const double shift = a / 3.0;
  for (double& r : roots.real) r -= shift;
  std::sort(roots.real.begin(), roots.real.end(), std::greater<double>());
  return roots;
}

}  // namespace

Matrix4 project_logical(const Matrix9& u) {
  static constexpr int kLogical[4] = {0, 1, 3, 4};
  Matrix4 block;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      block(r, c) = u(kLogical[r], kLogical[c]);
    }
  }
  return block;
}

double gate_error(const Matrix9& u, const Matrix9& target) {
  const Complex overlap = (target.conjugate().cwiseProduct(u)).sum();
  return 1.0 - std::norm(overlap) / 81.0;
}

MakhlinInvariants makhlin_invariants(const Matrix4& u) {
  const Complex det = u.determinant();
  if (std::abs(det) < 1e-12) {
    throw std::domain_error(
        "makhlin_invariants: logical block is numerically singular");
  }
  const Matrix4& q = magic_basis();
  const Matrix4 ub = q.adjoint() * u * q;
  const Matrix4 m = ub.transpose() * ub;
  const Complex tr = m.trace();
  const Complex g12 = tr * tr / (16.0 * det);
  const Complex g3c = (tr * tr - (m * m).trace()) / (4.0 * det);
  MakhlinInvariants inv;
  inv.g1 = g12.real();
  inv.g2 = g12.imag();
  inv.g3 = g3c.real();
  inv.imag_defect = std::abs(g3c.imag());
  return inv;
}

PEAssessment pe_assessment(const MakhlinInvariants& inv) {
  const double radius = std::hypot(inv.g1, inv.g2);
  // Characteristic cubic z^3 - g3 z^2 + (4r - 1) z + (g3 - 4 g1).
  const CubicRoots roots =
      solve_cubic(-inv.g3, 4.0 * radius - 1.0, inv.g3 - 4.0 * inv.g1);
  if (!std::isfinite(roots.real[0]) || !std::isfinite(roots.real[1]) ||
      !std::isfinite(roots.real[2])) {
    throw std::domain_error("pe_assessment: characteristic roots are not finite");
  }
  PEAssessment out;
  out.roots = roots.real;
  out.root_imag_defect = roots.imag_defect;
  out.d = inv.g3 * radius - inv.g1;
  out.s = kPi - std::acos(clamp_unit(roots.real[0])) -
          std::acos(clamp_unit(roots.real[2]));
  if (out.d > 0.0 && out.s > 0.0) {
    out.distance = out.d;
  } else if (out.d < 0.0 && out.s < 0.0) {
    out.distance = -out.d;
  } else {
    out.distance = 0.0;
  }
  return out;
}

double pe_distance(const Matrix9& u) {
  return pe_assessment(makhlin_invariants(project_logical(u))).distance;
}

WeylCoordinates weyl_coordinates(const Matrix4& u) {
  const Complex det = u.determinant();
  if (std::abs(det) < 1e-12) {
    throw std::domain_error(
        "weyl_coordinates: logical block is numerically singular");
  }
  const Matrix4 special = u / std::pow(det, 0.25);
  const Matrix4& q = magic_basis();
  const Matrix4 ub = q.adjoint() * special * q;
  const Matrix4 m2 = ub.transpose() * ub;
  Eigen::ComplexEigenSolver<Matrix4> solver(m2);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("weyl_coordinates: eigendecomposition failed");
  }
  // Standard chamber fold of the eigenphases (same scheme as the common
  // circuit-synthesis implementations), yielding half-coordinates cs.
  std::array<double, 4> d{};
  for (int k = 0; k < 3; ++k) {
    d[static_cast<std::size_t>(k)] = -std::arg(solver.eigenvalues()[k]) / 2.0;
  }
  d[3] = -d[0] - d[1] - d[2];
  std::array<double, 3> cs{};
  std::array<double, 3> folded{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double raw = (d[k] + d[3]) / 2.0;
    cs[k] = raw - 2.0 * kPi * std::floor(raw / (2.0 * kPi));
    const double t = cs[k] - kHalfPi * std::floor(cs[k] / kHalfPi);
    folded[k] = std::min(t, kHalfPi - t);
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return folded[a] < folded[b]; });
  // Reorder as (middle, largest, smallest) of the folded magnitudes.
  const std::array<double, 3> picked = {cs[order[1]], cs[order[2]], cs[order[0]]};
  double c0 = picked[0];
  double c1 = picked[1];
  double c2 = picked[2];
  if (c0 > kHalfPi) c0 -= 3.0 * kHalfPi;
  if (c1 > kHalfPi) c1 -= 3.0 * kHalfPi;
  int conjugations = 0;
  if (c0 > kQuarterPi) {
    c0 = kHalfPi - c0;
    ++conjugations;
  }
  if (c1 > kQuarterPi) {
    c1 = kHalfPi - c1;
    ++conjugations;
  }
  if (c2 > kHalfPi) c2 -= 3.0 * kHalfPi;
  if (conjugations == 1) c2 = kHalfPi - c2;
  if (c2 > kQuarterPi) c2 -= kHalfPi;
  // Scale to full coordinates and fold the signed third coordinate back into
  // the positive chamber.
  WeylCoordinates out{2.0 * c1, 2.0 * c0, 2.0 * c2};
  if (out.c3 < 0.0) {
    out.c1 = kPi - out.c1;
    out.c3 = -out.c3;
  }
  return out;
}

Matrix4 canonical_gate(const WeylCoordinates& c) {
  Matrix4 xx, yy, zz;
  xx << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  yy << 0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
  zz << 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1;
  const Matrix4 h = c.c1 * xx + c.c2 * yy + c.c3 * zz;
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("canonical_gate: eigendecomposition failed");
  }
  const auto phases =
      (im * 0.5 * solver.eigenvalues().cast<Complex>().array()).exp();
  return solver.eigenvectors() * phases.matrix().asDiagonal() *
         solver.eigenvectors().adjoint();
}

double pe_fidelity(const WeylCoordinates& c) {
  const auto face = [](double offset) {
    const double t = std::cos(offset / 4.0);
    return t * t;
  };
  if (c.c1 + c.c2 <= kHalfPi) {
    return face(c.c1 + c.c2 - kHalfPi);
  }
  if (c.c2 + c.c3 >= kHalfPi) {
    return face(c.c2 + c.c3 - kHalfPi);
  }
  if (c.c1 - c.c2 >= kHalfPi) {
    return face(c.c1 - c.c2 - kHalfPi);
  }
  return 1.0;
}

Matrix4 polar_unitarize(const Matrix4& u) {
  Eigen::JacobiSVD<Matrix4> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double pe_error_ensemble(const std::vector<Matrix9>& us, bool unitarize) {
  if (us.empty()) {
    throw std::invalid_argument("pe_error_ensemble: empty ensemble");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < us.size(); ++m) {
    try {
      Matrix4 block = project_logical(us[m]);
      if (unitarize) {
        block = polar_unitarize(block);
      }
      total += 1.0 - pe_fidelity(weyl_coordinates(block));
    } catch (const std::domain_error& e) {
      throw std::domain_error("realization " + std::to_string(m) + ": " + e.what());
    }
  }
  return total / static_cast<double>(us.size());
}

}  // namespace entseq
