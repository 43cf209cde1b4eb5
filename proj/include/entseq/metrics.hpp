#pragma once

#include <array>
#include <vector>

#include "entseq/types.hpp"

namespace entseq {

// Logical 4x4 block of a two-qutrit operator: rows/columns {0, 1, 3, 4} of
// the 9x9 matrix (both qutrits in their lower two levels).
Matrix4 project_logical(const Matrix9& u);

// Coherent gate error 1 - |tr(target† u)|^2 / 81.
double gate_error(const Matrix9& u, const Matrix9& target);

// Local invariants (g1, g2, g3) of a logical block.  imag_defect records the
// residual imaginary part of the g3 expression (nonzero only through rounding
// or non-unitarity).  Throws std::domain_error when |det| < 1e-12, i.e. the
// logical block has lost too much weight to leakage for the invariants to be
// meaningful.
struct MakhlinInvariants {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double imag_defect = 0.0;
};
MakhlinInvariants makhlin_invariants(const Matrix4& u);

// Perfect-entangler proximity from the invariants.  roots holds the real
// parts of the characteristic cubic's roots in descending order; distance is
// zero exactly on the perfect-entangler polytope and grows away from it.
// For unitary inputs the roots are real; leakage-depleted logical blocks are
// non-unitary and a conjugate root pair with a sizeable imaginary part is
// routine, so the real parts are used throughout and the largest |Im| is
// recorded in root_imag_defect as a diagnostic.  Throws std::domain_error
// only when a root is not finite.
struct PEAssessment {
  double d = 0.0;
  double s = 0.0;
  double distance = 0.0;
  std::array<double, 3> roots{};
  double root_imag_defect = 0.0;
};
PEAssessment pe_assessment(const MakhlinInvariants& inv);

// Convenience: distance of the logical block of a 9x9 evolution operator.
double pe_distance(const Matrix9& u);

// Canonical-class coordinates pi/2 >= c1 >= c2 >= c3 >= 0 (c1 may exceed
// pi/2 only jointly with c2 per the standard chamber fold; the identity maps
// to (0,0,0) and a controlled-NOT to (pi/2,0,0)).  Throws std::domain_error
// when |det| < 1e-12.
struct WeylCoordinates {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
WeylCoordinates weyl_coordinates(const Matrix4& u);

// exp(i/2 (c1 XX + c2 YY + c3 ZZ)): a representative gate with the given
// coordinates.  Used to round-trip the extraction.
Matrix4 canonical_gate(const WeylCoordinates& c);

// Fidelity to the closest perfect entangler, from the coordinates alone:
// piecewise cos^2 of the distance to the polytope face, 1 inside.
double pe_fidelity(const WeylCoordinates& c);

// Nearest unitary in Frobenius norm (polar factor); used to optionally
// unitarize leakage-depleted logical blocks before coordinate extraction.
Matrix4 polar_unitarize(const Matrix4& u);

// Mean of 1 - pe_fidelity over an ensemble of evolution operators, in index
// order.  When unitarize is set, each logical block is polar-projected
// first.  A domain error from any realization is rethrown with the
// realization index prepended.
double pe_error_ensemble(const std::vector<Matrix9>& us, bool unitarize = false);

}  // namespace entseq
