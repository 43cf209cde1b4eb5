#pragma once

#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "entseq/types.hpp"

namespace entseq {

// Gell-Mann matrix lambda_i for i in [0, 8], with lambda_0 = identity.
// lambda_1..lambda_8 are traceless, Hermitian and satisfy
// tr(lambda_i lambda_j) = 2 delta_ij.  Throws std::invalid_argument for an
// index outside [0, 8].
const Matrix3& gell_mann(int i);

// Kronecker product a (x) b in row-major convention: the left factor indexes
// the major (first-qutrit) slot, so (a (x) b)[3p+q, 3r+s] = a[p,r] * b[q,s].
inline Matrix9 kron(const Matrix3& a, const Matrix3& b) {
  return Eigen::kroneckerProduct(a, b);
}

// exp(i * scale * h) for Hermitian h, via eigendecomposition.  Throws
// std::invalid_argument if h deviates from Hermitian by more than 1e-12 in
// any entry, std::runtime_error if the eigensolver fails.
template <typename Derived>
typename Derived::PlainObject expi_hermitian(const Eigen::MatrixBase<Derived>& h,
                                             double scale = 1.0) {
  using Plain = typename Derived::PlainObject;
  const Plain hm = h;
  if ((hm - hm.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("expi_hermitian: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Plain> solver(hm);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("expi_hermitian: eigendecomposition failed");
  }
  const auto phases =
      (im * scale * solver.eigenvalues().template cast<Complex>().array()).exp();
  return solver.eigenvectors() * phases.matrix().asDiagonal() *
         solver.eigenvectors().adjoint();
}

// exp(i (a lambda_1 + b lambda_2 + c lambda_3)) in closed form: an SU(2)
// rotation of the upper 2x2 block, identity on the third level.
Matrix3 su2_block_exp(double a, double b, double c);

// exp(i theta lambda_k) for a single generator, k in [1, 8], in closed form.
// For k != 8, lambda_k^2 is a projector P_k onto a two-level subspace and
// exp(i theta lambda_k) = I + (cos theta - 1) P_k + i sin theta lambda_k.
Matrix3 expi_single_gell_mann(int k, double theta);

}  // namespace entseq
