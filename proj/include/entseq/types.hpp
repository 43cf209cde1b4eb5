#pragma once

#include <complex>

#include <Eigen/Dense>

namespace entseq {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Matrix4 = Eigen::Matrix4cd;
using Matrix9 = Eigen::Matrix<Complex, 9, 9>;
using Vector = Eigen::VectorXd;

inline constexpr Complex im{0.0, 1.0};

// Largest absolute entry of U†U - I; zero for an exactly unitary matrix.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  const Plain residual =
      u.adjoint() * u - Plain::Identity(u.cols(), u.cols());
  return residual.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-12) {
  return unitarity_defect(u) <= tol;
}

}  // namespace entseq
