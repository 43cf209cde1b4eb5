#include "entseq/su_algebra.hpp"

#include <array>
#include <cmath>

namespace entseq {

namespace {

std::array<Matrix3, 9> make_gell_mann_table() {
  std::array<Matrix3, 9> l;
  for (auto& m : l) m.setZero();
  l[0] = Matrix3::Identity();
  l[1](0, 1) = 1.0;
  l[1](1, 0) = 1.0;
  l[2](0, 1) = -im;
  l[2](1, 0) = im;
  l[3](0, 0) = 1.0;
  l[3](1, 1) = -1.0;
  l[4](0, 2) = 1.0;
  l[4](2, 0) = 1.0;
  l[5](0, 2) = -im;
  l[5](2, 0) = im;
  l[6](1, 2) = 1.0;
  l[6](2, 1) = 1.0;
  l[7](1, 2) = -im;
  l[7](2, 1) = im;
  const double s3 = 1.0 / std::sqrt(3.0);
  l[8](0, 0) = s3;
  l[8](1, 1) = s3;
  l[8](2, 2) = -2.0 * s3;
  return l;
}

}  // namespace

const Matrix3& gell_mann(int i) {
  static const std::array<Matrix3, 9> table = make_gell_mann_table();
  if (i < 0 || i > 8) {
    throw std::invalid_argument("gell_mann: index must be in [0, 8], got " +
                                std::to_string(i));
  }
  return table[static_cast<std::size_t>(i)];
}

Matrix3 su2_block_exp(double a, double b, double c) {
  const double theta = std::sqrt(a * a + b * b + c * c);
  Matrix3 result = Matrix3::Identity();
  if (theta == 0.0) {
    return result;
  }
  // cos(theta) P + i sin(theta)/theta (a l1 + b l2 + c l3) + (I - P), with P
  // the projector onto the upper 2x2 block.
  const double cos_t = std::cos(theta);
  const Complex isinc = im * (std::sin(theta) / theta);
  result(0, 0) = cos_t + isinc * c;
  result(0, 1) = isinc * Complex(a, -b);
  result(1, 0) = isinc * Complex(a, b);
  result(1, 1) = cos_t - isinc * c;
  return result;
}

Matrix3 expi_single_gell_mann(int k, double theta) {
  if (k < 1 || k > 8) {
    throw std::invalid_argument(
        "expi_single_gell_mann: index must be in [1, 8], got " +
        std::to_string(k));
  }
  Matrix3 result = Matrix3::Identity();
  if (k == 8) {
    const double s = theta / std::sqrt(3.0);
    result(0, 0) = std::exp(im * s);
    result(1, 1) = std::exp(im * s);
    result(2, 2) = std::exp(im * (-2.0 * s));
    return result;
  }
  const Matrix3& lk = gell_mann(k);
  const Matrix3 proj = lk * lk;
  result += (std::cos(theta) - 1.0) * proj + im * std::sin(theta) * lk;
  return result;
}

}  // namespace entseq
