#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qpcnoise {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;
using SuperMat = Eigen::Matrix<cplx, 9, 9>;
using Vec9 = Eigen::Matrix<cplx, 9, 1>;

/// Column stacking: element (i, j) of a 3x3 matrix sits at index 3*j + i.
constexpr int vec_index(int i, int j) { return 3 * j + i; }

inline Vec9 vectorize(const Mat3& m) { return Eigen::Map<const Vec9>(m.data()); }
inline Mat3 unvectorize(const Vec9& v) { return Eigen::Map<const Mat3>(v.data()); }

/// Row functional t with t * vectorize(X) == Tr X.
inline Eigen::Matrix<cplx, 1, 9> trace_functional() {
  Eigen::Matrix<cplx, 1, 9> t = Eigen::Matrix<cplx, 1, 9>::Zero();
  for (int i = 0; i < 3; ++i) t(vec_index(i, i)) = 1.0;
  return t;
}

/// |i><j| in the (s0, s1, s2) basis.
inline Mat3 ketbra(int i, int j) {
  Mat3 m = Mat3::Zero();
  m(i, j) = 1.0;
  return m;
}

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant (Higham 2005 coefficients and theta_13 = 5.37). Works for any
/// fixed- or dynamic-size complex Eigen matrix.
template <class Matrix>
Matrix expm(const Matrix& A) {
  using Eigen::Index;
  constexpr double b[] = {64764752532480000.0,
                          32382376266240000.0,
                          7771770303897600.0,
                          1187353796428800.0,
                          129060195264000.0,
                          10559470521600.0,
                          670442572800.0,
                          33522128640.0,
                          1323241920.0,
                          40840800.0,
                          960960.0,
                          16380.0,
                          182.0,
                          1.0};
  constexpr double theta13 = 5.371920351148152;

  const Index n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Matrix As = A / std::ldexp(1.0, s);

  const Matrix A2 = As * As;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  Matrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                   b[3] * A2 + b[1] * I);
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
             b[0] * I;
  Matrix R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

}  // namespace qpcnoise
