#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace onebit {

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = ComplexMatrix<double>;
using CVector = ComplexVector<double>;
using RMatrix = RealMatrix<double>;
using RVector = RealVector<double>;
using Index = Eigen::Index;

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace onebit
