#pragma once

#include <cstdint>
#include <Eigen/Dense>

namespace conehedge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr const char* kVersion = "0.1.0";

// Default RNG seed used whenever none is given, so that every run is
// reproducible out of the box.
inline constexpr std::uint64_t kDefaultSeed = 12345;

}  // namespace conehedge
