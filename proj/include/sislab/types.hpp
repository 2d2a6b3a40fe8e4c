#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace sislab {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using Index = Eigen::Index;

} // namespace sislab
