#ifndef CWPLAN_TYPES_HPP
#define CWPLAN_TYPES_HPP

#include <Eigen/Dense>

namespace cwplan {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

} // namespace cwplan

#endif // CWPLAN_TYPES_HPP
