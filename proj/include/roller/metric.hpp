#ifndef ROLLER_METRIC_HPP
#define ROLLER_METRIC_HPP

#include <algorithm>
#include <cmath>

#include "roller/quat.hpp"

namespace roller {

// Orientation error on [0, 100]: the smaller of |q_d - q_c| and
// |q_d + q_c| (so both covers of a rotation score the same), normalized
// by sqrt(2), times 100.
inline double orientation_error(const UnitQuat& q_d, const UnitQuat& q_c) {
    double dw = q_d.w - q_c.w, dx = q_d.x - q_c.x, dy = q_d.y - q_c.y, dz = q_d.z - q_c.z;
    double sw = q_d.w + q_c.w, sx = q_d.x + q_c.x, sy = q_d.y + q_c.y, sz = q_d.z + q_c.z;
    double diff = std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
    double sum = std::sqrt(sw * sw + sx * sx + sy * sy + sz * sz);
    return 100.0 * std::min(diff, sum) / std::sqrt(2.0);
}

}  // namespace roller

#endif  // ROLLER_METRIC_HPP
