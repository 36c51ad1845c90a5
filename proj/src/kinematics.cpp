#include "roller/kinematics.hpp"

#include <cmath>

namespace roller {

namespace {

constexpr double kDirEps = 1e-9;

// Rodrigues rotation of v about unit axis k.
Vec3 rotate_about(const Vec3& k, double angle, const Vec3& v) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    return c * v + s * cross(k, v) + (1.0 - c) * dot(k, v) * k;
}

}  // namespace

const char* to_string(KinError e) {
    switch (e) {
        case KinError::NoContact: return "NoContact";
        case KinError::Degenerate: return "Degenerate";
        case KinError::DegenerateRollDirection: return "DegenerateRollDirection";
        case KinError::PoleContact: return "PoleContact";
        case KinError::ZeroMomentArm: return "ZeroMomentArm";
        case KinError::BadFingerIndex: return "BadFingerIndex";
    }
    return "?";
}

Expected<FingerFrames, KinError> forward_finger(const GrasperConfig& config,
                                                int finger_index,
                                                double theta1,
                                                double theta2) {
    if (finger_index < 0 || finger_index > 2) return KinError::BadFingerIndex;

    double az = config.finger_azimuths[static_cast<std::size_t>(finger_index)];
    Vec3 radial{std::cos(az), std::sin(az), 0.0};  // outward
    Vec3 z0 = Vec3::unit_z();

    FingerFrames f;
    f.grasper_vertical = z0;
    f.base_origin = config.base_circle_radius * radial;
    // Tangent chosen so positive theta1 tips the finger toward the axis.
    f.base_axis = Vec3{std::sin(az), -std::cos(az), 0.0};

    // Finger longitudinal axis: straight up at theta1 = 0.
    Vec3 finger_dir = rotate_about(f.base_axis, theta1, z0);
    f.pivot_axis = finger_dir;
    f.roller_center = f.base_origin + config.finger_length() * finger_dir;

    // Z1 is perpendicular to the finger axis for every theta1, so it
    // serves as the theta2 = 0 reference of the spin axis.
    f.roller_spin_axis = rotate_about(f.pivot_axis, theta2, f.base_axis);
    return f;
}

Expected<ContactState, KinError> contact_state(const FingerFrames& frames,
                                               const ObjectModel& obj,
                                               const Vec3& x_obj,
                                               double roller_radius_mm,
                                               double gap_tolerance_mm) {
    double R = obj.sphere().radius;
    Vec3 d = x_obj - frames.roller_center;
    double dist = d.norm();
    if (dist < kDirEps) return KinError::Degenerate;
    double gap = dist - (R + roller_radius_mm);
    if (gap > gap_tolerance_mm) return KinError::NoContact;
    ContactState cs;
    cs.normal = d / dist;
    cs.point = frames.roller_center + roller_radius_mm * cs.normal;
    return cs;
}

ContactDecomposition decompose_contact_motion(const Vec3& delta_x_contact,
                                              const Vec3& z_cb_hat,
                                              const Vec3& n_con_hat) {
    ContactDecomposition out;
    out.z_cr_hat = Vec3::zero();

    auto fallback = [&]() {
        out.degenerate = true;
        out.alpha = dot(delta_x_contact, z_cb_hat);
        out.delta_x_cb = out.alpha * z_cb_hat;
        out.delta_x_cr = Vec3::zero();
        out.beta = 0.0;
        return out;
    };

    Vec3 w = cross(z_cb_hat, delta_x_contact);
    if (w.norm() < kDirEps) return fallback();

    Vec3 u = cross(w, n_con_hat);
    if (u.norm() < kDirEps) return fallback();
    out.z_cr_hat = normalized(u);

    Vec3 nz_raw = cross(out.z_cr_hat, z_cb_hat);
    if (nz_raw.norm() < kDirEps) return fallback();
    Vec3 n_z = normalized(nz_raw);

    out.alpha = dot(n_z, cross(out.z_cr_hat, delta_x_contact)) /
                dot(n_z, cross(out.z_cr_hat, z_cb_hat));
    out.beta = dot(n_z, cross(z_cb_hat, delta_x_contact)) /
               dot(n_z, cross(z_cb_hat, out.z_cr_hat));
    out.delta_x_cb = out.alpha * z_cb_hat;
    out.delta_x_cr = out.beta * out.z_cr_hat;
    return out;
}

Expected<double, KinError> pivot_angle_for(const Vec3& z1, const Vec3& z2,
                                           const Vec3& z_cr_hat, const Vec3& z0,
                                           double pivot_limit) {
    Vec3 d = cross(z2, z_cr_hat);
    if (d.norm() < kDirEps) return KinError::DegenerateRollDirection;
    Vec3 z3 = normalized(d);
    if (dot(z3, z0) < 0.0) z3 = -z3;  // ties keep the unflipped candidate

    double theta = std::atan2(dot(cross(z1, z3), z2), dot(z1, z3));
    // Z3 and -Z3 give the same rolling line, so an out-of-range angle has
    // an in-range equivalent half a turn away.
    if (theta > pivot_limit) theta -= kPi;
    if (theta < -pivot_limit) theta += kPi;
    if (theta > pivot_limit) theta = pivot_limit;
    if (theta < -pivot_limit) theta = -pivot_limit;
    return theta;
}

Expected<double, KinError> roller_rate_for(const Vec3& delta_x_cr, const Vec3& z3,
                                           const Vec3& n_con_hat, double r) {
    Vec3 roll_dir = cross(z3, n_con_hat);
    double arm = roll_dir.norm();
    if (arm < 1e-6) return KinError::PoleContact;
    if (delta_x_cr.norm() < 1e-15) return 0.0;
    // Projection of dx_cr onto the current rolling line. When the line
    // is aligned with dx_cr this is +-|dx_cr| / (r * arm); while the
    // pivot is still re-aligning it tapers the drive instead of rolling
    // at full rate off-direction.
    return dot(delta_x_cr, roll_dir) / (r * arm * arm);
}

Expected<double, KinError> base_rate_for(const Vec3& delta_x_cb,
                                         const FingerFrames& frames, const Vec3& p) {
    Vec3 arm_vec = cross(frames.base_axis, p - frames.base_origin);
    double arm = arm_vec.norm();
    if (arm < 1e-6) return KinError::ZeroMomentArm;
    double mag = delta_x_cb.norm();
    if (mag < 1e-15) return 0.0;
    double omega1 = mag / arm;
    if (dot(delta_x_cb, arm_vec) < 0.0) omega1 = -omega1;
    return omega1;
}

}  // namespace roller
