#ifndef ROLLER_KINEMATICS_HPP
#define ROLLER_KINEMATICS_HPP

#include "roller/config.hpp"
#include "roller/expected.hpp"
#include "roller/vec3.hpp"

namespace roller {

enum class KinError {
    NoContact,
    Degenerate,
    DegenerateRollDirection,
    PoleContact,
    ZeroMomentArm,
    BadFingerIndex,
};

const char* to_string(KinError e);

// Frame set of one finger. Z0 is the grasper vertical, Z1 the base joint
// axis (horizontal, tangent to the base circle), Z2 the pivot axis along
// the finger, Z3 the roller spin axis (perpendicular to Z2, steered by
// the pivot angle).
struct FingerFrames {
    Vec3 base_origin;        // o1, on the base circle
    Vec3 base_axis;          // Z1, unit
    Vec3 pivot_axis;         // Z2, unit, along the finger
    Vec3 roller_center;      // center of the spherical roller
    Vec3 roller_spin_axis;   // Z3, unit, perpendicular to Z2
    Vec3 grasper_vertical;   // Z0, unit
};

// One roller-object contact. The normal points from the roller toward
// the object center; the point lies on the roller surface.
struct ContactState {
    Vec3 point;
    Vec3 normal;
};

// Split of a desired contact motion into the base-joint component (along
// z_cb = Z2) and the rolling component (along z_cr, tangent to the
// contact plane). When the construction degenerates the rolling part is
// zeroed and only the z_cb projection survives.
struct ContactDecomposition {
    Vec3 delta_x_cb;
    Vec3 delta_x_cr;
    double alpha = 0.0;
    double beta = 0.0;
    Vec3 z_cr_hat;
    bool degenerate = false;
};

// Per-finger joint command derived from one decomposition.
struct JointRates {
    double omega1 = 0.0;        // base, rad/step
    double omega3 = 0.0;        // roller, rad/step
    double theta2_target = 0.0; // pivot, rad, within +-pivot_limit
};

// Forward kinematics of finger `finger_index` at base angle theta1 and
// pivot angle theta2. The chain: the finger base sits on a circle of
// radius base_circle_radius at azimuth finger_azimuths[i]; Z1 is the
// horizontal tangent there; at theta1 = 0 the finger points straight up
// (+Z0) and positive theta1 tips it inward; the roller center sits
// link_a + link_b along the finger; Z2 is the finger axis; Z3 = Z1
// rotated by theta2 about Z2.
Expected<FingerFrames, KinError> forward_finger(const GrasperConfig& config,
                                                int finger_index,
                                                double theta1,
                                                double theta2);

// Sphere-object contact for one finger. gap = |x_obj - roller_center|
// - (R + r); contact requires gap <= tolerance (penetration allowed).
Expected<ContactState, KinError> contact_state(const FingerFrames& frames,
                                               const ObjectModel& obj,
                                               const Vec3& x_obj,
                                               double roller_radius_mm,
                                               double gap_tolerance_mm = 1.0);

// Rigid-body contact velocity for an object twist (v, omega) at contact
// point p of an object centered at x_obj.
inline Vec3 contact_velocity_from_twist(const Vec3& v_obj, const Vec3& omega_obj,
                                        const Vec3& p, const Vec3& x_obj) {
    return v_obj + cross(omega_obj, p - x_obj);
}

// Splits delta_x_contact into components along z_cb_hat and along the
// derived rolling direction z_cr_hat = ((z_cb x dx) x n_con) / |.|.
// Degenerate inputs (dx parallel to z_cb, or z_cb perpendicular to the
// contact normal) fall back to the z_cb projection with the flag set.
ContactDecomposition decompose_contact_motion(const Vec3& delta_x_contact,
                                              const Vec3& z_cb_hat,
                                              const Vec3& n_con_hat);

// Pivot angle that aligns the rolling direction with z_cr_hat. The spin
// axis candidate is z2 x z_cr normalized, sign-picked to keep a
// non-negative component along z0; the signed angle from z1 to it about
// z2 is then folded into [-pivot_limit, pivot_limit] using the fact that
// Z3 and -Z3 produce the same rolling line.
Expected<double, KinError> pivot_angle_for(const Vec3& z1, const Vec3& z2,
                                           const Vec3& z_cr_hat, const Vec3& z0,
                                           double pivot_limit = kPi / 2.0);

// Roller rate realizing delta_x_cr: the projection of dx_cr onto the
// rolling line z3 x n_con, over r. Equals +-|dx_cr| / (r |z3 x n_con|)
// when the line is aligned with dx_cr; the sign always keeps the surface
// velocity pointing along delta_x_cr.
Expected<double, KinError> roller_rate_for(const Vec3& delta_x_cr, const Vec3& z3,
                                           const Vec3& n_con_hat, double r);

// Base rate realizing delta_x_cb about the base axis with moment arm
// z1 x (p - o1).
Expected<double, KinError> base_rate_for(const Vec3& delta_x_cb,
                                         const FingerFrames& frames, const Vec3& p);

}  // namespace roller

#endif  // ROLLER_KINEMATICS_HPP
