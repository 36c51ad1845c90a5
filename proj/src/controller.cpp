#include "roller/controller.hpp"

#include <cmath>

namespace roller {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// Of the rolling-line-equivalent pivot representations theta + k*pi that
// fit the joint range (with a little slack for boundary chatter), the
// one nearest the current pivot angle. Keeps the pivot pinned at a
// limit instead of swinging across when the desired angle wraps.
double resolve_pivot_target(double theta, double current, double limit, double slack) {
    double best = theta;
    double best_cost = std::abs(theta - current);
    for (int k = -1; k <= 1; k += 2) {
        double cand = theta + k * kPi;
        if (std::abs(cand) > limit + slack) continue;
        double clamped = clamp(cand, -limit, limit);
        // Saturation trades a small rolling-line error for travel; weight
        // it a few times higher than travel distance.
        double cost = std::abs(clamped - current) + 4.0 * std::abs(cand - clamped);
        if (cost < best_cost) {
            best = clamped;
            best_cost = cost;
        }
    }
    return best;
}

}  // namespace

const char* to_string(CtrlError e) {
    switch (e) {
        case CtrlError::NotGrasping: return "NotGrasping";
    }
    return "?";
}

std::pair<Vec3, Vec3> desired_object_velocity(const Pose& current, const Pose& target,
                                              double lambda) {
    auto [translation, rotation] = pose_delta(current, target);
    return {lambda * translation, lambda * rotation.rotation_vector()};
}

ControllerView controller_view(const GrasperConfig& config, const ControllerParams& params,
                               const JointVector& joints_meas, const Pose& object_pose_meas) {
    ControllerView view;
    for (int i = 0; i < 3; ++i) {
        view.frames[i] =
            forward_finger(config, i, joints_meas.base(i), joints_meas.pivot(i)).value();
        Vec3 d = object_pose_meas.position - view.frames[i].roller_center;
        double dist = d.norm();
        if (dist < 1e-9) {
            view.in_contact[i] = false;
            continue;
        }
        Vec3 n = d / dist;
        view.contacts[i].normal = n;
        view.contacts[i].point = view.frames[i].roller_center + config.roller_radius_r * n;
        double gap = dist - (params.assumed_radius_mm + config.roller_radius_r);
        view.in_contact[i] = gap <= params.contact_band_mm;
    }
    return view;
}

Expected<double, CtrlError> grip_zero_gap_angle(const GrasperConfig& config,
                                                const ControllerParams& params,
                                                int finger, const Vec3& object_center) {
    auto gap_at = [&](double theta1) {
        FingerFrames f = forward_finger(config, finger, theta1, 0.0).value();
        return distance(object_center, f.roller_center) -
               (params.assumed_radius_mm + config.roller_radius_r);
    };
    const double step_rad = deg_to_rad(0.5);
    double lo = params.base_search_min;
    double prev = gap_at(lo);
    bool found = false;
    double hi = lo;
    for (double t = lo + step_rad; t <= params.base_search_max + 1e-12; t += step_rad) {
        double g = gap_at(t);
        if (prev > 0.0 && g <= 0.0) {
            hi = t;
            found = true;
            break;
        }
        lo = t;
        prev = g;
    }
    if (!found) return CtrlError::NotGrasping;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (gap_at(mid) <= 0.0) hi = mid; else lo = mid;
    }
    return hi;
}

Expected<ControlCommand, CtrlError> step_policy(const GrasperConfig& config,
                                                const ControllerParams& params,
                                                const ControllerView& view,
                                                const Pose& current, const Pose& target,
                                                const JointVector& joints) {
    for (bool c : view.in_contact) {
        if (!c) return CtrlError::NotGrasping;
    }

    auto [v_raw, omega] = desired_object_velocity(current, target, config.lambda);
    Vec3 v = params.w_pos * v_raw;

    ControlCommand cmd;
    cmd.joint_targets = joints;

    for (int i = 0; i < 3; ++i) {
        const FingerFrames& f = view.frames[i];
        const ContactState& c = view.contacts[i];

        Vec3 dx_contact = contact_velocity_from_twist(v, omega, c.point, current.position);
        ContactDecomposition dec =
            decompose_contact_motion(dx_contact, f.pivot_axis, c.normal);
        cmd.decompositions[i] = dec;
        cmd.degenerate_flags[i] = dec.degenerate;

        // Pivot: steer the rolling line toward z_cr, rate limited.
        double pivot_target = joints.pivot(i);
        if (!dec.degenerate) {
            auto theta = pivot_angle_for(f.base_axis, f.pivot_axis, dec.z_cr_hat,
                                         f.grasper_vertical, config.pivot_limit);
            if (theta) {
                pivot_target = resolve_pivot_target(*theta, joints.pivot(i),
                                                    config.pivot_limit,
                                                    params.pivot_fold_slack);
            }
        }
        double pivot_step = clamp(pivot_target - joints.pivot(i),
                                  -config.pivot_rate_limit, config.pivot_rate_limit);
        cmd.joint_targets.pivot(i) = clamp(joints.pivot(i) + pivot_step,
                                           -config.pivot_limit, config.pivot_limit);
        cmd.rates[i].theta2_target = cmd.joint_targets.pivot(i);

        // Roller: advance along the achievable rolling component.
        double omega3 = 0.0;
        if (!dec.degenerate) {
            auto w3 = roller_rate_for(dec.delta_x_cr, f.roller_spin_axis, c.normal,
                                      config.roller_radius_r);
            if (w3) omega3 = clamp(*w3, -params.roller_rate_cap, params.roller_rate_cap);
        }
        cmd.joint_targets.roller(i) = joints.roller(i) + omega3;
        cmd.rates[i].omega3 = omega3;

        // Base: position setpoint that keeps the roller pressed on the
        // assumed sphere.
        auto zero_gap = grip_zero_gap_angle(config, params, i, current.position);
        if (zero_gap) {
            cmd.joint_targets.base(i) = *zero_gap + config.grip_setpoint;
        }
        cmd.rates[i].omega1 = cmd.joint_targets.base(i) - joints.base(i);
    }
    return cmd;
}

}  // namespace roller
