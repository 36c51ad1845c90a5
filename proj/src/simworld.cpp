#include "roller/simworld.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "roller/rng.hpp"

namespace roller {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// Move current toward target, at most rate per step.
double rate_limited(double current, double target, double rate) {
    return current + clamp(target - current, -rate, rate);
}

FingerFrames frames_of(const GrasperConfig& config, const JointVector& joints, int finger) {
    return forward_finger(config, finger, joints.base(finger), joints.pivot(finger)).value();
}

void refresh_contacts(WorldState& s) {
    for (int i = 0; i < 3; ++i) {
        FingerFrames f = frames_of(s.config, s.joints, i);
        SurfaceProbe probe = probe_object_surface(s.object_model, s.object, f.roller_center);
        s.gaps[i] = probe.signed_distance - s.config.roller_radius_r;
        s.contacts[i].normal = probe.inward_normal;
        s.contacts[i].point = f.roller_center + s.config.roller_radius_r * probe.inward_normal;
    }
}

Pose measure_pose(const Pose& truth, const WorldParams& p, std::uint64_t seed, int step_index) {
    Rng rng = Rng::derive(seed, "sensor", static_cast<std::uint64_t>(step_index));
    Pose m = truth;
    m.position.x += rng.normal(0.0, p.sigma_pos_mm);
    m.position.y += rng.normal(0.0, p.sigma_pos_mm);
    m.position.z += rng.normal(0.0, p.sigma_pos_mm);
    Vec3 axis = rng.unit_vector();
    double ang = rng.normal(0.0, p.sigma_ang_rad);
    m.orientation = quat_mul(quat_from_angle_axis(axis, ang), truth.orientation);
    return m;
}

}  // namespace

const char* to_string(SimError e) {
    switch (e) {
        case SimError::Unreachable: return "Unreachable";
        case SimError::AlreadyDropped: return "AlreadyDropped";
    }
    return "?";
}

SurfaceProbe probe_object_surface(const ObjectModel& obj, const Pose& object_pose,
                                  const Vec3& probe) {
    SurfaceProbe out;
    if (obj.is_sphere()) {
        double R = obj.sphere().radius;
        Vec3 d = object_pose.position - probe;
        double dist = d.norm();
        if (dist < 1e-12) {
            out.closest_point = object_pose.position + Vec3{R, 0.0, 0.0};
            out.inward_normal = Vec3::unit_x();
            out.signed_distance = -R;
            return out;
        }
        out.inward_normal = d / dist;
        out.closest_point = object_pose.position - R * out.inward_normal;
        out.signed_distance = dist - R;
        return out;
    }

    const Box& b = obj.box();
    Vec3 half{0.5 * b.dx, 0.5 * b.dy, 0.5 * b.dz};
    // Into the box frame.
    Vec3 local = quat_rotate(object_pose.orientation.conjugate(), probe - object_pose.position);
    Vec3 clamped{clamp(local.x, -half.x, half.x),
                 clamp(local.y, -half.y, half.y),
                 clamp(local.z, -half.z, half.z)};
    bool inside = (clamped.x == local.x && clamped.y == local.y && clamped.z == local.z);
    if (!inside) {
        Vec3 cp_world = quat_rotate(object_pose.orientation, clamped) + object_pose.position;
        Vec3 d = cp_world - probe;
        double dist = d.norm();
        out.closest_point = cp_world;
        out.inward_normal = (dist < 1e-12) ? Vec3::unit_z() : d / dist;
        out.signed_distance = dist;
        return out;
    }
    // Probe inside the box: push out through the nearest face.
    double best = half.x - std::abs(local.x);
    int axis = 0;
    if (half.y - std::abs(local.y) < best) { best = half.y - std::abs(local.y); axis = 1; }
    if (half.z - std::abs(local.z) < best) { best = half.z - std::abs(local.z); axis = 2; }
    Vec3 cp_local = local;
    Vec3 n_local = Vec3::zero();
    if (axis == 0) { cp_local.x = (local.x >= 0.0 ? half.x : -half.x); n_local.x = (local.x >= 0.0 ? -1.0 : 1.0); }
    if (axis == 1) { cp_local.y = (local.y >= 0.0 ? half.y : -half.y); n_local.y = (local.y >= 0.0 ? -1.0 : 1.0); }
    if (axis == 2) { cp_local.z = (local.z >= 0.0 ? half.z : -half.z); n_local.z = (local.z >= 0.0 ? -1.0 : 1.0); }
    out.closest_point = quat_rotate(object_pose.orientation, cp_local) + object_pose.position;
    out.inward_normal = quat_rotate(object_pose.orientation, n_local);
    out.signed_distance = -best;
    return out;
}

double roller_gap(const GrasperConfig& config, const ObjectModel& obj,
                  const Pose& object_pose, const FingerFrames& frames) {
    SurfaceProbe probe = probe_object_surface(obj, object_pose, frames.roller_center);
    return probe.signed_distance - config.roller_radius_r;
}

Expected<WorldState, SimError> init_grasp(const GrasperConfig& config,
                                          const WorldParams& params,
                                          const ObjectModel& object_model,
                                          const Pose& start,
                                          std::uint64_t seed) {
    config.validate();
    object_model.validate();

    WorldState s;
    s.config = config;
    s.params = params;
    s.object_model = object_model;
    s.object = start;
    s.prev_object = start;
    s.rng_seed = seed;
    s.grasp_height_mm = start.position.z;

    for (int i = 0; i < 3; ++i) {
        auto gap_at = [&](double theta1) {
            FingerFrames f = forward_finger(config, i, theta1, 0.0).value();
            return roller_gap(config, object_model, start, f);
        };
        // Scan inward for the first touching angle, then bisect.
        const double step_rad = deg_to_rad(0.5);
        double lo = params.base_min;
        double prev_gap = gap_at(lo);
        bool found = false;
        double hi = lo;
        for (double t = lo + step_rad; t <= params.base_max + 1e-12; t += step_rad) {
            double g = gap_at(t);
            if (prev_gap > 0.0 && g <= 0.0) {
                hi = t;
                found = true;
                break;
            }
            lo = t;
            prev_gap = g;
        }
        if (!found) return SimError::Unreachable;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (gap_at(mid) <= 0.0) hi = mid; else lo = mid;
        }
        s.joints.base(i) = hi;  // closed side, gap <= 0
        s.joints.pivot(i) = 0.0;
        s.joints.roller(i) = 0.0;
    }

    refresh_contacts(s);
    s.dropped = check_drop(s);
    return s;
}

TwistSolve solve_object_twist(const std::array<Vec3, 3>& contact_points,
                              const std::array<Vec3, 3>& surface_velocities,
                              const std::array<bool, 3>& active,
                              const Vec3& x_obj) {
    TwistSolve out;
    out.v = Vec3::zero();
    out.omega = Vec3::zero();

    int n_active = 0;
    for (bool a : active) n_active += a ? 1 : 0;
    if (n_active == 0) return out;

    Eigen::MatrixXd A(3 * n_active, 6);
    Eigen::VectorXd b(3 * n_active);
    int row = 0;
    for (int i = 0; i < 3; ++i) {
        if (!active[i]) continue;
        Vec3 r = contact_points[i] - x_obj;
        // v + omega x r  ==  [I | -skew(r)] [v; omega]
        A.block<3, 3>(row, 0) = Eigen::Matrix3d::Identity();
        Eigen::Matrix3d skew;
        skew << 0.0, -r.z, r.y,
                r.z, 0.0, -r.x,
                -r.y, r.x, 0.0;
        A.block<3, 3>(row, 3) = -skew;
        b.segment<3>(row) = Eigen::Vector3d(surface_velocities[i].x,
                                            surface_velocities[i].y,
                                            surface_velocities[i].z);
        row += 3;
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    Eigen::VectorXd x = cod.solve(b);
    out.v = {x[0], x[1], x[2]};
    out.omega = {x[3], x[4], x[5]};

    row = 0;
    for (int i = 0; i < 3; ++i) {
        if (!active[i]) continue;
        Eigen::Vector3d res = A.block<3, 6>(row, 0) * x - b.segment<3>(row);
        out.slip_residual[i] = res.norm();
        row += 3;
    }
    return out;
}

Expected<WorldState, SimError> step(const WorldState& state, const JointCommand& command) {
    if (state.dropped) return SimError::AlreadyDropped;

    WorldState s = state;

    // Joint motion this step, under the world's rate and range limits.
    JointVector next = s.joints;
    for (int i = 0; i < 3; ++i) {
        next.base(i) = clamp(rate_limited(s.joints.base(i), command.targets.base(i),
                                          s.params.base_rate_limit),
                             s.params.base_min, s.params.base_max);
        next.pivot(i) = clamp(rate_limited(s.joints.pivot(i), command.targets.pivot(i),
                                           s.params.pivot_rate_limit),
                              -s.config.pivot_limit, s.config.pivot_limit);
        next.roller(i) = rate_limited(s.joints.roller(i), command.targets.roller(i),
                                      s.params.roller_rate_limit);
    }

    // Roller surface velocities at the current contacts.
    std::array<Vec3, 3> surf_vel{};
    std::array<Vec3, 3> points{};
    std::array<bool, 3> active{};
    for (int i = 0; i < 3; ++i) {
        FingerFrames f = frames_of(s.config, s.joints, i);
        double w1 = next.base(i) - s.joints.base(i);
        double w2 = next.pivot(i) - s.joints.pivot(i);
        double w3 = next.roller(i) - s.joints.roller(i);
        const Vec3& p = s.contacts[i].point;
        surf_vel[i] = w1 * cross(f.base_axis, p - f.base_origin) +
                      w2 * cross(f.pivot_axis, p - f.roller_center) +
                      w3 * cross(f.roller_spin_axis, p - f.roller_center);
        points[i] = p;
        active[i] = s.gaps[i] <= s.params.contact_gap_tolerance_mm;
    }

    s.last_twist = solve_object_twist(points, surf_vel, active, s.object.position);

    // First-order pose integration (dt = 1 step).
    s.prev_object = s.object;
    s.object.position += s.last_twist.v;
    double ang = s.last_twist.omega.norm();
    if (ang > 1e-15) {
        s.object.orientation =
            quat_mul(quat_from_angle_axis(s.last_twist.omega / ang, ang), s.object.orientation);
    }
    s.object.orientation.normalize();

    s.joints = next;
    s.step_index = state.step_index + 1;
    refresh_contacts(s);
    s.dropped = check_drop(s);
    return s;
}

SensorFrame read_sensors(const WorldState& state) {
    SensorFrame f;
    f.joints_meas = state.joints;
    f.object_pose_meas =
        measure_pose(state.object, state.params, state.rng_seed, state.step_index);
    int prev_index = state.step_index > 0 ? state.step_index - 1 : 0;
    f.previous_object_pose_meas =
        measure_pose(state.prev_object, state.params, state.rng_seed, prev_index);
    return f;
}

bool check_drop(const WorldState& state) {
    for (int i = 0; i < 3; ++i) {
        FingerFrames f = frames_of(state.config, state.joints, i);
        if (roller_gap(state.config, state.object_model, state.object, f) >
            state.params.drop_gap_mm) {
            return true;
        }
    }
    return state.grasp_height_mm - state.object.position.z > state.params.drop_fall_mm;
}

}  // namespace roller
