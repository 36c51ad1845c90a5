#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstring>

#include "roller/rng.hpp"
#include "roller/simworld.hpp"

using namespace roller;

namespace {

// Independent least-squares oracle: exact-line-search gradient descent
// from zero on |Ax - b|^2. Started at zero the iterates stay in the row
// space, so the limit is the minimum-norm minimizer.
Eigen::VectorXd descend_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                      int max_iters = 2000000) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    double scale = std::max(1.0, b.norm());
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd g = 2.0 * A.transpose() * (A * x - b);
        if (g.norm() < 1e-12 * scale) break;
        Eigen::VectorXd Ag = A * g;
        double denom = 2.0 * Ag.squaredNorm();
        if (denom <= 0.0) break;
        double t = g.squaredNorm() / denom;
        x -= t * g;
    }
    return x;
}

// Column-scaled variant for well-conditioned full-rank systems (the
// unique minimizer is scale-invariant).
Eigen::VectorXd descend_least_squares_scaled(const Eigen::MatrixXd& A,
                                             const Eigen::VectorXd& b) {
    Eigen::VectorXd scale(A.cols());
    for (long j = 0; j < A.cols(); ++j) scale[j] = std::max(1e-12, A.col(j).norm());
    Eigen::MatrixXd As = A;
    for (long j = 0; j < A.cols(); ++j) As.col(j) /= scale[j];
    Eigen::VectorXd y = descend_least_squares(As, b, 500000);
    return y.cwiseQuotient(scale);
}

Eigen::MatrixXd twist_matrix(const std::array<Vec3, 3>& points, const Vec3& x_obj) {
    Eigen::MatrixXd A(9, 6);
    for (int i = 0; i < 3; ++i) {
        Vec3 r = points[i] - x_obj;
        A.block<3, 3>(3 * i, 0) = Eigen::Matrix3d::Identity();
        Eigen::Matrix3d skew;
        skew << 0, -r.z, r.y, r.z, 0, -r.x, -r.y, r.x, 0;
        A.block<3, 3>(3 * i, 3) = -skew;
    }
    return A;
}

WorldState default_grasp(std::uint64_t seed = 1, double sigma_pos = 0.0,
                         double sigma_ang = 0.0) {
    GrasperConfig config;
    WorldParams params;
    params.sigma_pos_mm = sigma_pos;
    params.sigma_ang_rad = sigma_ang;
    ObjectModel sphere;
    sphere.shape = Sphere{30.0};
    Pose start;
    start.position = {0.0, 0.0, 210.0};
    auto state = init_grasp(config, params, sphere, start, seed);
    REQUIRE(state.has_value());
    return *state;
}

}  // namespace

TEST_CASE("probe_object_surface sphere") {
    ObjectModel obj;
    obj.shape = Sphere{30.0};
    Pose pose;
    pose.position = {0.0, 0.0, 100.0};
    SurfaceProbe p = probe_object_surface(obj, pose, {0.0, 0.0, 150.0});
    CHECK(p.signed_distance == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(distance(p.inward_normal, {0.0, 0.0, -1.0}) < 1e-12);
    CHECK(distance(p.closest_point, {0.0, 0.0, 130.0}) < 1e-12);
}

TEST_CASE("probe_object_surface box respects orientation") {
    ObjectModel obj;
    obj.shape = Box{60.0, 60.0, 80.0};
    Pose pose;
    pose.position = {0.0, 0.0, 0.0};

    SUBCASE("face contact") {
        SurfaceProbe p = probe_object_surface(obj, pose, {50.0, 0.0, 0.0});
        CHECK(p.signed_distance == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(distance(p.closest_point, {30.0, 0.0, 0.0}) < 1e-12);
        CHECK(distance(p.inward_normal, {-1.0, 0.0, 0.0}) < 1e-12);
    }

    SUBCASE("edge closest point") {
        SurfaceProbe p = probe_object_surface(obj, pose, {50.0, 50.0, 0.0});
        CHECK(distance(p.closest_point, {30.0, 30.0, 0.0}) < 1e-12);
        CHECK(p.signed_distance == doctest::Approx(std::sqrt(800.0)).epsilon(1e-12));
    }

    SUBCASE("rotated box moves the face") {
        Pose rot = pose;
        rot.orientation = quat_from_angle_axis(Vec3::unit_z(), kPi / 2.0);
        SurfaceProbe p = probe_object_surface(obj, rot, {0.0, 45.0, 0.0});
        // The 80-long axis still points along z; y faces stay at 30.
        CHECK(p.signed_distance == doctest::Approx(15.0).epsilon(1e-9));
    }

    SUBCASE("probe inside pushes out the nearest face") {
        SurfaceProbe p = probe_object_surface(obj, pose, {28.0, 0.0, 0.0});
        CHECK(p.signed_distance == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(distance(p.closest_point, {30.0, 0.0, 0.0}) < 1e-12);
    }
}

TEST_CASE("init_grasp closes symmetrically on a centered sphere") {
    WorldState s = default_grasp();
    CHECK(s.joints.base(0) == doctest::Approx(s.joints.base(1)).epsilon(1e-9));
    CHECK(s.joints.base(1) == doctest::Approx(s.joints.base(2)).epsilon(1e-9));
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(s.gaps[i]) < 1e-6);
        CHECK(s.joints.pivot(i) == 0.0);
        CHECK(s.joints.roller(i) == 0.0);
    }
    CHECK_FALSE(s.dropped);
}

TEST_CASE("init_grasp far object is unreachable") {
    GrasperConfig config;
    WorldParams params;
    ObjectModel sphere;
    sphere.shape = Sphere{30.0};
    Pose start;
    start.position = {1000.0, 0.0, 210.0};
    auto state = init_grasp(config, params, sphere, start, 1);
    REQUIRE_FALSE(state.has_value());
    CHECK(state.error() == SimError::Unreachable);
}

TEST_CASE("init_grasp is bit-deterministic") {
    WorldState a = default_grasp(42);
    WorldState b = default_grasp(42);
    CHECK(std::memcmp(a.joints.v.data(), b.joints.v.data(), sizeof(a.joints.v)) == 0);
    CHECK(a.object.position.x == b.object.position.x);
    CHECK(a.gaps[0] == b.gaps[0]);
}

TEST_CASE("solve_object_twist zero command") {
    WorldState s = default_grasp();
    std::array<Vec3, 3> points{s.contacts[0].point, s.contacts[1].point, s.contacts[2].point};
    std::array<Vec3, 3> vel{Vec3::zero(), Vec3::zero(), Vec3::zero()};
    TwistSolve t = solve_object_twist(points, vel, {true, true, true}, s.object.position);
    CHECK(t.v.norm() < 1e-12);
    CHECK(t.omega.norm() < 1e-12);
    for (double r : t.slip_residual) CHECK(r < 1e-12);
}

TEST_CASE("solve_object_twist recovers a consistent yaw") {
    Vec3 center{0.0, 0.0, 100.0};
    Vec3 omega{0.0, 0.0, 0.13};
    std::array<Vec3, 3> points{};
    std::array<Vec3, 3> vel{};
    for (int i = 0; i < 3; ++i) {
        double az = 2.0 * kPi * i / 3.0;
        points[i] = center + Vec3{30.0 * std::cos(az), 30.0 * std::sin(az), 0.0};
        vel[i] = cross(omega, points[i] - center);
    }
    TwistSolve t = solve_object_twist(points, vel, {true, true, true}, center);
    CHECK(distance(t.omega, omega) < 1e-9);
    CHECK(t.v.norm() < 1e-9);
    for (double r : t.slip_residual) CHECK(r < 1e-9);
}

TEST_CASE("solve_object_twist reports slip for contradictory commands") {
    Vec3 center{0.0, 0.0, 100.0};
    std::array<Vec3, 3> points{};
    std::array<Vec3, 3> vel{};
    for (int i = 0; i < 3; ++i) {
        double az = 2.0 * kPi * i / 3.0;
        points[i] = center + Vec3{30.0 * std::cos(az), 30.0 * std::sin(az), 0.0};
        Vec3 tangent = normalized(cross(Vec3::unit_z(), points[i] - center));
        vel[i] = (i == 0 ? -2.0 : 2.0) * tangent;
    }
    TwistSolve t = solve_object_twist(points, vel, {true, true, true}, center);
    double max_res = std::max({t.slip_residual[0], t.slip_residual[1], t.slip_residual[2]});
    CHECK(max_res > 0.1);
}

TEST_CASE("twist solve matches the descent oracle on random configurations") {
    Rng rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 center{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(80, 120)};
        std::array<Vec3, 3> points{};
        std::array<Vec3, 3> vel{};
        for (int i = 0; i < 3; ++i) {
            points[i] = center + 30.0 * rng.unit_vector();
            vel[i] = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        }
        TwistSolve t = solve_object_twist(points, vel, {true, true, true}, center);

        Eigen::MatrixXd A = twist_matrix(points, center);
        Eigen::VectorXd b(9);
        for (int i = 0; i < 3; ++i) {
            b.segment<3>(3 * i) = Eigen::Vector3d(vel[i].x, vel[i].y, vel[i].z);
        }
        Eigen::VectorXd oracle = descend_least_squares_scaled(A, b);
        Eigen::VectorXd mine(6);
        mine << t.v.x, t.v.y, t.v.z, t.omega.x, t.omega.y, t.omega.z;
        CHECK((mine - oracle).norm() < 1e-6);
    }
}

TEST_CASE("rank-deficient twist solve takes the minimum-norm solution") {
    // One active contact leaves rotation about the contact point free.
    Vec3 center{0.0, 0.0, 100.0};
    std::array<Vec3, 3> points{center + Vec3{30.0, 0.0, 0.0}, Vec3::zero(), Vec3::zero()};
    std::array<Vec3, 3> vel{Vec3{0.0, 2.0, 0.0}, Vec3::zero(), Vec3::zero()};
    TwistSolve t = solve_object_twist(points, vel, {true, false, false}, center);

    Eigen::MatrixXd A(3, 6);
    Vec3 r = points[0] - center;
    A.block<3, 3>(0, 0) = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d skew;
    skew << 0, -r.z, r.y, r.z, 0, -r.x, -r.y, r.x, 0;
    A.block<3, 3>(0, 3) = -skew;
    Eigen::VectorXd b(3);
    b << 0.0, 2.0, 0.0;
    Eigen::VectorXd oracle = descend_least_squares(A, b);
    Eigen::VectorXd mine(6);
    mine << t.v.x, t.v.y, t.v.z, t.omega.x, t.omega.y, t.omega.z;
    CHECK((mine - oracle).norm() < 1e-6);
    CHECK(t.slip_residual[0] < 1e-9);
}

TEST_CASE("step with a hold-everything command leaves the object still") {
    WorldState s = default_grasp();
    JointCommand cmd;
    cmd.targets = s.joints;
    auto next = step(s, cmd);
    REQUIRE(next.has_value());
    CHECK(distance(next->object.position, s.object.position) < 1e-12);
    CHECK(std::abs(next->object.orientation.w - s.object.orientation.w) < 1e-12);
    for (double res : next->last_twist.slip_residual) CHECK(res < 1e-12);
    CHECK(next->step_index == 1);
}

TEST_CASE("step is bit-deterministic for a fixed command sequence") {
    for (double sigma : {0.0, 1.0}) {
        WorldState a = default_grasp(7, sigma, deg_to_rad(1.0) * (sigma > 0 ? 1.0 : 0.0));
        WorldState b = default_grasp(7, sigma, deg_to_rad(1.0) * (sigma > 0 ? 1.0 : 0.0));
        for (int k = 0; k < 25; ++k) {
            JointCommand cmd;
            cmd.targets = a.joints;
            for (int i = 0; i < 3; ++i) cmd.targets.roller(i) += 0.05 * (k % 3);
            auto na = step(a, cmd);
            auto nb = step(b, cmd);
            REQUIRE(na.has_value());
            REQUIRE(nb.has_value());
            a = *na;
            b = *nb;
            CHECK(std::memcmp(a.joints.v.data(), b.joints.v.data(), sizeof(a.joints.v)) == 0);
            CHECK(a.object.position.x == b.object.position.x);
            CHECK(a.object.orientation.w == b.object.orientation.w);
        }
    }
}

TEST_CASE("step rejects an already-dropped world") {
    WorldState s = default_grasp();
    s.dropped = true;
    JointCommand cmd;
    cmd.targets = s.joints;
    auto next = step(s, cmd);
    REQUIRE_FALSE(next.has_value());
    CHECK(next.error() == SimError::AlreadyDropped);
}

TEST_CASE("read_sensors with zero noise returns the truth") {
    WorldState s = default_grasp(3, 0.0, 0.0);
    SensorFrame f = read_sensors(s);
    CHECK(distance(f.object_pose_meas.position, s.object.position) < 1e-12);
    CHECK(std::abs(f.object_pose_meas.orientation.w - s.object.orientation.w) < 1e-12);
    for (int i = 0; i < 9; ++i) CHECK(f.joints_meas[i] == s.joints[i]);
}

TEST_CASE("read_sensors draws identically on repeated calls") {
    WorldState s = default_grasp(3, 1.0, deg_to_rad(1.0));
    SensorFrame a = read_sensors(s);
    SensorFrame b = read_sensors(s);
    CHECK(a.object_pose_meas.position.x == b.object_pose_meas.position.x);
    CHECK(a.object_pose_meas.orientation.x == b.object_pose_meas.orientation.x);
    CHECK(a.previous_object_pose_meas.position.y == b.previous_object_pose_meas.position.y);
}

TEST_CASE("read_sensors position noise has the configured spread") {
    WorldState s = default_grasp(11, 1.0, 0.0);
    double sum = 0.0, sq = 0.0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        s.step_index = k;
        SensorFrame f = read_sensors(s);
        double dx = f.object_pose_meas.position.x - s.object.position.x;
        sum += dx;
        sq += dx * dx;
    }
    double mean = sum / n;
    double stddev = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(stddev - 1.0) < 0.05);
}

TEST_CASE("check_drop rules") {
    WorldState s = default_grasp();
    CHECK_FALSE(check_drop(s));

    SUBCASE("teleporting the object 100 mm down drops it") {
        WorldState fallen = s;
        fallen.object.position.z -= 100.0;
        CHECK(check_drop(fallen));
    }

    SUBCASE("a 4 mm gap stays within the band") {
        WorldState shifted = s;
        shifted.object.position.z += 5.0;  // raises every gap by roughly 4 mm
        bool any_over_4 = false;
        bool any_over_5 = false;
        for (int i = 0; i < 3; ++i) {
            FingerFrames f =
                forward_finger(shifted.config, i, shifted.joints.base(i), shifted.joints.pivot(i))
                    .value();
            double gap = roller_gap(shifted.config, shifted.object_model, shifted.object, f);
            any_over_4 = any_over_4 || gap > 4.0;
            any_over_5 = any_over_5 || gap > 5.0;
        }
        CHECK_FALSE(any_over_5);
        CHECK(check_drop(shifted) == false);
        (void)any_over_4;
    }

    SUBCASE("a 10 mm lift opens the gaps past the drop band") {
        WorldState shifted = s;
        shifted.object.position.z += 10.0;
        CHECK(check_drop(shifted));
    }
}

TEST_CASE("quaternion norm stays unit across many steps") {
    WorldState s = default_grasp();
    for (int k = 0; k < 2000; ++k) {
        JointCommand cmd;
        cmd.targets = s.joints;
        for (int i = 0; i < 3; ++i) cmd.targets.roller(i) += 0.1;
        auto next = step(s, cmd);
        REQUIRE(next.has_value());
        s = *next;
        if (s.dropped) break;
        CHECK(std::abs(s.object.orientation.norm() - 1.0) < 1e-9);
    }
}
