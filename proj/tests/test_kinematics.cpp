#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roller/kinematics.hpp"
#include "roller/quat.hpp"
#include "roller/rng.hpp"

using namespace roller;

namespace {

Vec3 rotate_about_axis(const Vec3& axis, double angle, const Vec3& v) {
    return quat_rotate(quat_from_angle_axis(axis, angle), v);
}

}  // namespace

TEST_CASE("forward_finger neutral pose puts the roller 170 mm up") {
    GrasperConfig config;  // link_a 48, link_b 122
    auto f = forward_finger(config, 0, 0.0, 0.0);
    REQUIRE(f.has_value());
    Vec3 expect = f->base_origin + Vec3{0.0, 0.0, 170.0};
    CHECK(distance(f->roller_center, expect) < 1e-9);
    CHECK(std::abs(dot(f->roller_spin_axis, f->pivot_axis)) < 1e-9);
    CHECK(f->base_axis.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f->pivot_axis.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f->roller_spin_axis.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pivot angle spins Z3 about Z2 without moving the roller center") {
    GrasperConfig config;
    auto f0 = forward_finger(config, 1, 0.2, 0.0);
    auto f45 = forward_finger(config, 1, 0.2, kPi / 4.0);
    REQUIRE(f0.has_value());
    REQUIRE(f45.has_value());
    CHECK(distance(f0->roller_center, f45->roller_center) < 1e-12);
    Vec3 expected_z3 = rotate_about_axis(f0->pivot_axis, kPi / 4.0, f0->roller_spin_axis);
    CHECK(distance(expected_z3, f45->roller_spin_axis) < 1e-9);
    CHECK(std::abs(dot(f45->roller_spin_axis, f45->pivot_axis)) < 1e-9);
}

TEST_CASE("three fingers are 120-degree copies of each other") {
    GrasperConfig config;
    auto fa = forward_finger(config, 0, 0.3, 0.1);
    auto fb = forward_finger(config, 1, 0.3, 0.1);
    auto fc = forward_finger(config, 2, 0.3, 0.1);
    REQUIRE(fa.has_value());
    Vec3 rot_b = rotate_about_axis(Vec3::unit_z(), 2.0 * kPi / 3.0, fa->roller_center);
    Vec3 rot_c = rotate_about_axis(Vec3::unit_z(), 4.0 * kPi / 3.0, fa->roller_center);
    CHECK(distance(rot_b, fb->roller_center) < 1e-9);
    CHECK(distance(rot_c, fc->roller_center) < 1e-9);
}

TEST_CASE("forward_finger rejects bad finger index") {
    GrasperConfig config;
    CHECK_FALSE(forward_finger(config, 3, 0.0, 0.0).has_value());
    CHECK(forward_finger(config, 3, 0.0, 0.0).error() == KinError::BadFingerIndex);
}

TEST_CASE("contact_state on the collinear sphere example") {
    FingerFrames f;
    f.roller_center = Vec3::zero();
    ObjectModel obj;
    obj.shape = Sphere{30.0};

    SUBCASE("touching exactly") {
        auto cs = contact_state(f, obj, {51.5, 0.0, 0.0}, 21.5);
        REQUIRE(cs.has_value());
        CHECK(distance(cs->normal, Vec3::unit_x()) < 1e-12);
        CHECK(distance(cs->point, {21.5, 0.0, 0.0}) < 1e-12);
        CHECK(distance(cs->point, Vec3{51.5, 0.0, 0.0}) == doctest::Approx(30.0).epsilon(1e-9));
    }

    SUBCASE("5 mm gap is no contact") {
        auto cs = contact_state(f, obj, {56.5, 0.0, 0.0}, 21.5);
        REQUIRE_FALSE(cs.has_value());
        CHECK(cs.error() == KinError::NoContact);
    }

    SUBCASE("coincident centers are degenerate") {
        auto cs = contact_state(f, obj, Vec3::zero(), 21.5);
        REQUIRE_FALSE(cs.has_value());
        CHECK(cs.error() == KinError::Degenerate);
    }
}

TEST_CASE("contact_velocity_from_twist") {
    CHECK(distance(contact_velocity_from_twist({1, 0, 0}, Vec3::zero(), {5, 5, 5}, {1, 1, 1}),
                   Vec3{1, 0, 0}) < 1e-15);
    CHECK(distance(contact_velocity_from_twist(Vec3::zero(), {0, 0, 1}, {31, 1, 7}, {1, 1, 7}),
                   Vec3{0, 30, 0}) < 1e-12);
    CHECK(contact_velocity_from_twist(Vec3::zero(), {0.4, -0.2, 0.9}, {2, 3, 4}, {2, 3, 4})
              .norm() == 0.0);
}

TEST_CASE("decompose_contact_motion hand-worked example") {
    double s3 = std::sqrt(3.0);
    Vec3 z_cb{0.5, 0.0, s3 / 2.0};
    Vec3 n_con{1.0, 0.0, 0.0};
    Vec3 dx{1.0, 3.0, 4.0 + s3};

    ContactDecomposition d = decompose_contact_motion(dx, z_cb, n_con);
    CHECK_FALSE(d.degenerate);
    CHECK(d.alpha == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.beta == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(distance(d.delta_x_cb, {1.0, 0.0, s3}) < 1e-12);
    CHECK(distance(d.delta_x_cr, {0.0, 3.0, 4.0}) < 1e-12);
    CHECK(distance(d.z_cr_hat, {0.0, 0.6, 0.8}) < 1e-12);
    CHECK(distance(d.alpha * z_cb + d.beta * d.z_cr_hat, dx) < 1e-12);
}

TEST_CASE("decompose_contact_motion zero base component") {
    double s3 = std::sqrt(3.0);
    Vec3 z_cb{0.5, 0.0, s3 / 2.0};
    ContactDecomposition d = decompose_contact_motion({0.0, 3.0, 4.0}, z_cb, {1.0, 0.0, 0.0});
    CHECK_FALSE(d.degenerate);
    CHECK(std::abs(d.alpha) < 1e-12);
    CHECK(distance(d.delta_x_cr, {0.0, 3.0, 4.0}) < 1e-12);
}

TEST_CASE("decompose_contact_motion parallel input degenerates to projection") {
    Vec3 z_cb = normalized(Vec3{0.3, -0.4, 0.86});
    ContactDecomposition d = decompose_contact_motion(2.0 * z_cb, z_cb, {1.0, 0.0, 0.0});
    CHECK(d.degenerate);
    CHECK(d.alpha == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.delta_x_cr.norm() == 0.0);
    CHECK(distance(d.delta_x_cb, 2.0 * z_cb) < 1e-12);
}

TEST_CASE("decomposition reconstruction and tangency over random triples") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 1000) {
        Vec3 z_cb = rng.unit_vector();
        Vec3 n_con = rng.unit_vector();
        Vec3 dx{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        if (cross(z_cb, dx).norm() < 1e-3) continue;
        if (std::abs(dot(z_cb, n_con)) < 1e-3) continue;
        ContactDecomposition d = decompose_contact_motion(dx, z_cb, n_con);
        if (d.degenerate) continue;
        ++checked;
        CHECK(distance(d.alpha * z_cb + d.beta * d.z_cr_hat, dx) < 1e-9);
        CHECK(std::abs(dot(d.z_cr_hat, n_con)) < 1e-9);
        CHECK(distance(d.delta_x_cb + d.delta_x_cr, dx) < 1e-9);
    }
}

TEST_CASE("decomposition scales exactly with power-of-two input scaling") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Vec3 z_cb = rng.unit_vector();
        Vec3 n_con = rng.unit_vector();
        Vec3 dx{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        ContactDecomposition d1 = decompose_contact_motion(dx, z_cb, n_con);
        ContactDecomposition d2 = decompose_contact_motion(2.0 * dx, z_cb, n_con);
        if (d1.degenerate || d2.degenerate) continue;
        CHECK(d2.alpha == 2.0 * d1.alpha);
        CHECK(d2.beta == 2.0 * d1.beta);
        CHECK(d2.z_cr_hat.x == d1.z_cr_hat.x);
        CHECK(d2.z_cr_hat.y == d1.z_cr_hat.y);
        CHECK(d2.z_cr_hat.z == d1.z_cr_hat.z);
    }
}

TEST_CASE("pivot_angle_for aligned and hand-worked cases") {
    SUBCASE("already aligned gives zero") {
        // z2 x z_cr = z1 for z1=[0,1,0], z2=[0,0,1], z_cr=[1,0,0] (z0 ties keep it).
        auto theta = pivot_angle_for({0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 1});
        REQUIRE(theta.has_value());
        CHECK(std::abs(*theta) < 1e-12);
    }

    SUBCASE("45-degree case") {
        double s2 = std::sqrt(0.5);
        auto theta = pivot_angle_for({0, 1, 0}, {0, 0, 1}, {s2, s2, 0}, {0, 0, 1});
        REQUIRE(theta.has_value());
        CHECK(*theta == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    }

    SUBCASE("roll direction parallel to the pivot axis is degenerate") {
        auto theta = pivot_angle_for({0, 1, 0}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1});
        REQUIRE_FALSE(theta.has_value());
        CHECK(theta.error() == KinError::DegenerateRollDirection);
    }
}

TEST_CASE("pivot alignment closure and sign rule on constructed feasible cases") {
    GrasperConfig config;
    Rng rng(99);
    int done = 0;
    while (done < 1000) {
        int finger = static_cast<int>(rng.next_below(3));
        double theta1 = rng.uniform(0.05, 1.2);
        double theta2_now = rng.uniform(-1.4, 1.4);
        FingerFrames f = forward_finger(config, finger, theta1, theta2_now).value();

        // Desired spin axis within the feasible hemisphere regime.
        double theta2_star = rng.uniform(0.0, kPi / 2.0 - 0.01);
        Vec3 z3_star = rotate_about_axis(f.pivot_axis, theta2_star, f.base_axis);
        Vec3 n_con = rng.unit_vector();
        if (std::abs(dot(f.pivot_axis, n_con)) < 0.15) continue;
        Vec3 roll_line = cross(z3_star, n_con);
        if (roll_line.norm() < 0.1) continue;
        Vec3 z_cr = normalized(roll_line);

        auto theta2 = pivot_angle_for(f.base_axis, f.pivot_axis, z_cr, f.grasper_vertical,
                                      config.pivot_limit);
        REQUIRE(theta2.has_value());
        ++done;
        CHECK(std::abs(*theta2) <= kPi / 2.0 + 1e-12);
        CHECK(*theta2 == doctest::Approx(theta2_star).epsilon(1e-9));

        // Recompute frames at the returned pivot angle: the rolling
        // surface direction must be line-parallel to z_cr and the chosen
        // spin axis must honor the vertical-hemisphere rule.
        FingerFrames f2 = forward_finger(config, finger, theta1, *theta2).value();
        Vec3 realized = cross(f2.roller_spin_axis, n_con);
        CHECK(line_angle(realized, z_cr) < 1e-6);
        if (std::abs(dot(z3_star, f.grasper_vertical)) > 1e-9) {
            CHECK(dot(f2.roller_spin_axis, f.grasper_vertical) >= -1e-9);
        }
    }
}

TEST_CASE("roller_rate_for") {
    SUBCASE("equator contact with unit arm") {
        Vec3 z3{0, 0, 1};
        Vec3 n{1, 0, 0};
        Vec3 dx_cr = 21.5 * cross(z3, n);  // aligned with the rolling line
        auto w = roller_rate_for(dx_cr, z3, n, 21.5);
        REQUIRE(w.has_value());
        CHECK(*w == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("zero rolling component") {
        auto w = roller_rate_for(Vec3::zero(), {0, 0, 1}, {1, 0, 0}, 21.5);
        REQUIRE(w.has_value());
        CHECK(*w == 0.0);
    }

    SUBCASE("pole contact") {
        auto w = roller_rate_for({1, 0, 0}, {0, 0, 1}, {0, 0, 1}, 21.5);
        REQUIRE_FALSE(w.has_value());
        CHECK(w.error() == KinError::PoleContact);
    }

    SUBCASE("sign keeps surface velocity along dx_cr") {
        Vec3 z3{0, 0, 1};
        Vec3 n{1, 0, 0};
        Vec3 roll = cross(z3, n);
        auto w = roller_rate_for(-3.0 * roll, z3, n, 21.5);
        REQUIRE(w.has_value());
        CHECK(*w < 0.0);
        CHECK(dot(*w * roll, -3.0 * roll) > 0.0);
    }
}

TEST_CASE("base_rate_for") {
    GrasperConfig config;
    FingerFrames f = forward_finger(config, 0, 0.0, 0.0).value();

    SUBCASE("zero demand") {
        auto w = base_rate_for(Vec3::zero(), f, f.roller_center);
        REQUIRE(w.has_value());
        CHECK(*w == 0.0);
    }

    SUBCASE("unit ratio") {
        // Contact at the roller center: arm |z1 x (p - o1)| = 170.
        Vec3 arm = cross(f.base_axis, f.roller_center - f.base_origin);
        CHECK(arm.norm() == doctest::Approx(170.0).epsilon(1e-12));
        Vec3 dx_cb = 170.0 * normalized(arm);
        auto w = base_rate_for(dx_cb, f, f.roller_center);
        REQUIRE(w.has_value());
        CHECK(*w == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("point on the base axis has no moment arm") {
        Vec3 p = f.base_origin + 5.0 * f.base_axis;
        auto w = base_rate_for({1, 0, 0}, f, p);
        REQUIRE_FALSE(w.has_value());
        CHECK(w.error() == KinError::ZeroMomentArm);
    }
}
