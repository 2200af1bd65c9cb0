#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "insim/dynamics.hpp"
#include "insim/motion_env.hpp"
#include "insim/rng.hpp"

#include <cmath>
#include <numbers>

using namespace insim;

namespace {

RelativeState random_rel_state(Rng& rng, double pos_scale, double vel_scale) {
    RelativeState s;
    for (int k = 0; k < 3; ++k) {
        s.pos(k) = rng.uniform(-pos_scale, pos_scale);
        s.vel(k) = rng.uniform(-vel_scale, vel_scale);
    }
    return s;
}

InertialState random_chief(Rng& rng) {
    Vec3 dir;
    do {
        for (int k = 0; k < 3; ++k) {
            dir(k) = rng.normal();
        }
    } while (dir.norm() < 1e-6);
    dir.normalize();
    Vec3 vdir;
    do {
        for (int k = 0; k < 3; ++k) {
            vdir(k) = rng.normal();
        }
        vdir -= vdir.dot(dir) * dir;
    } while (vdir.norm() < 1e-6);
    vdir.normalize();
    const double r = rng.uniform(6.9e6, 7.1e6);
    const double v = rng.uniform(7.0e3, 7.8e3);
    // Slight radial velocity component keeps the orbit generic.
    return InertialState{r * dir, v * vdir + rng.uniform(-50.0, 50.0) * dir, 1.0};
}

RelativeState propagate_unforced(const RelativeState& s0, double n, double dt,
                                 int steps) {
    RelativeState s = s0;
    auto deriv = [&](double, const Vec6& x) {
        return cw_derivative(RelativeState::from_vec6(x), Vec3::Zero(), n, 1.0);
    };
    for (int k = 0; k < steps; ++k) {
        s = RelativeState::from_vec6(rk4_step(deriv, s.as_vec6(), k * dt, dt));
    }
    return s;
}

}  // namespace

TEST_CASE("mean motion") {
    CHECK(mean_motion(8.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));

    const double n = mean_motion(3.986004418e14, 7.0e6);
    CHECK(n == doctest::Approx(1.078e-3).epsilon(1e-3));
    CHECK(n * n * 7.0e6 * 7.0e6 * 7.0e6 ==
          doctest::Approx(3.986004418e14).epsilon(1e-12));

    // Quartering the radius-cubed scales the rate by 8.
    const double n4 = mean_motion(3.986004418e14, 4.0 * 7.0e6);
    CHECK(n4 == doctest::Approx(n / 8.0).epsilon(1e-15));

    CHECK_THROWS_AS(mean_motion(-1.0, 1.0), Error);
    CHECK_THROWS_AS(mean_motion(1.0, 0.0), Error);
}

TEST_CASE("relative-motion derivative structure") {
    const double n = 1.2e-3;

    const Vec6 at_origin = cw_derivative(RelativeState{}, Vec3::Zero(), n, 1.0);
    CHECK(at_origin.norm() == 0.0);

    RelativeState radial;
    radial.pos = Vec3(1.0, 0.0, 0.0);
    const Vec6 d_radial = cw_derivative(radial, Vec3::Zero(), n, 1.0);
    CHECK(d_radial(3) == doctest::Approx(3.0 * n * n).epsilon(1e-15));
    CHECK(d_radial(4) == 0.0);
    CHECK(d_radial(5) == 0.0);

    RelativeState along;
    along.vel = Vec3(0.0, 1.0, 0.0);
    const Vec6 d_along = cw_derivative(along, Vec3::Zero(), n, 1.0);
    CHECK(d_along(3) == doctest::Approx(2.0 * n).epsilon(1e-15));
    CHECK(d_along(4) == 0.0);
    CHECK(d_along(5) == 0.0);

    CHECK_THROWS_AS(cw_derivative(radial, Vec3::Zero(), n, 0.0), Error);
}

TEST_CASE("derivative is linear in state and thrust") {
    Rng rng(7);
    const double n = default_mean_motion();
    for (int trial = 0; trial < 50; ++trial) {
        const RelativeState s1 = random_rel_state(rng, 500.0, 3.0);
        const RelativeState s2 = random_rel_state(rng, 500.0, 3.0);
        Vec3 u1, u2;
        for (int k = 0; k < 3; ++k) {
            u1(k) = rng.uniform(-1.0, 1.0);
            u2(k) = rng.uniform(-1.0, 1.0);
        }
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        RelativeState mix;
        mix.pos = a * s1.pos + b * s2.pos;
        mix.vel = a * s1.vel + b * s2.vel;
        const Vec6 lhs = cw_derivative(mix, a * u1 + b * u2, n, 1.0);
        const Vec6 rhs = a * cw_derivative(s1, u1, n, 1.0) +
                         b * cw_derivative(s2, u2, n, 1.0);
        for (int k = 0; k < 6; ++k) {
            CHECK(lhs(k) == doctest::Approx(rhs(k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rk4 basics") {
    using Vec1 = Eigen::Matrix<double, 1, 1>;

    auto zero = [](double, const Vec1&) { return Vec1::Zero().eval(); };
    Vec1 x0;
    x0 << 3.5;
    CHECK(rk4_step(zero, x0, 0.0, 1.0)(0) == 3.5);

    // One step of x' = x from 1 over dt = 0.1 lands on e^0.1.
    auto identity = [](double, const Vec1& x) { return x; };
    Vec1 one;
    one << 1.0;
    CHECK(std::abs(rk4_step(identity, one, 0.0, 0.1)(0) - 1.10517091) < 1e-7);
    CHECK(std::abs(rk4_step(identity, one, 0.0, 0.1)(0) - std::exp(0.1)) < 1e-7);

    CHECK_THROWS_AS(rk4_step(identity, one, 0.0, 0.0), Error);
    auto blows_up = [](double, const Vec1&) {
        Vec1 bad;
        bad << std::numeric_limits<double>::infinity();
        return bad;
    };
    CHECK_THROWS_AS(rk4_step(blows_up, one, 0.0, 1.0), Error);
}

TEST_CASE("rk4 matches the closed-form relative motion") {
    Rng rng(11);
    const double n = default_mean_motion();
    for (int trial = 0; trial < 10; ++trial) {
        const RelativeState s0 = random_rel_state(rng, 1000.0, 3.0);
        const RelativeState numeric = propagate_unforced(s0, n, 1.0, 500);
        const RelativeState exact = cw_closed_form(s0, n, 500.0);
        const double pos_err = (numeric.pos - exact.pos).norm() /
                               std::max(exact.pos.norm(), 1.0);
        const double vel_err = (numeric.vel - exact.vel).norm() /
                               std::max(exact.vel.norm(), 1e-3);
        CHECK(pos_err < 1e-6);
        CHECK(vel_err < 1e-6);
    }
}

TEST_CASE("closed form: identity, out-of-plane oscillator, fine-step cross-check") {
    const double n = default_mean_motion();
    Rng rng(13);
    const RelativeState s0 = random_rel_state(rng, 800.0, 2.0);

    const RelativeState same = cw_closed_form(s0, n, 0.0);
    CHECK(same.pos == s0.pos);
    CHECK(same.vel == s0.vel);

    RelativeState z_only;
    z_only.pos = Vec3(0.0, 0.0, 1.0);
    const RelativeState half = cw_closed_form(z_only, n, std::numbers::pi / n);
    CHECK(half.pos.z() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(half.pos.x()) < 1e-9);

    // Fine-step integration agrees to 1e-8 over 300 s.
    RelativeState s = s0;
    auto deriv = [&](double, const Vec6& x) {
        return cw_derivative(RelativeState::from_vec6(x), Vec3::Zero(), n, 1.0);
    };
    const int steps = 30000;
    Vec6 x = s.as_vec6();
    for (int k = 0; k < steps; ++k) {
        x = rk4_step(deriv, x, k * 0.01, 0.01);
    }
    const RelativeState exact = cw_closed_form(s0, n, 300.0);
    CHECK((x.head<3>() - exact.pos).norm() / std::max(1.0, exact.pos.norm()) < 1e-8);
    CHECK((x.tail<3>() - exact.vel).norm() / std::max(1e-3, exact.vel.norm()) < 1e-8);

    CHECK_THROWS_AS(cw_closed_form(s0, n, -1.0), Error);
}

TEST_CASE("gravity with and without the oblateness term") {
    const auto params = OrbitParams::circular(kEarthMu, kDefaultChiefRadius);
    const double radius = 7.0e6;

    InertialState equatorial{{radius, 0.0, 0.0}, Vec3::Zero(), 2.0};
    const Vec3 point_mass =
        two_body_j2_accel(equatorial, Vec3::Zero(), params, false);
    CHECK(point_mass.x() ==
          doctest::Approx(-params.mu / (radius * radius)).epsilon(1e-13));
    CHECK(point_mass.y() == 0.0);
    CHECK(point_mass.z() == 0.0);

    // Oblateness at the equator pulls further inward along x, nothing along z.
    const Vec3 with_j2 = two_body_j2_accel(equatorial, Vec3::Zero(), params, true);
    const Vec3 pert_eq = with_j2 - point_mass;
    const double re_ratio = params.earth_radius / radius;
    const double expected_x =
        -1.5 * params.j2 * params.mu / (radius * radius) * re_ratio * re_ratio;
    CHECK(pert_eq.x() == doctest::Approx(expected_x).epsilon(1e-12));
    CHECK(pert_eq.z() == 0.0);

    // On the polar axis the z factor z(3 - 5 z^2/r^2) evaluates to -2R.
    InertialState polar{{0.0, 0.0, radius}, Vec3::Zero(), 2.0};
    const Vec3 pert_polar =
        two_body_j2_accel(polar, Vec3::Zero(), params, true) -
        two_body_j2_accel(polar, Vec3::Zero(), params, false);
    const double expected_z =
        3.0 * params.j2 * params.mu / (radius * radius) * re_ratio * re_ratio;
    CHECK(pert_polar.z() == doctest::Approx(expected_z).epsilon(1e-12));
    CHECK(pert_polar.x() == 0.0);

    // External force enters scaled by mass.
    const Vec3 pushed =
        two_body_j2_accel(equatorial, Vec3(3.0, 0.0, 0.0), params, false);
    CHECK(pushed.x() - point_mass.x() == doctest::Approx(1.5).epsilon(1e-15));

    CHECK_THROWS_AS(
        two_body_j2_accel(InertialState{Vec3::Zero(), Vec3::Zero(), 1.0},
                          Vec3::Zero(), params, true),
        Error);
}

TEST_CASE("oblateness force is mirror-symmetric in z") {
    const auto params = OrbitParams::circular(kEarthMu, kDefaultChiefRadius);
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 pos;
        for (int k = 0; k < 3; ++k) {
            pos(k) = rng.uniform(-8e6, 8e6);
        }
        if (pos.norm() < 1e6) {
            continue;
        }
        InertialState a{pos, Vec3::Zero(), 1.0};
        InertialState b{Vec3(pos.x(), pos.y(), -pos.z()), Vec3::Zero(), 1.0};
        const Vec3 pert_a = two_body_j2_accel(a, Vec3::Zero(), params, true) -
                            two_body_j2_accel(a, Vec3::Zero(), params, false);
        const Vec3 pert_b = two_body_j2_accel(b, Vec3::Zero(), params, true) -
                            two_body_j2_accel(b, Vec3::Zero(), params, false);
        CHECK(pert_a.x() == pert_b.x());
        CHECK(pert_a.y() == pert_b.y());
        CHECK(pert_a.z() == -pert_b.z());
    }
}

TEST_CASE("unperturbed propagation conserves energy and momentum") {
    const auto params = OrbitParams::circular(kEarthMu, kDefaultChiefRadius);
    InertialState state{{params.r0_mag, 0.0, 0.0},
                        {0.0, std::sqrt(params.mu / params.r0_mag), 0.0},
                        1.0};
    auto energy = [&](const InertialState& s) {
        return 0.5 * s.vel.squaredNorm() - params.mu / s.pos.norm();
    };
    auto momentum = [&](const InertialState& s) {
        return s.pos.cross(s.vel).norm();
    };
    const double e0 = energy(state);
    const double h0 = momentum(state);
    const double period = 2.0 * std::numbers::pi / params.n;
    const int steps = static_cast<int>(std::ceil(period));
    double max_e_drift = 0.0;
    double max_h_drift = 0.0;
    for (int k = 0; k < steps; ++k) {
        state = propagate_inertial(state, Vec3::Zero(), params, false, 1.0);
        max_e_drift = std::max(max_e_drift, std::abs(energy(state) - e0) / std::abs(e0));
        max_h_drift = std::max(max_h_drift, std::abs(momentum(state) - h0) / h0);
    }
    CHECK(max_e_drift < 1e-8);
    CHECK(max_h_drift < 1e-8);
}

TEST_CASE("frame rotation") {
    InertialState chief{{7e6, 0.0, 0.0}, {0.0, 7.5e3, 0.0}, 1.0};

    const Mat3 literal = hill_rotation(chief);
    CHECK(literal.col(0).isApprox(Vec3(-1.0, 0.0, 0.0), 1e-15));
    CHECK(literal.col(2).isApprox(Vec3(0.0, 0.0, 1.0), 1e-15));
    CHECK(literal.col(1).isApprox(Vec3(0.0, -1.0, 0.0), 1e-15));

    const Mat3 outward = hill_rotation(chief, true);
    CHECK(outward.col(0).isApprox(Vec3(1.0, 0.0, 0.0), 1e-15));
    CHECK(outward.col(1).isApprox(Vec3(0.0, 1.0, 0.0), 1e-15));

    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const InertialState c = random_chief(rng);
        const Mat3 rot = hill_rotation(c, trial % 2 == 0);
        CHECK((rot.transpose() * rot - Mat3::Identity()).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(rot.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }

    InertialState degenerate{{7e6, 0.0, 0.0}, {100.0, 0.0, 0.0}, 1.0};
    CHECK_THROWS_AS(hill_rotation(degenerate), Error);
}

TEST_CASE("hill transforms round-trip") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const InertialState chief = random_chief(rng);
        const bool outward = trial % 2 == 0;

        const RelativeState zero = to_hill(chief, chief, outward);
        CHECK(zero.pos.norm() < 1e-9);
        CHECK(zero.vel.norm() < 1e-9);

        RelativeState rel = random_rel_state(rng, 800.0, 3.0);
        const InertialState deputy = from_hill(rel, chief, 1.0, outward);
        const RelativeState back = to_hill(deputy, chief, outward);
        CHECK((back.pos - rel.pos).norm() < 1e-9 * std::max(1.0, rel.pos.norm()));
        CHECK((back.vel - rel.vel).norm() < 1e-9 * std::max(1.0, rel.vel.norm()));
    }

    // A deputy displaced radially outward sits on -x in the literal frame.
    InertialState chief{{7e6, 0.0, 0.0}, {0.0, 7.5e3, 0.0}, 1.0};
    InertialState deputy = chief;
    deputy.pos += 100.0 * chief.pos.normalized();
    const RelativeState literal = to_hill(deputy, chief, false);
    CHECK(literal.pos.x() == doctest::Approx(-100.0).epsilon(1e-12));
    const RelativeState outward_frame = to_hill(deputy, chief, true);
    CHECK(outward_frame.pos.x() == doctest::Approx(100.0).epsilon(1e-12));
}
