#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "spinfact/direction_path.hpp"
#include "spinfact/frame_transport.hpp"
#include "spinfact/geometry.hpp"

using namespace spinfact;
using Eigen::Vector3d;
constexpr double pi = std::numbers::pi;

TEST_CASE("precession path values and derivatives") {
    SUBCASE("equator start") {
        const DirectionPath p = make_precession_path(pi / 2, 1.0);
        const PathSample s = p(0.0);
        CHECK((s.n - Vector3d{1, 0, 0}).norm() < 1e-15);
        CHECK(s.dn.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("theta = 0 is stationary") {
        const DirectionPath p = make_precession_path(0.0, 1.0);
        for (double t : {0.0, 0.7, 2.0}) {
            CHECK((p(t).n - Vector3d{0, 0, 1}).norm() == 0.0);
            CHECK(p(t).dn.norm() == 0.0);
        }
    }
    SUBCASE("speed is omega sin(theta)") {
        const DirectionPath p = make_precession_path(pi / 3, 2.0);
        for (double t : {0.0, 0.3, 1.9}) {
            CHECK(p.speed(t) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
        }
    }
    SUBCASE("theta outside [0, pi] rejected") {
        CHECK_THROWS_AS(make_precession_path(-0.1, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_precession_path(3.2, 1.0), std::invalid_argument);
    }
}

TEST_CASE("tabulated path from equator samples") {
    const int m = 200;
    std::vector<double> t(m + 1);
    std::vector<Vector3d> v(m + 1);
    for (int k = 0; k <= m; ++k) {
        t[k] = 2.0 * pi * k / m;
        v[k] = {std::cos(t[k]), std::sin(t[k]), 0.0};
    }
    const DirectionPath p = make_tabulated_path(t, v);
    CHECK(p.kind() == PathKind::Tabulated);

    // |n'| = 1 on a unit-speed great circle; 4th-order stencils away from the
    // ends, 2nd-order one-sided at them.
    const double h = 2.0 * pi / m;
    for (double tt : {1.0, 3.0, 6.0}) {
        const PathSample s = p(tt);
        CHECK(std::abs(s.n.norm() - 1.0) < 10 * h * h * h * h);
        CHECK(std::abs(s.dn.norm() - 1.0) < 10 * h * h * h * h);
        CHECK(std::abs(s.n.dot(s.dn)) < 1e-8);
    }
    CHECK(std::abs(p(0.0).dn.norm() - 1.0) < h * h);
    CHECK(std::abs(p(0.0).n.dot(p(0.0).dn)) < 1e-10);  // node derivative is tangent-projected
}

TEST_CASE("tabulated path rejections") {
    std::vector<double> t = {0.0, 0.1, 0.2};
    std::vector<Vector3d> v(3, Vector3d{0, 0, 1});
    SUBCASE("too few samples") {
        CHECK_THROWS_WITH_AS(make_tabulated_path(t, v), doctest::Contains("at least 5"),
                             std::invalid_argument);
    }
    SUBCASE("norm violation") {
        std::vector<double> t5 = {0.0, 0.1, 0.2, 0.3, 0.4};
        std::vector<Vector3d> v5(5, Vector3d{0, 0, 1});
        v5[2] = {0.0, 0.0, 0.9};
        CHECK_THROWS_WITH_AS(make_tabulated_path(t5, v5), doctest::Contains("unit norm"),
                             std::invalid_argument);
    }
    SUBCASE("non-uniform grid") {
        std::vector<double> t5 = {0.0, 0.1, 0.25, 0.3, 0.4};
        std::vector<Vector3d> v5(5, Vector3d{0, 0, 1});
        CHECK_THROWS_WITH_AS(make_tabulated_path(t5, v5), doctest::Contains("non-uniform"),
                             std::invalid_argument);
    }
}

TEST_CASE("path CSV round trip") {
    const std::string file = "test_path_roundtrip.csv";
    {
        std::ofstream out(file);
        out.precision(17);
        out << std::scientific << "t,nx,ny,nz\n";
        for (int k = 0; k <= 32; ++k) {
            const double t = 2.0 * pi * k / 32;
            out << t << "," << std::cos(t) << "," << std::sin(t) << ",0.0\n";
        }
    }
    const DirectionPath p = load_tabulated_path_csv(file);
    CHECK(std::abs(p(1.0).n.norm() - 1.0) < 1e-4);

    std::ofstream(file) << "time,nx,ny,nz\next\n";
    CHECK_THROWS_WITH_AS(load_tabulated_path_csv(file), doctest::Contains("header"),
                         std::runtime_error);
    std::remove(file.c_str());
}

TEST_CASE("frame transport basics") {
    const DirectionPath p = make_precession_path(pi / 2, 1.0);  // equator
    const TimeGrid grid(pi / 2, 512);                           // quarter period
    const Frame frame = transport_frame(p, grid);

    SUBCASE("initial triad is (n'(0), n(0) x n'(0), n(0)) exactly") {
        const PathSample s = p(0.0);
        const Vector3d e1 = s.dn / s.dn.norm();
        CHECK((frame.triads.front().col(0) - e1).norm() == 0.0);
        CHECK((frame.triads.front().col(1) - s.n.cross(e1)).norm() == 0.0);
        CHECK((frame.triads.front().col(2) - s.n).norm() == 0.0);
    }
    SUBCASE("e3 tracks n") {
        for (int k : {128, 256, 511}) {
            CHECK((frame.e(2, k) - p(grid.node(k)).n).norm() < 1e-8);
        }
    }
    SUBCASE("stationary start is an error") {
        CHECK_THROWS_AS(transport_frame(make_precession_path(0.0, 1.0), grid),
                        std::invalid_argument);
    }
}

TEST_CASE("frame transport preserves orthonormality over 1e4 steps") {
    const DirectionPath p = make_precession_path(pi / 3, 1.0);
    const Frame frame = transport_frame(p, TimeGrid(4.0 * pi, 10000));
    CHECK(frame.orthonormality_drift < 1e-8);
    for (int k : {2500, 10000}) {
        const Eigen::Matrix3d g = frame.triads[k].transpose() * frame.triads[k];
        CHECK((g - Eigen::Matrix3d::Identity()).norm() < 1e-8);
    }
}

TEST_CASE("e3 - n converges at 2nd order") {
    const DirectionPath p = make_precession_path(pi / 3, 1.0);
    auto err = [&](int steps) {
        const TimeGrid grid(2.0 * pi, steps);
        const Frame f = transport_frame(p, grid);
        double worst = 0.0;
        for (int k = 0; k <= steps; ++k) {
            worst = std::max(worst, (f.e(2, k) - p(grid.node(k)).n).norm());
        }
        return worst;
    };
    const double e1 = err(256), e2 = err(512);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("frame holonomy of a precession loop") {
    // After one period the tangent frame returns rotated about n(0) by the
    // enclosed solid angle 2 pi (1 - cos theta). theta = pi/6 keeps the sign
    // of the rotation unambiguous mod 2 pi.
    const double theta = pi / 6;
    const DirectionPath p = make_precession_path(theta, 1.0);
    const Frame frame = transport_frame(p, TimeGrid(2.0 * pi, 8192));
    const Eigen::Matrix3d first = frame.triads.front();
    const Eigen::Matrix3d last = frame.triads.back();
    const double ca = last.col(0).dot(first.col(0));
    const double sa = last.col(0).dot(first.col(1));
    const double alpha = std::atan2(sa, ca);
    const double omega = 2.0 * pi * (1.0 - std::cos(theta));
    CHECK(std::abs(std::remainder(alpha - omega, 2.0 * pi)) < 1e-6);
}

TEST_CASE("beta angle") {
    SUBCASE("equator great circle is a geodesic: beta = 0") {
        const GeometricAngles g = beta_angle(make_precession_path(pi / 2, 1.0), TimeGrid(2 * pi, 256));
        for (double b : g.beta) CHECK(std::abs(b) < 1e-12);
    }
    SUBCASE("precession: beta = -omega t cos(theta)") {
        const double theta = pi / 3, omega = 1.3;
        const TimeGrid grid(2 * pi, 256);
        const GeometricAngles g = beta_angle(make_precession_path(theta, omega), grid);
        for (int k = 0; k <= grid.steps; ++k) {
            CHECK(std::abs(g.beta[k] + omega * grid.node(k) * std::cos(theta)) < 1e-12);
        }
        CHECK(g.beta[0] == 0.0);
        CHECK(g.arclen[0] == 0.0);
        // arc length grows at rate omega sin(theta)
        CHECK(g.arclen.back() ==
              doctest::Approx(omega * std::sin(theta) * 2 * pi).epsilon(1e-12));
    }
    SUBCASE("arclen is non-decreasing") {
        const GeometricAngles g =
            beta_angle(make_precession_path(pi / 4, 2.0), TimeGrid(3.0, 128));
        for (std::size_t k = 1; k < g.arclen.size(); ++k) CHECK(g.arclen[k] >= g.arclen[k - 1]);
    }
}

TEST_CASE("beta rate matches finite differences of beta") {
    const Eigen::Vector3d a0{0.0, 0.0, 0.55};
    Eigen::Matrix3Xd ac(3, 2), bc(3, 2);
    ac << 1.0, 0.0, 0.0, 0.0, 0.0, 0.12;
    bc << 0.0, 0.0, 1.0, 0.0, 0.0, 0.0;
    const DirectionPath p = make_normalized_fourier_path(a0, ac, bc);
    const TimeGrid grid(2 * pi, 2048);
    const GeometricAngles g = beta_angle(p, grid);
    const double h = grid.dt();
    for (int k : {100, 700, 1500}) {
        const double fd = (g.beta[k + 1] - g.beta[k - 1]) / (2.0 * h);
        CHECK(std::abs(fd - beta_rate(p(grid.node(k)))) < 1e-5);
    }
}

TEST_CASE("beta is reparameterization invariant at equal arc length") {
    // Same geometric path traversed at twice the speed: equal beta at the
    // halved time (same arc length).
    const double theta = pi / 3;
    const GeometricAngles slow = beta_angle(make_precession_path(theta, 1.0), TimeGrid(2.0, 512));
    const GeometricAngles fast = beta_angle(make_precession_path(theta, 2.0), TimeGrid(1.0, 512));
    for (int k = 0; k <= 512; ++k) {
        REQUIRE(std::abs(slow.arclen[k] - fast.arclen[k]) < 1e-12);  // same node = same arc length
        CHECK(std::abs(slow.beta[k] - fast.beta[k]) < 1e-8);
    }
}

TEST_CASE("solid angle") {
    SUBCASE("equator loop subtends a hemisphere") {
        CHECK(std::abs(solid_angle(make_precession_path(pi / 2, 1.0), 2 * pi) - 2 * pi) < 1e-10);
    }
    SUBCASE("spherical cap at theta = pi/3") {
        const double omega = solid_angle(make_precession_path(pi / 3, 1.0), 2 * pi);
        CHECK(std::abs(omega - pi) < 1e-10);
    }
    SUBCASE("reversed traversal flips the sign") {
        const double omega = solid_angle(make_precession_path(pi / 3, -1.0), 2 * pi);
        CHECK(std::abs(omega + pi) < 1e-10);
    }
    SUBCASE("zero-length loop") {
        CHECK(solid_angle(make_precession_path(0.0, 1.0), 2 * pi) == 0.0);
    }
    SUBCASE("open path rejected") {
        CHECK_THROWS_AS(solid_angle(make_precession_path(pi / 3, 1.0), 3.0),
                        std::invalid_argument);
    }
}

TEST_CASE("solid angle pole selection") {
    SUBCASE("meridian loop through both z poles re-selects a clear pole") {
        // great circle in the x-z plane: passes through +-z and +-x, so the
        // quadrature pole must fall back to +-y
        const DirectionPath p(PathKind::Analytic, [](double t) {
            PathSample s;
            s.n = {std::cos(t), 0.0, std::sin(t)};
            s.dn = {-std::sin(t), 0.0, std::cos(t)};
            s.ddn = {-std::cos(t), 0.0, -std::sin(t)};
            return s;
        });
        const double omega = solid_angle(p, 2 * pi);
        CHECK(std::abs(std::abs(omega) - 2 * pi) < 1e-10);  // hemisphere either way
    }
    SUBCASE("closed tour through all six axis directions is rejected") {
        // piecewise great-circle arcs +x -> +y -> +z -> -x -> -y -> -z -> +x
        const Eigen::Vector3d stop[7] = {{1, 0, 0},  {0, 1, 0},  {0, 0, 1}, {-1, 0, 0},
                                         {0, -1, 0}, {0, 0, -1}, {1, 0, 0}};
        std::vector<double> t;
        std::vector<Eigen::Vector3d> v;
        const int per_arc = 24;
        for (int arc = 0; arc < 6; ++arc) {
            for (int k = 0; k < per_arc; ++k) {
                const double u = static_cast<double>(k) / per_arc;
                const double ang = u * pi / 2;
                t.push_back(arc + u);
                v.push_back(std::cos(ang) * stop[arc] + std::sin(ang) * stop[arc + 1]);
            }
        }
        t.push_back(6.0);
        v.push_back(stop[6]);
        const DirectionPath p = make_tabulated_path(t, v);
        CHECK_THROWS_WITH_AS(solid_angle(p, 6.0), doctest::Contains("candidate poles"),
                             std::runtime_error);
    }
}

TEST_CASE("frame holonomy equals the solid angle mod 2 pi on a smooth closed loop") {
    const Eigen::Vector3d a0{1.0, 0.1, 0.55};
    Eigen::Matrix3Xd ac(3, 1), bc(3, 1);
    ac << 0.12, 0.3, 0.0;
    bc << 0.3, 0.05, 0.1;
    const DirectionPath p = make_normalized_fourier_path(a0, ac, bc);
    const double period = 2 * pi;
    REQUIRE((p(period).n - p(0.0).n).norm() < 1e-12);

    const Frame frame = transport_frame(p, TimeGrid(period, 16384));
    const double ca = frame.triads.back().col(0).dot(frame.triads.front().col(0));
    const double sa = frame.triads.back().col(0).dot(frame.triads.front().col(1));
    const double alpha = std::atan2(sa, ca);
    const double omega = solid_angle(p, period, 8192);
    CHECK(std::abs(std::remainder(alpha - omega, 2.0 * pi)) < 1e-6);
}
