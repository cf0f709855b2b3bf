#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinfact/factorization.hpp"
#include "spinfact/solutions.hpp"

using namespace spinfact;
using Eigen::MatrixXcd;
using Eigen::Vector3d;
constexpr double pi = std::numbers::pi;

TEST_CASE("class-i field law") {
    SUBCASE("precession gives a constant coupling omega cos(theta)") {
        // beta' = -omega cos(theta), and the class condition needs kB = -beta'.
        const double theta = pi / 3, omega = 1.4;
        const FieldSpec field = class_i_field(make_precession_path(theta, omega));
        for (double t : {0.0, 0.5, 2.0}) {
            CHECK(field.kB(t) == doctest::Approx(omega * std::cos(theta)).epsilon(1e-12));
        }
        CHECK(field.k == 1.0);
    }
    SUBCASE("equator great circle is geodesic: kB = 0") {
        const FieldSpec field = class_i_field(make_precession_path(pi / 2, 1.0));
        for (double t : {0.0, 1.0, 4.0}) CHECK(std::abs(field.kB(t)) < 1e-14);
    }
    SUBCASE("stationary node is rejected") {
        const FieldSpec field = class_i_field(make_precession_path(0.0, 1.0));
        CHECK_THROWS_AS(field.kB(0.5), std::domain_error);
    }
}

TEST_CASE("class-i closed form") {
    SUBCASE("zero arc length gives identity") {
        const SpinRep rep = spin_matrices(1.0);
        CHECK((class_i_closed_n(0.0, rep) - MatrixXcd::Identity(3, 3)).norm() == 0.0);
    }
    SUBCASE("l = pi fully transfers a spin-1/2") {
        const SpinRep rep = spin_matrices(0.5);
        const MatrixXcd n = class_i_closed_n(pi, rep);
        CHECK(std::norm(n(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("pipeline cross-check on the precession class-i field") {
        const double theta = pi / 3, omega = 1.0;
        const FieldSpec field = class_i_field(make_precession_path(theta, omega));
        const SpinRep rep = spin_matrices(0.5);
        const TimeGrid grid(2 * pi, 2048);
        const FactorizationResult result = factorize(field, rep, grid, Stepper::Magnus4);
        double worst_gap = 0.0, worst = 0.0;
        for (int k = 0; k <= grid.steps; ++k) {
            worst_gap = std::max(worst_gap, std::abs(result.angles.beta[k] - result.phi[k]));
            worst = std::max(worst, (result.N.at(k) -
                                     class_i_closed_n(result.angles.arclen[k], rep)).norm());
        }
        CHECK(worst_gap < 1e-6);
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("class-i transitions depend only on arc length") {
    // The same geometric path traversed twice as fast gives the same N at
    // equal arc length.
    const double theta = pi / 3;
    const SpinRep rep = spin_matrices(1.0);
    auto n_at_arclen = [&](double omega, double t_end) {
        const FieldSpec field = class_i_field(make_precession_path(theta, omega));
        const FactorizationResult r =
            factorize(field, rep, TimeGrid(t_end, 1024), Stepper::Magnus4);
        return r.N.final();
    };
    // omega=1 over [0,2], omega=2 over [0,1]: same arc length omega*sin(theta)*t
    const MatrixXcd slow = n_at_arclen(1.0, 2.0);
    const MatrixXcd fast = n_at_arclen(2.0, 1.0);
    CHECK((slow - fast).norm() < 1e-8);
}

TEST_CASE("class-ii closed form") {
    SUBCASE("c1 = 0 collapses to identity") {
        const SpinRep rep = spin_matrices(1.5);
        const MatrixXcd n = class_ii_closed_n(0.0, 0.9, 2.0, rep);
        CHECK((n - MatrixXcd::Identity(4, 4)).norm() < 1e-13);
    }
    SUBCASE("c2 = 0 reduces to class i at l = c1 t") {
        const SpinRep rep = spin_matrices(1.0);
        const double c1 = 0.8, t = 1.7;
        CHECK((class_ii_closed_n(c1, 0.0, t, rep) - class_i_closed_n(c1 * t, rep)).norm() < 1e-13);
    }
    SUBCASE("generic parameters match the time-ordered pipeline") {
        // generator w(t) = (-c1 sin(c2 t), -c1 cos(c2 t), 0)
        const SpinRep rep = spin_matrices(1.0);
        const double c1 = 1.0, c2 = 0.7, t_end = 2.0;
        const GeneratorFunction gen = [c1, c2](double t) {
            return Vector3d{-c1 * std::sin(c2 * t), -c1 * std::cos(c2 * t), 0.0};
        };
        const PropagatorTrace trace =
            time_ordered_exp(gen, rep, TimeGrid(t_end, 4096), Stepper::Magnus4);
        CHECK((trace.final() - class_ii_closed_n(c1, c2, t_end, rep)).norm() < 1e-8);
    }
}

TEST_CASE("class-ii spiral path") {
    SUBCASE("constant speed c1") {
        const DirectionPath p = class_ii_spiral_path(1.0, 2.0);
        for (double t : {0.0, 0.3, 0.9, pi / 4, 1.4}) {
            CHECK(std::abs(p.speed(t) - 2.0) < 1e-10);
            CHECK(std::abs(p(t).n.norm() - 1.0) < 1e-12);
        }
    }
    SUBCASE("derivatives are consistent") {
        const DirectionPath p = class_ii_spiral_path(1.0, 2.0, -1);
        const double h = 1e-6;
        for (double t : {0.2, 0.8, 1.3}) {
            const Vector3d fd = (p(t + h).n - p(t - h).n) / (2 * h);
            CHECK((p(t).dn - fd).norm() < 1e-8);
            const Vector3d fd2 = (p(t + h).n - 2 * p(t).n + p(t - h).n) / (h * h);
            CHECK((p(t).ddn - fd2).norm() < 1e-3);
        }
    }
    SUBCASE("domain and parameter validation") {
        CHECK_THROWS_AS(class_ii_spiral_path(1.0, 1.0), std::invalid_argument);   // c1^2 = lambda^2
        CHECK_THROWS_AS(class_ii_spiral_path(1.0, 0.5), std::invalid_argument);   // c1^2 < lambda^2
        CHECK_THROWS_AS(class_ii_spiral_path(-1.0, 2.0), std::invalid_argument);  // lambda <= 0
        const DirectionPath p = class_ii_spiral_path(1.0, 2.0);
        CHECK_THROWS_AS(p(pi / 2), std::domain_error);   // t = pi/(2 lambda)
        CHECK_THROWS_AS(p(-0.1), std::domain_error);
        CHECK_NOTHROW(p(0.0));
    }
    SUBCASE("vanishing azimuth coefficient approaches a meridian") {
        const double lambda = 1.0, c1 = lambda * (1.0 + 1e-8);
        const DirectionPath p = class_ii_spiral_path(lambda, c1);
        // azimuth stays near zero: the path is close to a great-circle meridian
        const PathSample s = p(1.0);
        CHECK(std::abs(std::atan2(s.n.y(), s.n.x())) < 1e-3);
    }
}

TEST_CASE("class-ii spiral through the full pipeline") {
    const double lambda = 1.0, c1 = 2.0, c2 = 0.7;
    const double t_end = 0.9 * pi / (2.0 * lambda);
    const DirectionPath path = class_ii_spiral_path(lambda, c1);
    const FieldSpec field = class_ii_field(path, c2);
    for (double j : {0.5, 1.0}) {
        CAPTURE(j);
        const SpinRep rep = spin_matrices(j);
        const TimeGrid grid(t_end, 2048);
        const FactorizationResult result = factorize(field, rep, grid, Stepper::Magnus4);
        double worst = 0.0, worst_line = 0.0;
        for (int k = 0; k <= grid.steps; ++k) {
            const double t = grid.node(k);
            worst_line =
                std::max(worst_line, std::abs(result.angles.beta[k] - result.phi[k] - c2 * t));
            worst = std::max(worst, (result.N.at(k) - class_ii_closed_n(c1, c2, t, rep)).norm());
        }
        CHECK(worst_line < 1e-6);
        CHECK(worst < 1e-7);
        CHECK(result.max_residual() < 1e-9);
    }
}

TEST_CASE("precession is a class-ii path: the classic resonance solution") {
    // constant speed c1 = omega sin(theta); kB = c2 + omega cos(theta)
    const double theta = pi / 3, omega = 1.0, c2 = 0.6;
    const double c1 = omega * std::sin(theta);
    const DirectionPath path = make_precession_path(theta, omega);
    const FieldSpec field = class_ii_field(path, c2);
    CHECK(field.kB(0.3) == doctest::Approx(c2 + omega * std::cos(theta)).epsilon(1e-12));

    const SpinRep rep = spin_matrices(0.5);
    const TimeGrid grid(2 * pi, 2048);
    const FactorizationResult result = factorize(field, rep, grid, Stepper::Magnus4);
    double worst = 0.0;
    for (int k = 0; k <= grid.steps; ++k) {
        worst = std::max(worst,
                         (result.N.at(k) - class_ii_closed_n(c1, c2, grid.node(k), rep)).norm());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("both azimuth branches of the spiral are valid class-ii paths") {
    const double lambda = 1.0, c1 = 1.5, c2 = 0.4;
    const double t_end = 0.8 * pi / 2.0;
    const SpinRep rep = spin_matrices(0.5);
    for (int sign : {+1, -1}) {
        CAPTURE(sign);
        const DirectionPath path = class_ii_spiral_path(lambda, c1, sign);
        const FieldSpec field = class_ii_field(path, c2);
        const FactorizationResult result =
            factorize(field, rep, TimeGrid(t_end, 1024), Stepper::Magnus4);
        double worst = 0.0;
        for (int k = 0; k <= 1024; ++k) {
            worst = std::max(worst, (result.N.at(k) -
                                     class_ii_closed_n(c1, c2, result.grid.node(k), rep)).norm());
        }
        CHECK(worst < 1e-7);
    }
}
