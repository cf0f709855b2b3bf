#include "spinfact/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "spinfact/geometry.hpp"

namespace spinfact {

double circle_distance(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

double TransitionTable::peak_off_diagonal() const {
    double peak = 0.0;
    for (const auto& p : P) {
        for (int r = 0; r < p.rows(); ++r) {
            for (int c = 0; c < p.cols(); ++c) {
                if (r != c && p(r, c) > peak) peak = p(r, c);
            }
        }
    }
    return peak;
}

TransitionTable transition_probabilities(const PropagatorTrace& n_trace, const SpinRep& rep) {
    TransitionTable table;
    table.j = rep.j;
    table.grid = n_trace.grid;
    table.P.reserve(n_trace.unitaries.size());
    for (const auto& n : n_trace.unitaries) {
        table.P.push_back(n.cwiseAbs2());
    }
    return table;
}

BerryPhaseReport berry_phase_check(const DirectionPath& path, const SpinRep& rep, double period,
                                   int steps, Stepper stepper) {
    const PathSample first = path(0.0);
    if ((path(period).n - first.n).norm() >= 1e-6) {
        throw std::invalid_argument("berry_phase_check: path is not closed over the given period");
    }

    BerryPhaseReport report;
    const TimeGrid grid(period, steps);
    const PropagatorTrace a = geometric_operator(path, rep, grid, stepper);
    const Eigen::MatrixXcd& a_final = a.final();

    // Zero-length loop: no holonomy, solid angle 0 by convention.
    bool stationary = true;
    for (int k = 0; k <= 16; ++k) {
        if (path.speed(period * k / 16.0) > kSpeedEpsilon) {
            stationary = false;
            break;
        }
    }
    report.solid_angle = stationary ? 0.0 : solid_angle(path, period);

    // A(T) is diagonal in this basis up to stepper error (holonomy about
    // e3 = n(0)); read the per-m phases off the diagonal.
    report.measured_phase.resize(static_cast<std::size_t>(rep.dim));
    report.expected_phase.resize(static_cast<std::size_t>(rep.dim));
    report.circle_distance.resize(static_cast<std::size_t>(rep.dim));
    for (int k = 0; k < rep.dim; ++k) {
        const double m = rep.j - k;
        const auto i = static_cast<std::size_t>(k);
        report.measured_phase[i] = std::arg(a_final(k, k));
        report.expected_phase[i] = std::remainder(-m * report.solid_angle, 2.0 * std::numbers::pi);
        report.circle_distance[i] = circle_distance(report.measured_phase[i], report.expected_phase[i]);
        report.max_discrepancy = std::max(report.max_discrepancy, report.circle_distance[i]);
    }
    return report;
}

double rabi_transition_probability(double kB, double theta, double omega, double t) {
    const double w1 = kB * std::sin(theta);
    const double delta = kB * std::cos(theta) - omega;
    const double w = std::sqrt(w1 * w1 + delta * delta);
    if (w == 0.0) return 0.0;
    const double s = std::sin(0.5 * w * t);
    return (w1 * w1) / (w * w) * s * s;
}

namespace {

// Peak transition probability out of any basis state: largest off-diagonal
// |entry|^2 of the trace expressed in the given eigenbasis.
double peak_off_diagonal(const PropagatorTrace& trace, const Eigen::MatrixXcd& basis) {
    double peak = 0.0;
    for (const auto& u : trace.unitaries) {
        const Eigen::MatrixXd p = (basis.adjoint() * u * basis).cwiseAbs2();
        for (int r = 0; r < p.rows(); ++r) {
            for (int c = 0; c < p.cols(); ++c) {
                if (r != c && p(r, c) > peak) peak = p(r, c);
            }
        }
    }
    return peak;
}

}  // namespace

int ResonanceScanResult::fixed_axis_argmax() const {
    return static_cast<int>(std::distance(
        fixed_axis_peak.begin(), std::max_element(fixed_axis_peak.begin(), fixed_axis_peak.end())));
}

int ResonanceScanResult::moving_axis_argmax() const {
    return static_cast<int>(std::distance(
        moving_axis_peak.begin(),
        std::max_element(moving_axis_peak.begin(), moving_axis_peak.end())));
}

ResonanceScanResult resonance_scan(double theta, double omega, const std::vector<double>& kB_values,
                                   const SpinRep& rep, double t_end, int steps, Stepper stepper,
                                   int jobs) {
    ResonanceScanResult result;
    result.kB = kB_values;
    result.fixed_axis_peak.assign(kB_values.size(), 0.0);
    result.moving_axis_peak.assign(kB_values.size(), 0.0);

    const DirectionPath path = make_precession_path(theta, omega);
    const TimeGrid grid(t_end, steps);

    // Lab-z eigenbasis expressed in the anchored frame: diagonalize
    // (R0^T z).S once, order eigenvectors by descending eigenvalue.
    const FrameAnchor anchor = anchor_frame(path, grid);
    const Eigen::Vector3d z_in_frame = anchor.basis.transpose() * Eigen::Vector3d(0.0, 0.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(axis_dot(z_in_frame, rep));
    Eigen::MatrixXcd z_basis(rep.dim, rep.dim);
    for (int k = 0; k < rep.dim; ++k) z_basis.col(k) = es.eigenvectors().col(rep.dim - 1 - k);

    auto run_point = [&](std::size_t i) {
        FieldSpec field;
        field.k = 1.0;
        const double kB = kB_values[i];
        field.B = [kB](double) { return kB; };
        field.path = path;
        const FactorizationResult f = factorize(field, rep, grid, stepper);
        result.fixed_axis_peak[i] = peak_off_diagonal(f.U, z_basis);
        result.moving_axis_peak[i] =
            peak_off_diagonal(f.N, Eigen::MatrixXcd::Identity(rep.dim, rep.dim));
    };

    if (jobs <= 1 || kB_values.size() < 2) {
        for (std::size_t i = 0; i < kB_values.size(); ++i) run_point(i);
    } else {
        // Scan points are independent; results land by index so ordering
        // (and output bytes) do not depend on scheduling.
        const int workers = std::min<int>(jobs, static_cast<int>(kB_values.size()));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t i = static_cast<std::size_t>(w); i < kB_values.size();
                     i += static_cast<std::size_t>(workers)) {
                    run_point(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace spinfact
