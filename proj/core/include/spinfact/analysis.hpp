#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinfact/direction_path.hpp"
#include "spinfact/factorization.hpp"
#include "spinfact/propagator.hpp"
#include "spinfact/spin_algebra.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

// P_{m'm}(t) = |<m'|N(t)|m>|^2 in the S3 eigenbasis, row/column index 0
// corresponding to m = j (m descending). Doubly stochastic by unitarity.
struct TransitionTable {
    double j = 0.0;
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> P;

    // Largest off-diagonal entry over all times.
    double peak_off_diagonal() const;
};

TransitionTable transition_probabilities(const PropagatorTrace& n_trace, const SpinRep& rep);

// Holonomy check for a closed path: eigenphases of the numerically
// transported A(T) against exp(-i m Omega) with Omega from solid_angle.
struct BerryPhaseReport {
    double solid_angle = 0.0;
    std::vector<double> measured_phase;   // arg of A(T) eigenvalue for each m (descending)
    std::vector<double> expected_phase;   // -m * Omega wrapped to (-pi, pi]
    std::vector<double> circle_distance;  // per-m discrepancy on the circle
    double max_discrepancy = 0.0;
};

BerryPhaseReport berry_phase_check(const DirectionPath& path, const SpinRep& rep, double period,
                                   int steps = 4096, Stepper stepper = Stepper::ExpMidpoint);

// Closed-form two-level transition probability for the precession field in
// the fixed (lab z) basis: coupling w1 = kB sin(theta), detuning
// delta = kB cos(theta) - omega,
//   P(t) = w1^2/(w1^2 + delta^2) * sin^2(sqrt(w1^2 + delta^2) t / 2).
double rabi_transition_probability(double kB, double theta, double omega, double t);

// Sweep kB over the precession field and record, per kB, the peak
// transition probability in two bases: from the full U in the fixed lab-z
// eigenbasis and from N along the co-moving field direction. The fixed-axis
// curve peaks at kB = omega/cos(theta), the moving-axis curve at
// kB = omega cos(theta); the two loci separate as theta grows.
struct ResonanceScanResult {
    std::vector<double> kB;
    std::vector<double> fixed_axis_peak;
    std::vector<double> moving_axis_peak;

    int fixed_axis_argmax() const;
    int moving_axis_argmax() const;
};

ResonanceScanResult resonance_scan(double theta, double omega, const std::vector<double>& kB_values,
                                   const SpinRep& rep, double t_end, int steps = 2048,
                                   Stepper stepper = Stepper::ExpMidpoint, int jobs = 1);

// Distance between two angles on the circle, in [0, pi].
double circle_distance(double a, double b);

}  // namespace spinfact
