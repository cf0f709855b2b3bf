#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "spinfact/field.hpp"
#include "spinfact/spin_algebra.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

// Instantaneous angular velocity: the generator at time t is -i w(t).S.
using GeneratorFunction = std::function<Eigen::Vector3d(double)>;

enum class Stepper {
    ExpMidpoint,  // U_{k+1} = exp(-i dt w(t_mid).S) U_k, order 2
    Magnus4,      // two-point Gauss commutator-corrected step, order 4
};

std::string stepper_name(Stepper s);
Stepper parse_stepper(const std::string& name);

// Unitary trace U(t_k) on a grid, U(0) = I. Every step is an exact
// exponential, so unitarity is monitored, never enforced.
struct PropagatorTrace {
    TimeGrid grid;
    Stepper stepper = Stepper::ExpMidpoint;
    std::vector<Eigen::MatrixXcd> unitaries;
    std::vector<double> unitarity_drift;

    const Eigen::MatrixXcd& at(int k) const { return unitaries[static_cast<std::size_t>(k)]; }
    const Eigen::MatrixXcd& final() const { return unitaries.back(); }
    double max_unitarity_drift() const;
};

// Solve U' = -i w(t).S U. Both steppers map each step through a single
// exp_generator call: the Magnus step folds the commutator correction into
// one su(2) vector, dt/2 (w1 + w2) - sqrt(3)/12 dt^2 (w1 x w2).
PropagatorTrace time_ordered_exp(const GeneratorFunction& gen, const SpinRep& rep,
                                 const TimeGrid& grid, Stepper stepper = Stepper::ExpMidpoint);

// Direct Schrodinger reference: U' = -i kB(t) n(t).S U, the independent
// oracle every factorization test compares against. The path's lab vectors
// are used as-is; rotate them first if a different basis is intended.
PropagatorTrace schrodinger_oracle(const FieldSpec& field, const SpinRep& rep,
                                   const TimeGrid& grid, Stepper stepper = Stepper::ExpMidpoint);

}  // namespace spinfact
