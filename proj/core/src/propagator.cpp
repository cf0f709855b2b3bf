#include "spinfact/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace spinfact {

std::string stepper_name(Stepper s) {
    return s == Stepper::ExpMidpoint ? "exp-midpoint" : "magnus4";
}

Stepper parse_stepper(const std::string& name) {
    if (name == "exp-midpoint") return Stepper::ExpMidpoint;
    if (name == "magnus4") return Stepper::Magnus4;
    throw std::invalid_argument("unknown stepper '" + name + "' (exp-midpoint | magnus4)");
}

double PropagatorTrace::max_unitarity_drift() const {
    double m = 0.0;
    for (double d : unitarity_drift) m = std::max(m, d);
    return m;
}

PropagatorTrace time_ordered_exp(const GeneratorFunction& gen, const SpinRep& rep,
                                 const TimeGrid& grid, Stepper stepper) {
    PropagatorTrace trace;
    trace.grid = grid;
    trace.stepper = stepper;
    trace.unitaries.reserve(static_cast<std::size_t>(grid.node_count()));
    trace.unitarity_drift.reserve(static_cast<std::size_t>(grid.node_count()));

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    trace.unitaries.push_back(u);
    trace.unitarity_drift.push_back(0.0);

    const double dt = grid.dt();
    const double root3 = std::sqrt(3.0);
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.node(k);
        Eigen::Vector3d step_vector;
        if (stepper == Stepper::ExpMidpoint) {
            step_vector = dt * gen(t + 0.5 * dt);
        } else {
            // Two-point Gauss Magnus step. The commutator correction stays
            // inside the algebra: [a.S, b.S] = i (a x b).S, so the whole
            // step is again exp(-i v.S) of a single 3-vector.
            const Eigen::Vector3d w1 = gen(t + dt * (0.5 - root3 / 6.0));
            const Eigen::Vector3d w2 = gen(t + dt * (0.5 + root3 / 6.0));
            step_vector = 0.5 * dt * (w1 + w2) - (root3 / 12.0) * dt * dt * w1.cross(w2);
        }
        u = exp_generator(step_vector, rep) * u;
        trace.unitaries.push_back(u);
        trace.unitarity_drift.push_back(unitarity_error(u));
    }
    return trace;
}

PropagatorTrace schrodinger_oracle(const FieldSpec& field, const SpinRep& rep,
                                   const TimeGrid& grid, Stepper stepper) {
    const DirectionPath& path = field.path;
    GeneratorFunction gen = [&field, path](double t) -> Eigen::Vector3d {
        return field.kB(t) * path(t).n;
    };
    return time_ordered_exp(gen, rep, grid, stepper);
}

}  // namespace spinfact
