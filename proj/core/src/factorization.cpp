#include "spinfact/factorization.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace spinfact {

FrameAnchor anchor_frame(const DirectionPath& path, const TimeGrid& grid) {
    FrameAnchor anchor;
    anchor.anchor_index = -1;
    for (int k = 0; k <= grid.steps; ++k) {
        if (path.speed(grid.node(k)) > kSpeedEpsilon) {
            anchor.anchor_index = k;
            break;
        }
    }
    if (anchor.anchor_index < 0) {
        // Path never moves: only e3 = n(0) matters (A = N = I, U = D).
        // Complete deterministically with the axis least aligned with n.
        anchor.anchor_index = 0;
        anchor.stationary = true;
        const Eigen::Vector3d n0 = path(0.0).n;
        int least = 0;
        for (int i = 1; i < 3; ++i) {
            if (std::abs(n0(i)) < std::abs(n0(least))) least = i;
        }
        Eigen::Vector3d seed = Eigen::Vector3d::Zero();
        seed(least) = 1.0;
        anchor.basis.col(2) = n0;
        anchor.basis.col(0) = (seed - seed.dot(n0) * n0).normalized();
        anchor.basis.col(1) = n0.cross(anchor.basis.col(0));
        return anchor;
    }
    const PathSample s = path(grid.node(anchor.anchor_index));
    anchor.basis.col(0) = s.dn / s.dn.norm();
    anchor.basis.col(2) = s.n;
    anchor.basis.col(1) = anchor.basis.col(2).cross(anchor.basis.col(0));
    return anchor;
}

DynamicalTrace dynamical_operator(const FieldSpec& field, const SpinRep& rep, const TimeGrid& grid) {
    DynamicalTrace out;
    // captured by value: the returned curve outlives the field argument
    const double coupling = field.k;
    const std::function<double(double)> magnitude = field.B;
    out.phi_curve = CumulativeIntegral(
        [coupling, magnitude](double t) { return -coupling * magnitude(t); }, grid);
    out.phi = out.phi_curve.node_values();

    out.trace.grid = grid;
    out.trace.unitaries.reserve(static_cast<std::size_t>(grid.node_count()));
    out.trace.unitarity_drift.reserve(static_cast<std::size_t>(grid.node_count()));
    for (int k = 0; k <= grid.steps; ++k) {
        // D = exp(i phi S3) = exp(-i (0,0,-phi).S); diagonal in this basis.
        Eigen::MatrixXcd d = exp_generator({0.0, 0.0, -out.phi[static_cast<std::size_t>(k)]}, rep);
        out.trace.unitarity_drift.push_back(unitarity_error(d));
        out.trace.unitaries.push_back(std::move(d));
    }
    return out;
}

PropagatorTrace geometric_operator(const DirectionPath& path, const SpinRep& rep,
                                   const TimeGrid& grid, Stepper stepper) {
    const FrameAnchor anchor = anchor_frame(path, grid);
    const Eigen::Matrix3d to_frame = anchor.basis.transpose();
    GeneratorFunction gen = [to_frame, path](double t) -> Eigen::Vector3d {
        const PathSample s = path(t);
        return to_frame * s.n.cross(s.dn);
    };
    return time_ordered_exp(gen, rep, grid, stepper);
}

GeneratorFunction nonadiabatic_generator(const GeometricAngles& angles,
                                         const CumulativeIntegral& phi_curve,
                                         const DirectionPath& path) {
    CumulativeIntegral beta = angles.beta_curve;
    return [beta, phi_curve, path](double t) -> Eigen::Vector3d {
        const double v = path.speed(t);
        if (v <= kSpeedEpsilon) return Eigen::Vector3d::Zero();
        const double x = beta(t) - phi_curve(t);
        return {-v * std::sin(x), -v * std::cos(x), 0.0};
    };
}

double FactorizationResult::max_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, r);
    return m;
}

FactorizationResult factorize(const FieldSpec& field, const SpinRep& rep, const TimeGrid& grid,
                              Stepper stepper, int jobs) {
    FactorizationResult out;
    out.grid = grid;
    out.rep = rep;
    out.anchor = anchor_frame(field.path, grid);

    out.angles = beta_angle(field.path, grid);
    DynamicalTrace dyn = dynamical_operator(field, rep, grid);
    out.phi = dyn.phi;

    const Eigen::Matrix3d to_frame = out.anchor.basis.transpose();
    const DirectionPath& path = field.path;

    GeneratorFunction gen_a = [to_frame, path](double t) -> Eigen::Vector3d {
        const PathSample s = path(t);
        return to_frame * s.n.cross(s.dn);
    };
    GeneratorFunction gen_u = [to_frame, &field, path](double t) -> Eigen::Vector3d {
        return field.kB(t) * (to_frame * path(t).n);
    };
    GeneratorFunction gen_n = nonadiabatic_generator(out.angles, dyn.phi_curve, path);

    if (jobs > 1) {
        auto fut_a = std::async(std::launch::async,
                                [&] { return time_ordered_exp(gen_a, rep, grid, stepper); });
        auto fut_n = std::async(std::launch::async,
                                [&] { return time_ordered_exp(gen_n, rep, grid, stepper); });
        out.U = time_ordered_exp(gen_u, rep, grid, stepper);
        out.A = fut_a.get();
        out.N = fut_n.get();
    } else {
        out.A = time_ordered_exp(gen_a, rep, grid, stepper);
        out.N = time_ordered_exp(gen_n, rep, grid, stepper);
        out.U = time_ordered_exp(gen_u, rep, grid, stepper);
    }
    out.D = std::move(dyn.trace);

    out.residual.resize(static_cast<std::size_t>(grid.node_count()));
    for (int k = 0; k <= grid.steps; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out.residual[i] =
            (out.U.unitaries[i] - out.A.unitaries[i] * out.D.unitaries[i] * out.N.unitaries[i]).norm();
    }
    return out;
}

}  // namespace spinfact
