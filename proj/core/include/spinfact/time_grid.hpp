#pragma once

#include <stdexcept>
#include <vector>

namespace spinfact {

// Uniform time grid on [0, t_end] with `steps` intervals (steps+1 nodes).
// All propagation and quadrature in this library runs on uniform grids;
// non-uniform sampling is rejected at the tabulated-path boundary instead.
struct TimeGrid {
    double t_end = 0.0;
    int steps = 0;

    TimeGrid() = default;
    TimeGrid(double t_end_, int steps_) : t_end(t_end_), steps(steps_) {
        if (!(t_end > 0.0)) throw std::invalid_argument("TimeGrid: t_end must be > 0");
        if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
    }

    double dt() const { return t_end / steps; }
    int node_count() const { return steps + 1; }
    double node(int k) const { return t_end * k / steps; }

    std::vector<double> nodes() const {
        std::vector<double> t(static_cast<std::size_t>(steps) + 1);
        for (int k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = node(k);
        return t;
    }
};

// Below this speed a direction path counts as stationary: frame initial
// conditions are undefined and the beta integrand is set to zero.
inline constexpr double kSpeedEpsilon = 1e-12;

}  // namespace spinfact
