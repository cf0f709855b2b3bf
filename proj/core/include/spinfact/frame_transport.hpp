#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinfact/direction_path.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

// Parallel-transported orthonormal triad along n(t). Each matrix has
// columns (e1, e2, e3) in lab coordinates; e3 tracks n up to stepper error.
struct Frame {
    TimeGrid grid;
    std::vector<Eigen::Matrix3d> triads;
    // max_k ||T_k^T T_k - I||_F; no re-orthonormalization is applied,
    // drift is only measured.
    double orthonormality_drift = 0.0;

    const Eigen::Vector3d e(int axis, int k) const { return triads[static_cast<std::size_t>(k)].col(axis); }
};

// Rodrigues rotation exp: w -> R = exp([w]_x), rotation by |w| about w/|w|.
Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w);

// Integrate e_i' = (n x n') x e_i with the rotation-exact midpoint stepper
// from the initial triad (n'(0)/|n'(0)|, n(0) x n'(0)/|n'(0)|, n(0)).
// Throws std::invalid_argument when |n'(0)| <= kSpeedEpsilon (the initial
// triad is undefined; factorize() handles that case by anchoring instead).
Frame transport_frame(const DirectionPath& path, const TimeGrid& grid);

}  // namespace spinfact
