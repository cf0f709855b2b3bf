#include "spinfact/frame_transport.hpp"

#include <cmath>
#include <stdexcept>

namespace spinfact {

Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w) {
    const double angle = w.norm();
    if (angle < 1e-300) return Eigen::Matrix3d::Identity();
    const Eigen::Vector3d axis = w / angle;
    Eigen::Matrix3d k;
    k << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(), 0.0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

Frame transport_frame(const DirectionPath& path, const TimeGrid& grid) {
    const PathSample s0 = path(0.0);
    const double v0 = s0.dn.norm();
    if (v0 <= kSpeedEpsilon) {
        throw std::invalid_argument(
            "transport_frame: |n'(0)| <= 1e-12, initial triad undefined (stationary start)");
    }

    Frame frame;
    frame.grid = grid;
    frame.triads.reserve(static_cast<std::size_t>(grid.node_count()));

    Eigen::Matrix3d triad;
    triad.col(0) = s0.dn / v0;
    triad.col(2) = s0.n;
    triad.col(1) = triad.col(2).cross(triad.col(0));
    frame.triads.push_back(triad);

    const double dt = grid.dt();
    for (int k = 0; k < grid.steps; ++k) {
        const PathSample mid = path(grid.node(k) + 0.5 * dt);
        triad = rotation_exp(dt * mid.n.cross(mid.dn)) * triad;
        frame.triads.push_back(triad);
        const double drift = (triad.transpose() * triad - Eigen::Matrix3d::Identity()).norm();
        if (drift > frame.orthonormality_drift) frame.orthonormality_drift = drift;
    }
    return frame;
}

}  // namespace spinfact
