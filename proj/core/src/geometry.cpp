#include "spinfact/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinfact {

namespace {
constexpr double kGauss = 0.28867513459481287;  // sqrt(3)/6
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> integrand, const TimeGrid& grid)
    : integrand_(std::move(integrand)), grid_(grid) {
    const int m = grid.steps;
    const double h = grid.dt();
    std::vector<double> f(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) f[static_cast<std::size_t>(k)] = integrand_(grid.node(k));

    nodes_.assign(static_cast<std::size_t>(m) + 1, 0.0);
    // Even prefixes: composite Simpson pairs. Odd prefixes: close the last
    // interval with a single Simpson cell on an inserted midpoint.
    for (int k = 2; k <= m; k += 2) {
        nodes_[static_cast<std::size_t>(k)] =
            nodes_[static_cast<std::size_t>(k - 2)] +
            h / 3.0 *
                (f[static_cast<std::size_t>(k - 2)] + 4.0 * f[static_cast<std::size_t>(k - 1)] +
                 f[static_cast<std::size_t>(k)]);
    }
    for (int k = 1; k <= m; k += 2) {
        const double mid = integrand_(grid.node(k - 1) + 0.5 * h);
        nodes_[static_cast<std::size_t>(k)] =
            nodes_[static_cast<std::size_t>(k - 1)] +
            h / 6.0 * (f[static_cast<std::size_t>(k - 1)] + 4.0 * mid + f[static_cast<std::size_t>(k)]);
    }
}

double CumulativeIntegral::operator()(double t) const {
    const double h = grid_.dt();
    int k = static_cast<int>(std::floor(t / h));
    if (k < 0) k = 0;
    if (k > grid_.steps - 1) k = grid_.steps - 1;
    const double t0 = grid_.node(k);
    const double d = t - t0;
    if (d <= 0.0) return nodes_[static_cast<std::size_t>(k)];
    if (d >= h) return nodes_[static_cast<std::size_t>(k) + 1];
    // Two-point Gauss on the partial segment.
    const double g1 = integrand_(t0 + d * (0.5 - kGauss));
    const double g2 = integrand_(t0 + d * (0.5 + kGauss));
    return nodes_[static_cast<std::size_t>(k)] + 0.5 * d * (g1 + g2);
}

double beta_rate(const PathSample& s) {
    const double v2 = s.dn.squaredNorm();
    if (v2 <= kSpeedEpsilon * kSpeedEpsilon) return 0.0;
    return -s.ddn.dot(s.n.cross(s.dn)) / v2;
}

GeometricAngles beta_angle(const DirectionPath& path, const TimeGrid& grid) {
    GeometricAngles out;
    out.grid = grid;
    out.beta_curve = CumulativeIntegral([path](double t) { return beta_rate(path(t)); }, grid);
    out.arclen_curve = CumulativeIntegral([path](double t) { return path(t).dn.norm(); }, grid);
    out.beta = out.beta_curve.node_values();
    out.arclen = out.arclen_curve.node_values();
    out.speed.resize(static_cast<std::size_t>(grid.node_count()));
    for (int k = 0; k <= grid.steps; ++k) {
        out.speed[static_cast<std::size_t>(k)] = path(grid.node(k)).dn.norm();
    }
    return out;
}

double solid_angle(const DirectionPath& path, double period, int samples) {
    if (samples < 8) throw std::invalid_argument("solid_angle: need at least 8 samples");
    const PathSample first = path(0.0);
    const PathSample last = path(period);
    if ((last.n - first.n).norm() >= 1e-6) {
        throw std::invalid_argument("solid_angle: path is not closed over the given period");
    }

    std::vector<Eigen::Vector3d> n(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        n[static_cast<std::size_t>(k)] = path(period * k / samples).n;
    }

    // Rank candidate poles by minimum angular distance to the path, try the
    // best three; a path hugging all of them is rejected.
    const std::array<Eigen::Vector3d, 6> candidates = {
        Eigen::Vector3d{0, 0, 1}, Eigen::Vector3d{0, 0, -1}, Eigen::Vector3d{1, 0, 0},
        Eigen::Vector3d{-1, 0, 0}, Eigen::Vector3d{0, 1, 0}, Eigen::Vector3d{0, -1, 0}};
    std::array<double, 6> min_dist{};
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double d = std::numbers::pi;
        for (const auto& p : n) {
            const double a = std::acos(std::clamp(p.dot(candidates[c]), -1.0, 1.0));
            if (a < d) d = a;
        }
        min_dist[c] = d;
    }
    std::array<std::size_t, 6> order = {0, 1, 2, 3, 4, 5};
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return min_dist[a] > min_dist[b]; });

    constexpr double kPoleClearance = 1e-3;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::size_t c = order[static_cast<std::size_t>(attempt)];
        if (min_dist[c] <= kPoleClearance) continue;
        const Eigen::Vector3d pole = candidates[c];
        // Orthonormal equatorial axes for the azimuth about this pole.
        const Eigen::Vector3d seed = std::abs(pole.z()) < 0.9 ? Eigen::Vector3d(0, 0, 1)
                                                              : Eigen::Vector3d(1, 0, 0);
        const Eigen::Vector3d ex = pole.cross(seed).normalized();
        const Eigen::Vector3d ey = pole.cross(ex);

        // Loop integral of (1 - cos(polar)) d(azimuth), trapezoid in the
        // azimuth increments (wrapped to (-pi, pi]).
        double omega = 0.0;
        double prev_az = std::atan2(n[0].dot(ey), n[0].dot(ex));
        double prev_f = 1.0 - n[0].dot(pole);
        for (int k = 1; k <= samples; ++k) {
            const Eigen::Vector3d& p = n[static_cast<std::size_t>(k % samples)];
            const double az = std::atan2(p.dot(ey), p.dot(ex));
            double daz = az - prev_az;
            daz = std::remainder(daz, 2.0 * std::numbers::pi);
            const double f = 1.0 - p.dot(pole);
            omega += 0.5 * (prev_f + f) * daz;
            prev_az = az;
            prev_f = f;
        }
        // Reduce to the (-2*pi, 2*pi] branch (holonomy is 4*pi periodic).
        omega = std::remainder(omega, 4.0 * std::numbers::pi);
        if (omega <= -2.0 * std::numbers::pi) omega += 4.0 * std::numbers::pi;
        return omega;
    }
    throw std::runtime_error("solid_angle: path approaches all candidate poles");
}

}  // namespace spinfact
