#pragma once

#include <functional>
#include <vector>

#include "spinfact/direction_path.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

// Running integral of a scalar integrand on a uniform grid. Node values are
// cumulative composite Simpson (odd prefixes close their last interval with
// one midpoint evaluation); off-node values add a two-point Gauss segment
// from the preceding node, so the curve can be sampled anywhere the
// integrand can.
class CumulativeIntegral {
  public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> integrand, const TimeGrid& grid);

    double operator()(double t) const;
    const std::vector<double>& node_values() const { return nodes_; }
    const TimeGrid& grid() const { return grid_; }

  private:
    std::function<double(double)> integrand_;
    TimeGrid grid_;
    std::vector<double> nodes_;
};

// Geometric data of a direction path on a grid: the relative rotation angle
// beta(t) between the transported and path-adapted triads, arc length l(t),
// and speed |n'(t)|. Where |n'| <= kSpeedEpsilon the beta integrand is
// defined as zero and beta stays flat.
struct GeometricAngles {
    TimeGrid grid;
    std::vector<double> beta;
    std::vector<double> arclen;
    std::vector<double> speed;
    CumulativeIntegral beta_curve;    // evaluable off-node
    CumulativeIntegral arclen_curve;  // evaluable off-node
};

// beta(t) = integral of -(n'' . (n x n')) / |n'|^2, plus l(t) and |n'(t)|.
GeometricAngles beta_angle(const DirectionPath& path, const TimeGrid& grid);

// Pointwise beta integrand (also the class-i field law up to sign).
double beta_rate(const PathSample& s);

// Oriented solid angle of a closed path, reduced to (-2*pi, 2*pi].
// Computed as the loop integral of (1 - cos(polar)) d(azimuth) about a
// coordinate pole chosen among {+-x, +-y, +-z} to stay clear of the path;
// paths passing through all three best candidate poles are rejected.
// Requires |n(T) - n(0)| < 1e-6.
double solid_angle(const DirectionPath& path, double period, int samples = 4096);

}  // namespace spinfact
