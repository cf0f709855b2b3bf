#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinfact/field.hpp"
#include "spinfact/geometry.hpp"
#include "spinfact/propagator.hpp"
#include "spinfact/spin_algebra.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

// Everything is expressed in the transported frame anchored at the first
// regular node t_a (t_a = 0 for paths moving at t = 0): the code matrices
// S1, S2, S3 stand for e1(t_a).S, e2(t_a).S, e3(t_a).S, and lab 3-vectors
// are rotated by basis^T before any generator is built.
struct FrameAnchor {
    int anchor_index = 0;          // first grid node with |n'| > kSpeedEpsilon
    bool stationary = false;       // no such node: path never moves on the grid
    Eigen::Matrix3d basis;         // columns e1(t_a), e2(t_a), e3(t_a), lab coords
};

// Find the anchor on the grid. A path that never moves gets a deterministic
// orthonormal completion of e3 = n(0) (only e3 matters in that case).
FrameAnchor anchor_frame(const DirectionPath& path, const TimeGrid& grid);

struct DynamicalTrace {
    PropagatorTrace trace;          // D(t_k) = exp(i phi(t_k) S3)
    std::vector<double> phi;        // phi(t) = -integral of kB
    CumulativeIntegral phi_curve;   // evaluable off-node
};

// D(t) = exp(i phi(t) S3) with phi by cumulative Simpson. No time ordering:
// the generator direction is fixed along e3(t_a).
DynamicalTrace dynamical_operator(const FieldSpec& field, const SpinRep& rep,
                                  const TimeGrid& grid);

// A(t) solves A' = -i (n x n').S A, integrated in the anchored frame basis.
PropagatorTrace geometric_operator(const DirectionPath& path, const SpinRep& rep,
                                   const TimeGrid& grid, Stepper stepper = Stepper::ExpMidpoint);

// The non-adiabatic angular velocity in the anchored basis:
//   w1 = -|n'| sin(beta - phi), w2 = -|n'| cos(beta - phi), w3 = 0 exactly.
// Nodes with |n'| <= kSpeedEpsilon return the zero vector.
GeneratorFunction nonadiabatic_generator(const GeometricAngles& angles,
                                         const CumulativeIntegral& phi_curve,
                                         const DirectionPath& path);

struct FactorizationResult {
    TimeGrid grid;
    SpinRep rep;
    FrameAnchor anchor;
    PropagatorTrace U, A, D, N;
    std::vector<double> phi;
    GeometricAngles angles;
    std::vector<double> residual;   // ||U - A D N||_F per node

    double max_residual() const;
};

// Compute the full factorization U = A D N against the Schrodinger oracle
// and report the per-node residual. Paths that are stationary at t = 0 but
// move later are anchored at the first regular node (anchor.anchor_index).
// With jobs > 1 the independent traces run concurrently after the shared
// angle pass; the result does not depend on jobs.
FactorizationResult factorize(const FieldSpec& field, const SpinRep& rep,
                              const TimeGrid& grid, Stepper stepper = Stepper::ExpMidpoint,
                              int jobs = 1);

}  // namespace spinfact
