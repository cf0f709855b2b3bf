#pragma once

#include <Eigen/Dense>

#include "spinfact/field.hpp"
#include "spinfact/spin_algebra.hpp"

namespace spinfact {

// Field families for which N(t) collapses to ordinary exponentials.
//
// Class i:  beta(t) - phi(t) = 0. Since phi' = -kB and beta' is the
//           geometric rate, the condition fixes kB(t) = -beta'(t),
//           i.e. kB = (n'' . (n x n')) / |n'|^2. Then N(t) = exp(i S2 l(t)).
// Class ii: |n'| = c1 and beta(t) - phi(t) = c2 t, which fixes
//           kB(t) = c2 - beta'(t). Then N(t) = exp(i c2 t S3) exp((i c1 S2 - i c2 S3) t).

// kB(t) = -beta'(t) on the given path; k is reported as 1 and B carries the
// sign. Evaluating at a node with |n'| <= kSpeedEpsilon throws
// std::domain_error (the law divides by |n'|^2).
FieldSpec class_i_field(const DirectionPath& path);

// kB(t) = c2 - beta'(t); same stationarity restriction as class_i_field.
FieldSpec class_ii_field(const DirectionPath& path, double c2);

// N = exp(i S2 l).
Eigen::MatrixXcd class_i_closed_n(double arclen, const SpinRep& rep);

// N = exp(i c2 t S3) exp((i c1 S2 - i c2 S3) t).
Eigen::MatrixXcd class_ii_closed_n(double c1, double c2, double t, const SpinRep& rep);

// Constant-speed spiral from the equator toward the pole:
//   n(t) = (cos(lambda t) cos(phi), cos(lambda t) sin(phi), sin(lambda t)),
//   phi(t) = sign/lambda * sqrt(c1^2 - lambda^2) * log(tan(lambda t/2 + pi/4)),
// with |n'(t)| = c1 on 0 <= t < pi/(2 lambda). Requires lambda > 0 and
// c1^2 > lambda^2; evaluation outside the domain throws std::domain_error.
DirectionPath class_ii_spiral_path(double lambda, double c1, int sign = +1);

}  // namespace spinfact
