#include "spinfact/solutions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinfact/geometry.hpp"
#include "spinfact/time_grid.hpp"

namespace spinfact {

namespace {

double class_field_rate(const DirectionPath& path, double t) {
    const PathSample s = path(t);
    const double v2 = s.dn.squaredNorm();
    if (v2 <= kSpeedEpsilon * kSpeedEpsilon) {
        throw std::domain_error("class field law undefined at stationary node t = " +
                                std::to_string(t) + " (division by |n'|^2)");
    }
    return s.ddn.dot(s.n.cross(s.dn)) / v2;  // = -beta'(t)
}

}  // namespace

FieldSpec class_i_field(const DirectionPath& path) {
    FieldSpec field;
    field.k = 1.0;
    field.path = path;
    field.B = [path](double t) { return class_field_rate(path, t); };
    return field;
}

FieldSpec class_ii_field(const DirectionPath& path, double c2) {
    FieldSpec field;
    field.k = 1.0;
    field.path = path;
    field.B = [path, c2](double t) { return c2 + class_field_rate(path, t); };
    return field;
}

Eigen::MatrixXcd class_i_closed_n(double arclen, const SpinRep& rep) {
    // exp(i S2 l) = exp(-i (0,-l,0).S)
    return exp_generator({0.0, -arclen, 0.0}, rep);
}

Eigen::MatrixXcd class_ii_closed_n(double c1, double c2, double t, const SpinRep& rep) {
    // exp(i c2 t S3) exp((i c1 S2 - i c2 S3) t)
    return exp_generator({0.0, 0.0, -c2 * t}, rep) *
           exp_generator({0.0, -c1 * t, c2 * t}, rep);
}

DirectionPath class_ii_spiral_path(double lambda, double c1, int sign) {
    if (!(lambda > 0.0)) throw std::invalid_argument("class_ii_spiral_path: lambda must be > 0");
    if (!(c1 * c1 > lambda * lambda)) {
        throw std::invalid_argument("class_ii_spiral_path: requires c1^2 > lambda^2");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("class_ii_spiral_path: sign must be +1 or -1");
    }
    const double g = sign * std::sqrt(c1 * c1 - lambda * lambda);
    const double t_max = std::numbers::pi / (2.0 * lambda);
    return DirectionPath(PathKind::Analytic, [lambda, g, t_max](double t) {
        if (!(t >= 0.0 && t < t_max)) {
            throw std::domain_error("class_ii_spiral_path: t outside [0, pi/(2 lambda)) domain bound");
        }
        const double c = std::cos(lambda * t);
        const double s = std::sin(lambda * t);
        const double az = (g / lambda) * std::log(std::tan(0.5 * lambda * t + 0.25 * std::numbers::pi));
        const double daz = g / c;
        const double d2az = g * lambda * s / (c * c);
        const double ca = std::cos(az);
        const double sa = std::sin(az);
        PathSample out;
        out.n = {c * ca, c * sa, s};
        out.dn = {-lambda * s * ca - daz * c * sa, -lambda * s * sa + daz * c * ca, lambda * c};
        out.ddn = {-lambda * lambda * c * ca + 2.0 * lambda * s * daz * sa - d2az * c * sa -
                       daz * daz * c * ca,
                   -lambda * lambda * c * sa - 2.0 * lambda * s * daz * ca + d2az * c * ca -
                       daz * daz * c * sa,
                   -lambda * lambda * s};
        return out;
    });
}

}  // namespace spinfact
