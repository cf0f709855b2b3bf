#pragma once

#include <functional>

#include "spinfact/direction_path.hpp"

namespace spinfact {

// Magnetic field B(t) = B(t) n(t) coupled as H(t) = k B(t) n(t).S.
// B may vanish and change sign (degeneracy crossings are allowed).
struct FieldSpec {
    double k = 1.0;
    std::function<double(double)> B;
    DirectionPath path;

    double kB(double t) const { return k * B(t); }
};

}  // namespace spinfact
