#include "spinfact/spin_algebra.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace spinfact {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

SpinRep spin_matrices(double j, int max_dim) {
    const double two_j = 2.0 * j;
    if (!(j > 0.0) || std::abs(two_j - std::round(two_j)) > 1e-9) {
        throw std::invalid_argument("spin_matrices: j must be a positive multiple of 1/2, got " +
                                    std::to_string(j));
    }
    const int dim = static_cast<int>(std::round(two_j)) + 1;
    if (dim > max_dim) {
        throw std::invalid_argument("spin_matrices: dimension " + std::to_string(dim) +
                                    " exceeds cap " + std::to_string(max_dim));
    }

    SpinRep rep;
    rep.j = j;
    rep.dim = dim;
    rep.S3 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) rep.S3(k, k) = j - k;

    // (S+)_{k-1,k} raises m = j-k to m+1.
    Eigen::MatrixXcd s_plus = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        const double m = j - k;
        s_plus(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    const Eigen::MatrixXcd s_minus = s_plus.adjoint();
    rep.S1 = 0.5 * (s_plus + s_minus);
    rep.S2 = (s_plus - s_minus) / (2.0 * kI);
    return rep;
}

Eigen::MatrixXcd axis_dot(const Eigen::Vector3d& v, const SpinRep& rep) {
    return v.x() * rep.S1 + v.y() * rep.S2 + v.z() * rep.S3;
}

Eigen::MatrixXcd exp_generator(const Eigen::Vector3d& v, const SpinRep& rep) {
    const double norm = v.norm();
    if (norm == 0.0) return Eigen::MatrixXcd::Identity(rep.dim, rep.dim);

    // n.S for unit n has the fixed spectrum {j, ..., -j}; phase those
    // eigenvalues in the eigenbasis of the Hermitian generator.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(axis_dot(v, rep));
    Eigen::VectorXcd phases(rep.dim);
    for (int k = 0; k < rep.dim; ++k) phases(k) = std::exp(-kI * es.eigenvalues()(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double unitarity_error(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

double hermiticity_error(const Eigen::MatrixXcd& a) { return (a - a.adjoint()).norm(); }

}  // namespace spinfact
