#pragma once

#include <Eigen/Dense>

namespace spinfact {

// Irreducible spin-j representation of su(2) in the basis where S3 is
// diagonal with eigenvalues j, j-1, ..., -j (m descending).
struct SpinRep {
    double j = 0.0;
    int dim = 0;
    Eigen::MatrixXcd S1, S2, S3;
};

// Build the spin matrices for half-integer or integer j >= 1/2.
// Ladder construction: (S+)_{m+1,m} = sqrt(j(j+1) - m(m+1)),
// S1 = (S+ + S-)/2, S2 = (S+ - S-)/(2i).
// Throws std::invalid_argument for j not a multiple of 1/2, j <= 0,
// or 2j+1 exceeding max_dim.
SpinRep spin_matrices(double j, int max_dim = 64);

// v1*S1 + v2*S2 + v3*S3. Hermitian for real v; v need not be unit.
Eigen::MatrixXcd axis_dot(const Eigen::Vector3d& v, const SpinRep& rep);

// exp(-i v.S) via eigendecomposition of the Hermitian generator, so the
// result is unitary to round-off regardless of |v|.
Eigen::MatrixXcd exp_generator(const Eigen::Vector3d& v, const SpinRep& rep);

// ||U^dagger U - I||_F, the unitarity defect.
double unitarity_error(const Eigen::MatrixXcd& u);

// ||A - A^dagger||_F (max over entries would be stricter; Frobenius is
// what the tolerance budgets are written against).
double hermiticity_error(const Eigen::MatrixXcd& a);

}  // namespace spinfact
