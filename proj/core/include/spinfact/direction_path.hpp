#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace spinfact {

// One evaluation of a unit-sphere curve: n(t), n'(t), n''(t) (time derivatives).
struct PathSample {
    Eigen::Vector3d n;
    Eigen::Vector3d dn;
    Eigen::Vector3d ddn;
};

enum class PathKind { Analytic, Tabulated };

// Direction curve n(t) on the unit two-sphere with first and second
// derivatives. Analytic families evaluate closed forms; tabulated paths
// interpolate normalized samples (local cubic on a uniform grid).
class DirectionPath {
  public:
    DirectionPath() = default;
    DirectionPath(PathKind kind, std::function<PathSample(double)> eval)
        : kind_(kind), eval_(std::move(eval)) {}

    PathSample operator()(double t) const { return eval_(t); }
    PathKind kind() const { return kind_; }
    double speed(double t) const { return eval_(t).dn.norm(); }

  private:
    PathKind kind_ = PathKind::Analytic;
    std::function<PathSample(double)> eval_;
};

// n(t) = (sin(theta) cos(omega t), sin(theta) sin(omega t), cos(theta)).
// Requires 0 <= theta <= pi.
DirectionPath make_precession_path(double theta, double omega);

// Tabulated path from (t_k, v_k) samples. Requirements: at least 5 samples,
// strictly increasing uniform t_k starting anywhere, |v_k| within 1e-6 of 1.
// Samples are normalized; node derivatives use centered 4th-order finite
// differences (one-sided 2nd-order at the ends); off-node evaluation is a
// local cubic through the 4 nearest nodes.
DirectionPath make_tabulated_path(const std::vector<double>& t,
                                  const std::vector<Eigen::Vector3d>& samples);

// CSV with header "t,nx,ny,nz" -> tabulated path.
DirectionPath load_tabulated_path_csv(const std::string& filename);

// Normalized trigonometric curve n = v/|v| with
// v_i(t) = a0_i + sum_k (A_ik cos(k t) + B_ik sin(k t)).
// Smooth closed (period 2*pi) test paths come from here.
DirectionPath make_normalized_fourier_path(const Eigen::Vector3d& a0,
                                           const Eigen::Matrix3Xd& cos_coeff,
                                           const Eigen::Matrix3Xd& sin_coeff);

}  // namespace spinfact
