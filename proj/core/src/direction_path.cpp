#include "spinfact/direction_path.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spinfact {

DirectionPath make_precession_path(double theta, double omega) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw std::invalid_argument("make_precession_path: theta must lie in [0, pi]");
    }
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    return DirectionPath(PathKind::Analytic, [st, ct, omega](double t) {
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t);
        PathSample out;
        out.n = {st * c, st * s, ct};
        out.dn = {-st * omega * s, st * omega * c, 0.0};
        out.ddn = {-st * omega * omega * c, -st * omega * omega * s, 0.0};
        return out;
    });
}

namespace {

struct TabulatedData {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<Eigen::Vector3d> n, dn, ddn;
};

// Node derivatives: centered 4th order in the interior, centered 2nd order
// one node from the boundary, one-sided 2nd order at the ends.
void differentiate(const std::vector<Eigen::Vector3d>& f, double h,
                   std::vector<Eigen::Vector3d>& d1, std::vector<Eigen::Vector3d>& d2) {
    const int m = static_cast<int>(f.size()) - 1;
    d1.resize(f.size());
    d2.resize(f.size());
    auto at = [&](int k) -> const Eigen::Vector3d& { return f[static_cast<std::size_t>(k)]; };
    for (int k = 0; k <= m; ++k) {
        Eigen::Vector3d g1, g2;
        if (k >= 2 && k <= m - 2) {
            g1 = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
            g2 = (-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2)) /
                 (12.0 * h * h);
        } else if (k >= 1 && k <= m - 1) {
            g1 = (at(k + 1) - at(k - 1)) / (2.0 * h);
            g2 = (at(k - 1) - 2.0 * at(k) + at(k + 1)) / (h * h);
        } else if (k == 0) {
            g1 = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            g2 = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
        } else {
            g1 = (3.0 * at(m) - 4.0 * at(m - 1) + at(m - 2)) / (2.0 * h);
            g2 = (2.0 * at(m) - 5.0 * at(m - 1) + 4.0 * at(m - 2) - at(m - 3)) / (h * h);
        }
        d1[static_cast<std::size_t>(k)] = g1;
        d2[static_cast<std::size_t>(k)] = g2;
    }
}

// Local cubic Lagrange interpolation through the 4 nearest nodes.
Eigen::Vector3d cubic_eval(const std::vector<Eigen::Vector3d>& f, double t0, double h, double t) {
    const int m = static_cast<int>(f.size()) - 1;
    const double x = (t - t0) / h;
    int i = static_cast<int>(std::floor(x)) - 1;
    if (i < 0) i = 0;
    if (i > m - 3) i = m - 3;
    const double u = x - i;
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    const auto idx = static_cast<std::size_t>(i);
    return w0 * f[idx] + w1 * f[idx + 1] + w2 * f[idx + 2] + w3 * f[idx + 3];
}

}  // namespace

DirectionPath make_tabulated_path(const std::vector<double>& t,
                                  const std::vector<Eigen::Vector3d>& samples) {
    if (t.size() != samples.size()) {
        throw std::invalid_argument("make_tabulated_path: time/sample count mismatch");
    }
    if (t.size() < 5) {
        throw std::invalid_argument("make_tabulated_path: need at least 5 samples, got " +
                                    std::to_string(t.size()));
    }
    const double h = t[1] - t[0];
    if (!(h > 0.0)) throw std::invalid_argument("make_tabulated_path: times must be strictly increasing");
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double dk = t[k] - t[k - 1];
        if (!(dk > 0.0)) {
            throw std::invalid_argument("make_tabulated_path: times must be strictly increasing");
        }
        if (std::abs(dk - h) > 1e-9 * std::max(1.0, h)) {
            throw std::invalid_argument("make_tabulated_path: non-uniform grid (step " +
                                        std::to_string(k) + ")");
        }
    }

    auto data = std::make_shared<TabulatedData>();
    data->t0 = t[0];
    data->h = h;
    data->n.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double norm = samples[k].norm();
        if (std::abs(norm - 1.0) > 1e-6) {
            throw std::invalid_argument("make_tabulated_path: sample " + std::to_string(k) +
                                        " has |v| = " + std::to_string(norm) +
                                        ", more than 1e-6 from unit norm");
        }
        data->n.push_back(samples[k] / norm);
    }
    differentiate(data->n, h, data->dn, data->ddn);
    // Node samples sit exactly on the sphere, so the true derivative is
    // tangent; project out the stencil's radial error component.
    for (std::size_t k = 0; k < data->n.size(); ++k) {
        data->dn[k] -= data->n[k] * data->n[k].dot(data->dn[k]);
    }

    return DirectionPath(PathKind::Tabulated, [data](double t) {
        PathSample out;
        out.n = cubic_eval(data->n, data->t0, data->h, t);
        out.dn = cubic_eval(data->dn, data->t0, data->h, t);
        out.ddn = cubic_eval(data->ddn, data->t0, data->h, t);
        return out;
    });
}

DirectionPath load_tabulated_path_csv(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open path CSV: " + filename);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty path CSV: " + filename);
    std::string header = line;
    header.erase(std::remove_if(header.begin(), header.end(),
                                [](unsigned char c) { return std::isspace(c); }),
                 header.end());
    if (header != "t,nx,ny,nz") {
        throw std::runtime_error("path CSV " + filename + ": expected header 't,nx,ny,nz', got '" +
                                 line + "'");
    }

    std::vector<double> t;
    std::vector<Eigen::Vector3d> v;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double vals[4];
        char comma;
        for (int i = 0; i < 4; ++i) {
            if (!(ss >> vals[i])) {
                throw std::runtime_error("path CSV " + filename + ": bad value at row " +
                                         std::to_string(row));
            }
            if (i < 3 && !(ss >> comma)) {
                throw std::runtime_error("path CSV " + filename + ": missing comma at row " +
                                         std::to_string(row));
            }
        }
        t.push_back(vals[0]);
        v.emplace_back(vals[1], vals[2], vals[3]);
    }
    return make_tabulated_path(t, v);
}

DirectionPath make_normalized_fourier_path(const Eigen::Vector3d& a0,
                                           const Eigen::Matrix3Xd& cos_coeff,
                                           const Eigen::Matrix3Xd& sin_coeff) {
    if (cos_coeff.cols() != sin_coeff.cols()) {
        throw std::invalid_argument("make_normalized_fourier_path: coefficient shape mismatch");
    }
    const int modes = static_cast<int>(cos_coeff.cols());
    return DirectionPath(PathKind::Analytic, [a0, cos_coeff, sin_coeff, modes](double t) {
        Eigen::Vector3d v = a0, dv = Eigen::Vector3d::Zero(), d2v = Eigen::Vector3d::Zero();
        for (int k = 1; k <= modes; ++k) {
            const double c = std::cos(k * t);
            const double s = std::sin(k * t);
            const Eigen::Vector3d ak = cos_coeff.col(k - 1);
            const Eigen::Vector3d bk = sin_coeff.col(k - 1);
            v += ak * c + bk * s;
            dv += k * (bk * c - ak * s);
            d2v += -double(k) * k * (ak * c + bk * s);
        }
        const double r = v.norm();
        if (!(r > 0.0)) throw std::domain_error("make_normalized_fourier_path: curve passes through 0");
        const double vd = v.dot(dv);
        PathSample out;
        out.n = v / r;
        out.dn = dv / r - v * vd / (r * r * r);
        out.ddn = d2v / r - (2.0 * dv * vd + v * (dv.dot(dv) + v.dot(d2v))) / (r * r * r) +
                  3.0 * v * vd * vd / (r * r * r * r * r);
        return out;
    });
}

}  // namespace spinfact
