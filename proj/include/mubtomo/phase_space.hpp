#ifndef MUBTOMO_PHASE_SPACE_HPP
#define MUBTOMO_PHASE_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubtomo/error.hpp"

namespace mubtomo {

/// Uniform closed axis: n nodes from lo to hi inclusive.
struct Axis {
    int n = 0;
    double lo = 0.0;
    double hi = 0.0;

    double step() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }
    double at(int i) const { return lo + i * step(); }
    double extent() const { return std::max(std::abs(lo), std::abs(hi)); }

    friend bool operator==(const Axis&, const Axis&) = default;
};

inline void validate_axis(const Axis& a, const char* name) {
    if (a.n < 2 || !(a.hi > a.lo) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
        fail(ErrorCode::InvalidInput, std::string(name) + " axis needs n >= 2 and lo < hi");
    }
}

/// Real samples over (x, p); values(i, j) sits at (x.at(i), p.at(j)).
/// hbar = 1 throughout.
struct PhaseSpaceGrid {
    Axis x;
    Axis p;
    Eigen::MatrixXd values;

    static PhaseSpaceGrid zeros(Axis x, Axis p) {
        return {x, p, Eigen::MatrixXd::Zero(x.n, p.n)};
    }

    double cell_area() const { return x.step() * p.step(); }
    double integral() const { return values.sum() * cell_area(); }
};

/// Projections: values(k, j) is the marginal at angle thetas[k] and offset
/// s.at(j).
struct Sinogram {
    std::vector<double> thetas;
    Axis s;
    Eigen::MatrixXd values;

    int n_theta() const { return static_cast<int>(thetas.size()); }
    double row_integral(int k) const { return values.row(k).sum() * s.step(); }
};

/// Samples f(x, p) on the grid nodes.
template <typename F>
PhaseSpaceGrid sample_grid(Axis x, Axis p, F&& f) {
    PhaseSpaceGrid g = PhaseSpaceGrid::zeros(x, p);
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < p.n; ++j) {
            g.values(i, j) = f(x.at(i), p.at(j));
        }
    }
    return g;
}

/// n angles k pi / n, k = 0..n-1.
inline std::vector<double> uniform_angles(int n) {
    std::vector<double> thetas(n);
    for (int k = 0; k < n; ++k) {
        thetas[k] = std::numbers::pi * k / n;
    }
    return thetas;
}

/// sqrt(sum (a-b)^2 / sum b^2).
inline double relative_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / b.norm();
}

/// Linear interpolation of samples on `axis`; zero outside.
inline double interpolate_linear(const Axis& axis, const double* samples, double t) {
    const double pos = (t - axis.lo) / axis.step();
    if (!(pos >= 0.0) || pos > axis.n - 1) {
        return 0.0;
    }
    const int i = std::min(static_cast<int>(pos), axis.n - 2);
    const double w = pos - i;
    return (1.0 - w) * samples[i] + w * samples[i + 1];
}

} // namespace mubtomo

#endif
