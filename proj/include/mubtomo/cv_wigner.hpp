#ifndef MUBTOMO_CV_WIGNER_HPP
#define MUBTOMO_CV_WIGNER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubtomo/classical_radon.hpp"
#include "mubtomo/error.hpp"
#include "mubtomo/parallel.hpp"
#include "mubtomo/phase_space.hpp"
#include "mubtomo/qudit_mub.hpp"

namespace mubtomo {

/// Samples of <x|rho|x'> on a uniform axis; values(i, j) = <x_i|rho|x_j>.
struct PositionDensityMatrix {
    Axis x;
    ComplexMatrix values;

    double trace() const { return values.diagonal().real().sum() * x.step(); }
};

/// rho = |psi><psi| with psi rescaled to unit discrete norm.
inline PositionDensityMatrix density_from_wavefunction(const Axis& x, const ComplexVector& psi) {
    validate_axis(x, "x");
    if (psi.size() != x.n) {
        fail(ErrorCode::DimensionMismatch, "wavefunction length does not match its axis");
    }
    const double norm2 = psi.squaredNorm() * x.step();
    if (!(norm2 > 0.0)) {
        fail(ErrorCode::InvalidInput, "wavefunction has zero norm");
    }
    const ComplexVector v = psi / std::sqrt(norm2);
    return {x, v * v.adjoint()};
}

/// Checks shape, x <-> x' conjugation symmetry and unit trace.
inline void validate_position_density(const PositionDensityMatrix& rho, double trace_tol = 1e-6) {
    validate_axis(rho.x, "x");
    if (rho.values.rows() != rho.x.n || rho.values.cols() != rho.x.n) {
        fail(ErrorCode::DimensionMismatch, "density samples do not match their axis");
    }
    const double scale = std::max(1.0, rho.values.cwiseAbs().maxCoeff());
    if ((rho.values - rho.values.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        fail(ErrorCode::NonHermitianInput, "<x|rho|x'> is not conjugate symmetric");
    }
    if (std::abs(rho.trace() - 1.0) > trace_tol) {
        fail(ErrorCode::InvalidInput, "integral of <x|rho|x> is " + std::to_string(rho.trace()));
    }
}

/// Angle of the rotated quadrature X_theta = x cos(theta) + p sin(theta).
struct QuadratureKernelParams {
    double theta = 0.0;

    double c() const { return std::cos(theta); }
    double s() const { return std::sin(theta); }
};

inline constexpr double kDegenerateSin = 1e-9;

/// <x'|x;theta> = (2 pi |S|)^{-1/2} exp(-i ((x^2 + x'^2) C - 2 x x') / (2 S)).
/// Symmetric in x <-> x'. At S = 0 the kernel is a delta; callers use the
/// identity/parity path there.
inline cplx quadrature_kernel(double x_prime, double x, QuadratureKernelParams params) {
    const double c = params.c();
    const double s = params.s();
    if (std::abs(s) <= kDegenerateSin) {
        fail(ErrorCode::DegenerateAngle, "quadrature kernel is singular at sin(theta) = 0");
    }
    const double phase = -((x * x + x_prime * x_prime) * c - 2.0 * x * x_prime) / (2.0 * s);
    return std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi * std::abs(s)), phase);
}

/// K(i, j) = <x'_i|x_j;theta> on the given axes.
inline ComplexMatrix quadrature_kernel_matrix(const Axis& rows, const Axis& cols, double theta) {
    ComplexMatrix k(rows.n, cols.n);
    const QuadratureKernelParams params{theta};
    for (int i = 0; i < rows.n; ++i) {
        for (int j = 0; j < cols.n; ++j) {
            k(i, j) = quadrature_kernel(rows.at(i), cols.at(j), params);
        }
    }
    return k;
}

/// Largest sample spacing that resolves the kernel phase at this angle.
inline double max_kernel_spacing(const Axis& integration_axis, double theta) {
    return std::abs(std::sin(theta)) * std::numbers::pi / integration_axis.extent();
}

namespace detail {

inline void check_kernel_sampling(const Axis& axis, double theta) {
    if (axis.step() > max_kernel_spacing(axis, theta)) {
        fail(ErrorCode::AliasedGrid,
             "x spacing " + std::to_string(axis.step()) + " too coarse for theta = " +
                 std::to_string(theta) + " (need <= " +
                 std::to_string(max_kernel_spacing(axis, theta)) + ")");
    }
}

/// A(s, x) = conj(<x|s;theta>) dx, so (A psi)(s) = <s;theta|psi>.
inline ComplexMatrix amplitude_matrix(const Axis& s_axis, const Axis& x_axis, double theta) {
    check_kernel_sampling(x_axis, theta);
    return quadrature_kernel_matrix(s_axis, x_axis, theta).conjugate() * x_axis.step();
}

inline std::vector<double> diagonal_along(const PositionDensityMatrix& rho, const Axis& s_axis,
                                          double sign) {
    std::vector<double> diag(rho.x.n);
    for (int i = 0; i < rho.x.n; ++i) {
        diag[i] = rho.values(i, i).real();
    }
    std::vector<double> row(s_axis.n);
    for (int j = 0; j < s_axis.n; ++j) {
        row[j] = std::max(0.0, interpolate_linear(rho.x, diag.data(), sign * s_axis.at(j)));
    }
    return row;
}

inline std::vector<double> sandwich_diagonal(const ComplexMatrix& a, const ComplexMatrix& rho) {
    const ComplexMatrix ar = a * rho;
    std::vector<double> row(a.rows());
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        row[j] = std::max(0.0, (ar.row(j).transpose().cwiseProduct(a.row(j).adjoint())).sum().real());
    }
    return row;
}

// Angles closer than 45 degrees to 0 or pi go through the pi/2 kernel first:
// U(theta) = U(theta - pi/2) U(pi/2). The kernel phase convention makes the
// composed kernel equal the direct one up to a constant unimodular factor,
// which cancels in probabilities. Every kernel applied then has |sin| >= 1/sqrt2.
inline bool needs_composition(double theta) {
    return std::abs(std::sin(theta)) < std::numbers::sqrt2 / 2.0;
}

} // namespace detail

/// Quadrature distributions <s;theta|rho|s;theta> for several angles. The s
/// axis also serves as the intermediate momentum axis of composed angles.
inline Sinogram quadratures(const PositionDensityMatrix& rho, const std::vector<double>& thetas,
                            const Axis& s_axis) {
    validate_axis(rho.x, "x");
    validate_axis(s_axis, "s");
    if (rho.values.rows() != rho.x.n || rho.values.cols() != rho.x.n) {
        fail(ErrorCode::DimensionMismatch, "density samples do not match their axis");
    }
    std::optional<ComplexMatrix> momentum;
    for (double t : thetas) {
        if (!std::isfinite(t)) {
            fail(ErrorCode::InvalidInput, "non-finite quadrature angle");
        }
        if (std::abs(std::sin(t)) > kDegenerateSin && detail::needs_composition(t) && !momentum) {
            const ComplexMatrix f = detail::amplitude_matrix(s_axis, rho.x, std::numbers::pi / 2.0);
            momentum = f * rho.values * f.adjoint();
        }
    }

    Sinogram sino{thetas, s_axis, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(thetas.size()), s_axis.n)};
    std::vector<std::vector<double>> rows(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t k) {
        const double theta = thetas[k];
        if (std::abs(std::sin(theta)) <= kDegenerateSin) {
            rows[k] = detail::diagonal_along(rho, s_axis, std::cos(theta) > 0.0 ? 1.0 : -1.0);
        } else if (detail::needs_composition(theta)) {
            const double rest = theta - std::numbers::pi / 2.0;
            rows[k] = detail::sandwich_diagonal(detail::amplitude_matrix(s_axis, s_axis, rest), *momentum);
        } else {
            rows[k] = detail::sandwich_diagonal(detail::amplitude_matrix(s_axis, rho.x, theta), rho.values);
        }
    });
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        for (int j = 0; j < s_axis.n; ++j) {
            sino.values(static_cast<Eigen::Index>(k), j) = rows[k][j];
        }
    }
    return sino;
}

/// One row rho_Q(s, theta) = <s;theta|rho|s;theta>.
inline std::vector<double> quadrature_distribution(const PositionDensityMatrix& rho, double theta,
                                                   const Axis& s_axis) {
    const Sinogram one = quadratures(rho, {theta}, s_axis);
    return detail::row_copy(one.values, 0);
}

/// Rows must be finite and nonnegative; with check_mass each row must also
/// integrate to one within tol.
inline void validate_quadratures(const Sinogram& quads, bool check_mass = true, double tol = 1e-4) {
    if (quads.values.rows() != quads.n_theta() || quads.values.cols() != quads.s.n) {
        fail(ErrorCode::DimensionMismatch, "quadrature set shape does not match its axes");
    }
    if (!quads.values.allFinite() || (quads.values.size() > 0 &&
                                      quads.values.minCoeff() < -1e-12 * std::max(1.0, quads.values.maxCoeff()))) {
        fail(ErrorCode::InvalidInput, "quadrature distributions must be finite and nonnegative");
    }
    if (check_mass) {
        for (int k = 0; k < quads.n_theta(); ++k) {
            if (std::abs(quads.row_integral(k) - 1.0) > tol) {
                fail(ErrorCode::InvalidInput, "quadrature row " + std::to_string(k) + " does not integrate to 1");
            }
        }
    }
}

/// W(x, p) = integral dy/2pi e^{ipy} <x - y/2|rho|x + y/2>, with y stepping by
/// 2 dx so that on-node x hits samples exactly (bilinear interpolation
/// otherwise). The p axis must stay below the Nyquist bound pi / (2 dx).
inline PhaseSpaceGrid wigner_from_density(const PositionDensityMatrix& rho, const Axis& x_axis,
                                          const Axis& p_axis) {
    validate_axis(rho.x, "x");
    validate_axis(x_axis, "x");
    validate_axis(p_axis, "p");
    if (rho.values.rows() != rho.x.n || rho.values.cols() != rho.x.n) {
        fail(ErrorCode::DimensionMismatch, "density samples do not match their axis");
    }
    const double scale = std::max(1.0, rho.values.cwiseAbs().maxCoeff());
    if ((rho.values - rho.values.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        fail(ErrorCode::NonHermitianInput, "<x|rho|x'> is not conjugate symmetric");
    }
    const double dx = rho.x.step();
    const double dy = 2.0 * dx;
    if (p_axis.extent() > std::numbers::pi / dy * (1.0 + 1e-12)) {
        fail(ErrorCode::AliasedGrid, "p range exceeds pi / (2 dx) = " + std::to_string(std::numbers::pi / dy));
    }

    const int half_span = rho.x.n; // enough steps to leave the sampled domain
    auto sample = [&](double u, double v) -> cplx {
        const double pu = (u - rho.x.lo) / dx;
        const double pv = (v - rho.x.lo) / dx;
        const double last = rho.x.n - 1;
        if (pu < -1e-9 || pv < -1e-9 || pu > last + 1e-9 || pv > last + 1e-9) {
            return 0.0;
        }
        const int iu = std::clamp(static_cast<int>(std::floor(pu + 1e-9)), 0, rho.x.n - 1);
        const int iv = std::clamp(static_cast<int>(std::floor(pv + 1e-9)), 0, rho.x.n - 1);
        const double fu = std::clamp(pu - iu, 0.0, 1.0);
        const double fv = std::clamp(pv - iv, 0.0, 1.0);
        const int iu1 = std::min(iu + 1, rho.x.n - 1);
        const int iv1 = std::min(iv + 1, rho.x.n - 1);
        return (1 - fu) * (1 - fv) * rho.values(iu, iv) + fu * (1 - fv) * rho.values(iu1, iv) +
               (1 - fu) * fv * rho.values(iu, iv1) + fu * fv * rho.values(iu1, iv1);
    };

    PhaseSpaceGrid out = PhaseSpaceGrid::zeros(x_axis, p_axis);
    double worst_imag = 0.0;
    std::vector<double> imag_by_row(x_axis.n, 0.0);
    parallel_for(static_cast<std::size_t>(x_axis.n), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double x = x_axis.at(i);
        std::vector<cplx> line;
        std::vector<double> ys;
        for (int k = -half_span; k <= half_span; ++k) {
            const double y = k * dy;
            const cplx v = sample(x - y / 2.0, x + y / 2.0);
            if (v != 0.0) {
                line.push_back(v);
                ys.push_back(y);
            }
        }
        double worst = 0.0;
        for (int j = 0; j < p_axis.n; ++j) {
            const double p = p_axis.at(j);
            cplx acc = 0.0;
            for (std::size_t m = 0; m < line.size(); ++m) {
                acc += std::polar(1.0, p * ys[m]) * line[m];
            }
            acc *= dy / (2.0 * std::numbers::pi);
            out.values(i, j) = acc.real();
            worst = std::max(worst, std::abs(acc.imag()));
        }
        imag_by_row[ii] = worst;
    });
    for (double w : imag_by_row) {
        worst_imag = std::max(worst_imag, w);
    }
    if (worst_imag > 1e-8 * scale) {
        fail(ErrorCode::NonHermitianInput, "Wigner function has imaginary residue " + std::to_string(worst_imag));
    }
    return out;
}

/// Wigner function on the density's own x nodes.
inline PhaseSpaceGrid wigner_from_density(const PositionDensityMatrix& rho, const Axis& p_axis) {
    return wigner_from_density(rho, rho.x, p_axis);
}

/// Filtered back-projection of quadrature distributions; the result may be
/// negative and is returned as is.
inline PhaseSpaceGrid reconstruct_wigner(const Sinogram& quads, const Axis& x_axis, const Axis& p_axis,
                                         RampWindow window = RampWindow::None) {
    validate_quadratures(quads, false);
    return inverse_radon(quads, x_axis, p_axis, window);
}

/// 2 pi * integral W^2; equals Tr rho^2.
inline double purity(const PhaseSpaceGrid& w) {
    return 2.0 * std::numbers::pi * w.values.squaredNorm() * w.cell_area();
}

struct ContinuousReconstruction {
    PositionDensityMatrix rho;
    double raw_trace = 0.0; // trace before renormalization
};

/// <u|rho|v> = integral dp e^{-ip(v-u)} W((u+v)/2, p). W is reconstructed on
/// the half-step centre axis of x_axis and on a p axis spanning the
/// quadrature s range; the result is Hermitian and renormalized to unit trace.
inline ContinuousReconstruction reconstruct_density_continuous(const Sinogram& quads, const Axis& x_axis,
                                                               RampWindow window = RampWindow::None) {
    validate_axis(x_axis, "x");
    const Axis centres{2 * x_axis.n - 1, x_axis.lo, x_axis.hi};
    const Axis p_axis{quads.s.n, -quads.s.extent(), quads.s.extent()};
    const PhaseSpaceGrid w = reconstruct_wigner(quads, centres, p_axis, window);

    const int n = x_axis.n;
    const double dx = x_axis.step();
    const double dp = p_axis.step();
    ComplexMatrix phases(2 * n - 1, p_axis.n);
    for (int m = -(n - 1); m <= n - 1; ++m) {
        for (int k = 0; k < p_axis.n; ++k) {
            phases(m + n - 1, k) = std::polar(dp, -p_axis.at(k) * m * dx);
        }
    }
    ComplexMatrix values(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j < n; ++j) {
            values(i, j) = phases.row(j - i + n - 1).cwiseProduct(w.values.row(i + j).cast<cplx>()).sum();
        }
    });
    values = (0.5 * (values + values.adjoint())).eval();
    ContinuousReconstruction out{{x_axis, values}, 0.0};
    out.raw_trace = out.rho.trace();
    if (out.raw_trace != 0.0) {
        out.rho.values /= out.raw_trace;
    }
    return out;
}

/// <x';theta'|x;theta> by direct quadrature over the intermediate position y,
/// integral dy conj(<y|x';theta'>) <y|x;theta>. The integrand is a pure chirp,
/// so a Gaussian taper exp(-eps y^2) is applied with eps small enough that
/// the modulus is biased by less than ~1e-3.
inline cplx continuous_mub_overlap(double x_prime, double theta_prime, double x, double theta) {
    const double s1 = std::sin(theta_prime), c1 = std::cos(theta_prime);
    const double s2 = std::sin(theta), c2 = std::cos(theta);
    if (std::abs(s1) <= kDegenerateSin || std::abs(s2) <= kDegenerateSin) {
        fail(ErrorCode::DegenerateAngle, "overlap needs sin(theta) != 0 for both bases");
    }
    // Integrand phase: alpha y^2 + beta y + const.
    const double alpha = c1 / (2.0 * s1) - c2 / (2.0 * s2);
    const double beta = x / s2 - x_prime / s1;
    if (std::abs(alpha) < 1e-9) {
        fail(ErrorCode::DegenerateAngle, "bases coincide: overlap is a delta function");
    }
    const double eps = std::min(0.02 * std::abs(alpha), 4e-3 * alpha * alpha / std::max(beta * beta, 1.0));
    const double centre = -beta / (2.0 * alpha);
    const double half_len = std::sqrt(30.0 / eps) + std::abs(centre);
    const double max_freq = 2.0 * std::abs(alpha) * half_len + std::abs(beta);
    const double dy = 0.5 * std::numbers::pi / max_freq;
    const auto steps = static_cast<long>(std::ceil(half_len / dy));
    const QuadratureKernelParams k1{theta_prime}, k2{theta};
    cplx acc = 0.0;
    for (long i = -steps; i <= steps; ++i) {
        const double y = i * dy;
        acc += std::conj(quadrature_kernel(y, x_prime, k1)) * quadrature_kernel(y, x, k2) *
               std::exp(-eps * y * y);
    }
    return acc * dy;
}

} // namespace mubtomo

#endif
