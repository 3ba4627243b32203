#ifndef MUBTOMO_CLASSICAL_RADON_HPP
#define MUBTOMO_CLASSICAL_RADON_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubtomo/error.hpp"
#include "mubtomo/parallel.hpp"
#include "mubtomo/phase_space.hpp"

namespace mubtomo {

namespace detail {

// Projection of one bilinear hat cell onto the s axis. The hat in x projects
// to a triangle of half-width dx|cos|, the hat in p to one of half-width
// dp|sin|; their convolution is the density of a sum of four uniforms with
// widths (a, a, b, b). The cumulative distribution of such a sum is
//   F(t) = 1/(n! prod w) * sum_subsets (-1)^|S| (t - sum_S w)_+^n
// with t measured from the left end of the support.
class HatFootprint {
public:
    HatFootprint(double a, double b, double ds) {
        std::array<double, 4> all{a, a, b, b};
        std::vector<double> widths;
        for (double w : all) {
            if (w > 1e-4 * ds) {
                widths.push_back(w);
            }
        }
        order_ = static_cast<int>(widths.size());
        width_ = 0.0;
        double prod = 1.0;
        double factorial = 1.0;
        for (int i = 0; i < order_; ++i) {
            width_ += widths[i];
            prod *= widths[i];
            factorial *= i + 1;
        }
        norm_ = order_ > 0 ? 1.0 / (factorial * prod) : 1.0;

        for (unsigned mask = 0; mask < (1u << order_); ++mask) {
            double offset = 0.0;
            int sign = 1;
            for (int i = 0; i < order_; ++i) {
                if (mask & (1u << i)) {
                    offset += widths[i];
                    sign = -sign;
                }
            }
            terms_.push_back({offset, static_cast<double>(sign)});
        }
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& l, const Term& r) { return l.offset < r.offset; });
    }

    double width() const { return width_; }

    /// Fraction of the footprint mass left of t (t from the support's left end).
    double cdf(double t) const {
        if (t <= 0.0) {
            return 0.0;
        }
        if (t >= width_) {
            return 1.0;
        }
        double acc = 0.0;
        for (const Term& term : terms_) {
            const double u = t - term.offset;
            if (u <= 0.0) {
                break;
            }
            double pw = 1.0;
            for (int i = 0; i < order_; ++i) {
                pw *= u;
            }
            acc += term.sign * pw;
        }
        return std::clamp(acc * norm_, 0.0, 1.0);
    }

private:
    struct Term {
        double offset;
        double sign;
    };

    int order_ = 0;
    double width_ = 0.0;
    double norm_ = 1.0;
    std::vector<Term> terms_;
};

inline std::vector<double> row_copy(const Eigen::MatrixXd& m, Eigen::Index row) {
    std::vector<double> out(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out[j] = m(row, j);
    }
    return out;
}

} // namespace detail

/// Smallest radius enclosing every grid node; the default symmetric s range.
inline double enclosing_radius(const PhaseSpaceGrid& grid) {
    double r = 0.0;
    for (double x : {grid.x.lo, grid.x.hi}) {
        for (double p : {grid.p.lo, grid.p.hi}) {
            r = std::max(r, std::hypot(x, p));
        }
    }
    return r;
}

/// Line integrals of the bilinear interpolant of `grid` along x C + p S = s.
/// Each node deposits its projected footprint into s bins by exact bin
/// integrals, so every row carries the full grid mass (outermost bins are
/// open-ended). The s axis is symmetric, [-s_max, s_max], with s_max
/// defaulting to enclosing_radius(grid). Any finite angle is accepted.
inline Sinogram radon_forward(const PhaseSpaceGrid& grid, const std::vector<double>& thetas, int n_s,
                              std::optional<double> s_max = std::nullopt) {
    if (grid.x.n < 2 || grid.p.n < 2 || grid.values.rows() != grid.x.n ||
        grid.values.cols() != grid.p.n) {
        fail(ErrorCode::EmptyGrid, "radon_forward needs a grid with at least 2x2 nodes");
    }
    if (n_s < 2) {
        fail(ErrorCode::InvalidInput, "radon_forward needs n_s >= 2");
    }
    for (double t : thetas) {
        if (!std::isfinite(t)) {
            fail(ErrorCode::InvalidInput, "non-finite projection angle");
        }
    }
    const double radius = s_max.value_or(enclosing_radius(grid));
    Sinogram sino{thetas, Axis{n_s, -radius, radius},
                  Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(thetas.size()), n_s)};
    const double ds = sino.s.step();
    const double dx = grid.x.step();
    const double dp = grid.p.step();
    const double node_mass = dx * dp;

    std::vector<std::vector<double>> rows(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t k) {
        const double c = std::cos(thetas[k]);
        const double s = std::sin(thetas[k]);
        const detail::HatFootprint fp(dx * std::abs(c), dp * std::abs(s), ds);
        const double half = 0.5 * fp.width();
        std::vector<double> row(n_s, 0.0);
        for (int i = 0; i < grid.x.n; ++i) {
            const double xc = grid.x.at(i) * c;
            for (int j = 0; j < grid.p.n; ++j) {
                const double v = grid.values(i, j);
                if (v == 0.0) {
                    continue;
                }
                const double mass = v * node_mass;
                const double left = xc + grid.p.at(j) * s - half;
                // Interior edge e_m = s.lo + (m - 1/2) ds separates bins m-1 and m.
                const double pos_lo = (left - sino.s.lo) / ds + 0.5;
                const double pos_hi = (left + fp.width() - sino.s.lo) / ds + 0.5;
                const int first = std::max(1, static_cast<int>(std::ceil(pos_lo)));
                const int last = std::min(n_s - 1, static_cast<int>(std::floor(pos_hi)));
                if (first > last) {
                    row[std::clamp(last, 0, n_s - 1)] += mass;
                    continue;
                }
                double prev = 0.0;
                for (int m = first; m <= last; ++m) {
                    const double edge = sino.s.lo + (m - 0.5) * ds;
                    const double cur = fp.cdf(edge - left);
                    row[m - 1] += mass * (cur - prev);
                    prev = cur;
                }
                row[last] += mass * (1.0 - prev);
            }
        }
        for (double& r : row) {
            r /= ds;
        }
        rows[k] = std::move(row);
    });
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        for (int j = 0; j < n_s; ++j) {
            sino.values(static_cast<Eigen::Index>(k), j) = rows[k][j];
        }
    }
    return sino;
}

struct FourierSlice {
    std::vector<double> r;
    std::vector<std::complex<double>> values;
};

/// F(r) = integral ds e^{i r s} P(s, theta) sampled at the DFT frequencies
/// r_k = (k - n/2) 2pi / (n ds). F(0) is the row mass.
inline FourierSlice fourier_slice(const Sinogram& sino, int theta_index) {
    if (theta_index < 0 || theta_index >= sino.n_theta()) {
        fail(ErrorCode::IndexOutOfRange, "fourier_slice: angle index out of range");
    }
    const int n = sino.s.n;
    const double ds = sino.s.step();
    const double dr = 2.0 * std::numbers::pi / (n * ds);
    FourierSlice out;
    out.r.resize(n);
    out.values.resize(n);
    for (int k = 0; k < n; ++k) {
        const double r = (k - n / 2) * dr;
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += sino.values(theta_index, j) * std::polar(1.0, r * sino.s.at(j));
        }
        out.r[k] = r;
        out.values[k] = acc * ds;
    }
    return out;
}

enum class RampWindow { None, Hann, SheppLogan };

/// Discrete ramp filter taps h[m], m = -(n-1)..n-1, stored at index m + n - 1.
/// Unwindowed taps are the band-limited ramp: h[0] = 1/(4 ds^2),
/// h[odd m] = -1/(pi^2 m^2 ds^2), h[even m] = 0.
inline std::vector<double> ramp_filter_taps(int n, double ds, RampWindow window = RampWindow::None) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    std::vector<double> h(2 * n - 1, 0.0);
    for (int m = -(n - 1); m <= n - 1; ++m) {
        double v = 0.0;
        if (m == 0) {
            v = 1.0 / (4.0 * ds * ds);
        } else if (m % 2 != 0) {
            v = -1.0 / (pi2 * m * m * ds * ds);
        }
        h[m + n - 1] = v;
    }
    if (window == RampWindow::None) {
        return h;
    }
    // Apodize in frequency: real symmetric taps give a real cosine spectrum.
    const int len = 2 * n;
    std::vector<double> spectrum(len);
    for (int k = 0; k < len; ++k) {
        double acc = h[n - 1];
        for (int m = 1; m <= n - 1; ++m) {
            acc += 2.0 * h[m + n - 1] * std::cos(2.0 * std::numbers::pi * k * m / len);
        }
        const double f = static_cast<double>(std::min(k, len - k)) / len;
        double w = 1.0;
        if (window == RampWindow::Hann) {
            w = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * f));
        } else if (f > 0.0) {
            w = std::sin(std::numbers::pi * f) / (std::numbers::pi * f);
        }
        spectrum[k] = acc * w;
    }
    for (int m = -(n - 1); m <= n - 1; ++m) {
        double acc = 0.0;
        for (int k = 0; k < len; ++k) {
            acc += spectrum[k] * std::cos(2.0 * std::numbers::pi * k * m / len);
        }
        h[m + n - 1] = acc / len;
    }
    return h;
}

/// Filtered back-projection onto the given axes. Angles are taken to cover
/// [0, pi) uniformly, each weighted pi / n_theta.
inline PhaseSpaceGrid inverse_radon(const Sinogram& sino, const Axis& x_axis, const Axis& p_axis,
                                    RampWindow window = RampWindow::None) {
    if (sino.n_theta() < 2) {
        fail(ErrorCode::InsufficientAngles, "inverse_radon needs at least 2 angles");
    }
    if (sino.s.n < 2 || sino.values.rows() != sino.n_theta() || sino.values.cols() != sino.s.n) {
        fail(ErrorCode::InvalidInput, "sinogram shape does not match its axes");
    }
    validate_axis(x_axis, "x");
    validate_axis(p_axis, "p");
    const int n = sino.s.n;
    const double ds = sino.s.step();
    // The filtered projection has ramp tails beyond the data support; evaluate
    // it on an s axis wide enough to reach every output node.
    const double reach = std::hypot(x_axis.extent(), p_axis.extent());
    const int pad_lo = std::max(0, static_cast<int>(std::ceil((sino.s.lo + reach) / ds)));
    const int pad_hi = std::max(0, static_cast<int>(std::ceil((reach - sino.s.hi) / ds)));
    const int m = n + pad_lo + pad_hi;
    const Axis ext{m, sino.s.lo - pad_lo * ds, sino.s.hi + pad_hi * ds};
    const std::vector<double> taps = ramp_filter_taps(m, ds, window);

    std::vector<std::vector<double>> filtered(sino.thetas.size());
    parallel_for(sino.thetas.size(), [&](std::size_t k) {
        const std::vector<double> row = detail::row_copy(sino.values, static_cast<Eigen::Index>(k));
        std::vector<double> q(m, 0.0);
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int jj = 0; jj < n; ++jj) {
                acc += taps[j - (jj + pad_lo) + m - 1] * row[jj];
            }
            q[j] = acc * ds;
        }
        filtered[k] = std::move(q);
    });

    std::vector<double> cs(sino.thetas.size()), sn(sino.thetas.size());
    for (std::size_t k = 0; k < sino.thetas.size(); ++k) {
        cs[k] = std::cos(sino.thetas[k]);
        sn[k] = std::sin(sino.thetas[k]);
    }
    const double weight = std::numbers::pi / sino.n_theta();
    PhaseSpaceGrid out = PhaseSpaceGrid::zeros(x_axis, p_axis);
    parallel_for(static_cast<std::size_t>(x_axis.n), [&](std::size_t i) {
        const double x = x_axis.at(static_cast<int>(i));
        for (int j = 0; j < p_axis.n; ++j) {
            const double p = p_axis.at(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < filtered.size(); ++k) {
                acc += interpolate_linear(ext, filtered[k].data(), x * cs[k] + p * sn[k]);
            }
            out.values(static_cast<Eigen::Index>(i), j) = acc * weight;
        }
    });
    return out;
}

/// nx x np grid over [-R/sqrt2, R/sqrt2]^2, R the largest |s| of the sinogram.
/// This inverts radon_forward's default s range for square centred grids.
inline PhaseSpaceGrid inverse_radon(const Sinogram& sino, int nx, int np,
                                    RampWindow window = RampWindow::None) {
    const double half = sino.s.extent() / std::numbers::sqrt2;
    return inverse_radon(sino, Axis{nx, -half, half}, Axis{np, -half, half}, window);
}

} // namespace mubtomo

#endif
