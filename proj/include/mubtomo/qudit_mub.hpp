#ifndef MUBTOMO_QUDIT_MUB_HPP
#define MUBTOMO_QUDIT_MUB_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubtomo/error.hpp"
#include "mubtomo/finite_field.hpp"

namespace mubtomo {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Normalized state vector in the computational basis.
using Ket = ComplexVector;
/// Square unitary; column j is the j-th ket of the basis it represents.
using UnitaryMatrix = ComplexMatrix;

/// d+1 mutually unbiased bases. bases[0] is the computational basis,
/// bases[1 + b] is the eigenbasis of X Z^b.
struct MubBasisSet {
    int dim = 0;
    std::vector<UnitaryMatrix> bases;
};

/// omega^k with omega = exp(2 pi i / d). The exponent is reduced exactly
/// before the single complex exponential.
inline cplx omega_power(PrimeModulus d, std::int64_t k) {
    const double angle = 2.0 * std::numbers::pi * d.reduce(k) / d.value();
    return {std::cos(angle), std::sin(angle)};
}

/// Z = diag(1, omega, ..., omega^{d-1}).
inline UnitaryMatrix clock_operator(PrimeModulus d) {
    const int n = d.value();
    UnitaryMatrix z = UnitaryMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        z(k, k) = omega_power(d, k);
    }
    return z;
}

/// X |n> = |n+1 mod d>.
inline UnitaryMatrix shift_operator(PrimeModulus d) {
    const int n = d.value();
    UnitaryMatrix x = UnitaryMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        x((k + 1) % n, k) = 1.0;
    }
    return x;
}

/// X^m Z^l built entrywise: X^m Z^l |n> = omega^{l n} |n + m>.
inline UnitaryMatrix weyl_operator(PrimeModulus d, int m, int l) {
    const int n = d.value();
    UnitaryMatrix w = UnitaryMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        w(d.reduce(k + m), k) = omega_power(d, static_cast<std::int64_t>(l) * k);
    }
    return w;
}

/// |b;c> with amplitude d^{-1/2} omega^{b n(n-1)/2 - c n}; amplitude at
/// n = 0 is real positive.
inline Ket mub_vector(PrimeModulus d, int b, int c) {
    const int n = d.value();
    if (b < 0 || b >= n || c < 0 || c >= n) {
        fail(ErrorCode::IndexOutOfRange,
             "mub_vector: (b, c) = (" + std::to_string(b) + ", " + std::to_string(c) +
                 ") outside [0, " + std::to_string(n) + ")");
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    Ket v(n);
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t exponent = b * (k * (k - 1) / 2) - c * k;
        v(k) = norm * omega_power(d, exponent);
    }
    return v;
}

inline MubBasisSet build_mub_set(PrimeModulus d) {
    const int n = d.value();
    MubBasisSet set;
    set.dim = n;
    set.bases.reserve(n + 1);
    set.bases.push_back(UnitaryMatrix::Identity(n, n));
    for (int b = 0; b < n; ++b) {
        UnitaryMatrix u(n, n);
        for (int c = 0; c < n; ++c) {
            u.col(c) = mub_vector(d, b, c);
        }
        set.bases.push_back(std::move(u));
    }
    return set;
}

/// max over all cross-basis pairs of | |<u|v>| - 1/sqrt(d) |.
inline double mub_deviation(const MubBasisSet& set) {
    const double target = 1.0 / std::sqrt(static_cast<double>(set.dim));
    double worst = 0.0;
    for (std::size_t i = 0; i < set.bases.size(); ++i) {
        for (std::size_t j = i + 1; j < set.bases.size(); ++j) {
            const ComplexMatrix overlaps = set.bases[i].adjoint() * set.bases[j];
            worst = std::max(worst, (overlaps.cwiseAbs().array() - target).abs().maxCoeff());
        }
    }
    return worst;
}

/// max |U^dagger U - I| entrywise.
inline double unitarity_defect(const ComplexMatrix& u) {
    const auto n = u.cols();
    return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

} // namespace mubtomo

#endif
