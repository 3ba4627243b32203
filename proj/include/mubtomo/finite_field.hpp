#ifndef MUBTOMO_FINITE_FIELD_HPP
#define MUBTOMO_FINITE_FIELD_HPP

#include <cstdint>
#include <string>

#include "mubtomo/error.hpp"

namespace mubtomo {

/// Validated odd prime dimension d. Only constructible through
/// assert_odd_prime().
class PrimeModulus {
public:
    int value() const noexcept { return d_; }

    /// Least nonnegative residue of a modulo d.
    int reduce(std::int64_t a) const noexcept {
        const std::int64_t r = a % d_;
        return static_cast<int>(r < 0 ? r + d_ : r);
    }

    friend bool operator==(PrimeModulus, PrimeModulus) = default;

private:
    explicit PrimeModulus(int d) : d_(d) {}
    friend PrimeModulus assert_odd_prime(int d);

    int d_;
};

/// Exponent pair of the Weyl operator X^m Z^l.
struct WeylIndex {
    int m = 0; // shift power
    int l = 0; // clock power
};

/// X^m Z^l == omega^nu (X Z^b)^m with m != 0.
struct WeylDecomposition {
    int b = 0;
    int m = 1;
    int nu = 0;

    friend bool operator==(const WeylDecomposition&, const WeylDecomposition&) = default;
};

inline bool is_prime(int n) {
    if (n < 2) {
        return false;
    }
    for (int k = 2; static_cast<long>(k) * k <= n; ++k) {
        if (n % k == 0) {
            return false;
        }
    }
    return true;
}

inline PrimeModulus assert_odd_prime(int d) {
    if (d == 2) {
        fail(ErrorCode::EvenDimension, "d=2: construction requires an odd prime");
    }
    if (!is_prime(d)) {
        fail(ErrorCode::NotPrime, "d=" + std::to_string(d) + " is not prime");
    }
    return PrimeModulus(d);
}

/// Multiplicative inverse in Z_d via the extended Euclidean algorithm.
inline int mod_inverse(std::int64_t a, PrimeModulus d) {
    const int n = d.value();
    const int r = d.reduce(a);
    if (r == 0) {
        fail(ErrorCode::ZeroDivisor,
             std::to_string(a) + " has no inverse modulo " + std::to_string(n));
    }
    std::int64_t old_r = r, cur_r = n;
    std::int64_t old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        const std::int64_t q = old_r / cur_r;
        std::int64_t t = old_r - q * cur_r;
        old_r = cur_r;
        cur_r = t;
        t = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = t;
    }
    return d.reduce(old_s);
}

/// Regroups X^m Z^l (m != 0) as omega^nu (X Z^b)^m with b = l/m and
/// nu = -b m(m-1)/2. m(m-1) is even, so the half is taken in plain integers
/// before reducing.
inline WeylDecomposition weyl_decompose(WeylIndex idx, PrimeModulus d) {
    const int m = d.reduce(idx.m);
    if (m == 0) {
        fail(ErrorCode::ZeroDivisor, "weyl_decompose requires m != 0 (mod d)");
    }
    const int l = d.reduce(idx.l);
    const int b = d.reduce(static_cast<std::int64_t>(l) * mod_inverse(m, d));
    const std::int64_t half = static_cast<std::int64_t>(m) * (m - 1) / 2;
    const int nu = d.reduce(-static_cast<std::int64_t>(b) * d.reduce(half));
    return {b, m, nu};
}

} // namespace mubtomo

#endif
