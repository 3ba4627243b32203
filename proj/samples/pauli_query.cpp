// Two states with the same position and momentum distributions.
//
// psi(x) = pi^{-1/4} exp(-(1 - i k) x^2 / 2) and its conjugate have equal
// |psi(x)| and, since conj flips p -> -p and |psi~(p)| is even here, equal
// momentum densities. A rotated quadrature at pi/4 separates them.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mubtomo/mubtomo.hpp"

using namespace mubtomo;

namespace {

ComplexVector chirped(const Axis& x, double kappa) {
    ComplexVector psi(x.n);
    for (int i = 0; i < x.n; ++i) {
        const double t = x.at(i);
        psi(i) = std::pow(std::numbers::pi, -0.25) * std::exp(cplx(-0.5 * t * t, 0.5 * kappa * t * t));
    }
    return psi;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace

int main() {
    const Axis x{256, -8.0, 8.0};
    const double kappa = 1.0;
    const ComplexVector psi = chirped(x, kappa);
    const auto a = density_from_wavefunction(x, psi);
    const auto b = density_from_wavefunction(x, psi.conjugate());

    std::printf("state distance ||rho_a - rho_b||_F dx = %.4f\n", (a.values - b.values).norm() * x.step());
    bool ok = true;
    for (double theta : {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0, 3.0 * std::numbers::pi / 4.0}) {
        const double gap = max_gap(quadrature_distribution(a, theta, x), quadrature_distribution(b, theta, x));
        std::printf("theta = %.4f  max |P_a - P_b| = %.3e\n", theta, gap);
        const bool marginal = theta == 0.0 || std::abs(theta - std::numbers::pi / 2.0) < 1e-12;
        ok = ok && (marginal ? gap < 1e-10 : gap > 1e-2);
    }
    std::printf("%s\n", ok ? "position and momentum agree, pi/4 differs" : "unexpected result");
    return ok ? 0 : 1;
}
