#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "support/states.hpp"

using namespace mubtomo;
namespace mt = mubtomo::testing;

namespace {

const Axis kX256{256, -8.0, 8.0};
const Axis kX257{257, -8.0, 8.0};

PositionDensityMatrix ground() { return density_from_wavefunction(kX256, mt::ground_state(kX256)); }

PositionDensityMatrix excited(const Axis& x = kX256) {
    return density_from_wavefunction(x, mt::first_excited_state(x));
}

template <typename F>
double grid_sup_error(const PhaseSpaceGrid& g, F&& f) {
    double worst = 0.0;
    for (int i = 0; i < g.x.n; ++i) {
        for (int j = 0; j < g.p.n; ++j) {
            worst = std::max(worst, std::abs(g.values(i, j) - f(g.x.at(i), g.p.at(j))));
        }
    }
    return worst;
}

} // namespace

TEST(WignerFromDensity, GroundStateMatchesAnalytic) {
    const auto w = wigner_from_density(ground(), kX256);
    EXPECT_LE(grid_sup_error(w, mt::ground_wigner), 1e-4);
    EXPECT_NEAR(w.integral(), 1.0, 1e-4);
}

TEST(WignerFromDensity, FirstExcitedIsNegativeAtOrigin) {
    const auto w = wigner_from_density(excited(kX257), kX257);
    EXPECT_NEAR(w.values(128, 128), -1.0 / std::numbers::pi, 1e-3);
    EXPECT_NEAR(w.integral(), 1.0, 1e-4);
    EXPECT_LE(grid_sup_error(w, mt::first_excited_wigner), 1e-4);
}

TEST(WignerFromDensity, OffNodeEvaluationInterpolates) {
    const Axis target{81, -4.0, 4.0};
    const auto w = wigner_from_density(ground(), target, target);
    EXPECT_LE(grid_sup_error(w, mt::ground_wigner), 2e-3);
}

TEST(WignerFromDensity, MixedStateNormalization) {
    PositionDensityMatrix mix = ground();
    mix.values = 0.3 * mix.values + 0.7 * excited().values;
    const auto w = wigner_from_density(mix, kX256);
    EXPECT_NEAR(w.integral(), 1.0, 1e-4);
    EXPECT_NEAR(purity(w), 0.3 * 0.3 + 0.7 * 0.7, 1e-3);
}

TEST(WignerFromDensity, Errors) {
    PositionDensityMatrix bad = ground();
    bad.values(3, 5) += cplx(0.0, 0.1);
    try {
        wigner_from_density(bad, kX256);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHermitianInput);
    }
    try {
        wigner_from_density(ground(), Axis{64, -40.0, 40.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AliasedGrid);
    }
}

TEST(WignerFromDensity, PurityOfPureStates) {
    for (const auto& rho : {ground(), excited()}) {
        const auto w = wigner_from_density(rho, kX256);
        EXPECT_NEAR(purity(w), 1.0, 1e-3);
    }
}

TEST(QuadratureKernel, ModulusAndSymmetry) {
    for (double theta : {0.2, 0.9, 1.5, 2.4, 3.0}) {
        const QuadratureKernelParams k{theta};
        const double modulus = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::abs(std::sin(theta)));
        for (double x : {-2.0, 0.0, 0.7}) {
            for (double xp : {-1.3, 0.4, 3.1}) {
                EXPECT_NEAR(std::abs(quadrature_kernel(xp, x, k)), modulus, 1e-14);
                EXPECT_LE(std::abs(quadrature_kernel(xp, x, k) - quadrature_kernel(x, xp, k)), 1e-14);
            }
        }
    }
}

TEST(QuadratureKernel, QuarterTurnIsFourierKernel) {
    const QuadratureKernelParams k{std::numbers::pi / 2.0};
    for (double x : {-2.0, 0.5, 1.7}) {
        for (double xp : {-0.3, 1.1}) {
            const cplx expected = std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi), x * xp);
            EXPECT_LE(std::abs(quadrature_kernel(xp, x, k) - expected), 1e-14);
        }
    }
}

TEST(QuadratureKernel, DegenerateAngle) {
    for (double theta : {0.0, std::numbers::pi}) {
        try {
            quadrature_kernel(0.1, 0.2, QuadratureKernelParams{theta});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::DegenerateAngle);
        }
    }
}

TEST(QuadratureKernel, EigenfunctionOfRotatedQuadrature) {
    // (C x' - i S d/dx') <x'|x;theta> = x <x'|x;theta>, checked by central differences.
    const double theta = 0.8, x = 0.6, h = 1e-5;
    const QuadratureKernelParams k{theta};
    for (double xp : {-1.0, 0.3, 2.0}) {
        const cplx deriv = (quadrature_kernel(xp + h, x, k) - quadrature_kernel(xp - h, x, k)) / (2.0 * h);
        const cplx lhs = std::cos(theta) * xp * quadrature_kernel(xp, x, k) - cplx(0.0, std::sin(theta)) * deriv;
        EXPECT_LE(std::abs(lhs - x * quadrature_kernel(xp, x, k)), 1e-6);
    }
}

TEST(QuadratureKernel, ApproachesIdentityForSmallAngles) {
    // Fresnel limit: K -> e^{-i pi/4} delta as theta -> 0+, so compare up to
    // the best global phase.
    const Axis x{1024, -4.0, 4.0};
    ComplexVector v(x.n);
    for (int i = 0; i < x.n; ++i) {
        v(i) = std::exp(-x.at(i) * x.at(i));
    }
    double previous = 1e9;
    for (double theta : {0.1, 0.05, 0.025}) {
        ASSERT_LE(x.step(), max_kernel_spacing(x, theta));
        const ComplexVector kv = quadrature_kernel_matrix(x, x, theta) * v * x.step();
        const double err = std::sqrt(std::max(0.0, kv.squaredNorm() + v.squaredNorm() - 2.0 * std::abs(v.dot(kv)))) / v.norm();
        EXPECT_LT(err, previous) << "theta " << theta;
        previous = err;
    }
    EXPECT_LT(previous, 0.05);
}

TEST(ContinuousMub, OverlapModulus) {
    for (double delta : {0.3, 0.7, 1.2, std::numbers::pi / 2.0}) {
        const double theta_prime = 0.4;
        const double expected = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::abs(std::sin(delta)));
        for (auto [xp, x] : {std::pair{0.0, 0.0}, std::pair{1.0, -0.5}, std::pair{-1.5, 2.0}}) {
            const cplx o = continuous_mub_overlap(xp, theta_prime, x, theta_prime + delta);
            EXPECT_NEAR(std::abs(o), expected, 0.01 * expected) << "delta " << delta;
        }
    }
    EXPECT_THROW(continuous_mub_overlap(0.0, 0.4, 0.0, 0.4), Error);
}

TEST(Quadratures, GroundStateIsRotationInvariant) {
    const auto rho = ground();
    const double peak = 1.0 / std::sqrt(std::numbers::pi);
    for (double theta : {0.0, 0.1, 0.7, std::numbers::pi / 2.0, 2.2, 3.0}) {
        const auto row = quadrature_distribution(rho, theta, kX256);
        double worst = 0.0, mass = 0.0;
        for (int j = 0; j < kX256.n; ++j) {
            const double s = kX256.at(j);
            worst = std::max(worst, std::abs(row[j] - std::exp(-s * s) / std::sqrt(std::numbers::pi)));
            mass += row[j] * kX256.step();
        }
        EXPECT_LE(worst, 0.01 * peak) << "theta " << theta;
        EXPECT_NEAR(mass, 1.0, 1e-4) << "theta " << theta;
    }
}

TEST(Quadratures, RowsIntegrateToOne) {
    PositionDensityMatrix mix = ground();
    const auto chirp = density_from_wavefunction(kX256, mt::chirped_gaussian(kX256, 0.8));
    mix.values = 0.5 * mix.values + 0.2 * excited().values + 0.3 * chirp.values;
    const auto quads = quadratures(mix, uniform_angles(24), kX256);
    EXPECT_NO_THROW(validate_quadratures(quads));
    for (int k = 0; k < quads.n_theta(); ++k) {
        EXPECT_NEAR(quads.row_integral(k), 1.0, 1e-4);
    }
}

TEST(Quadratures, ComposedAngleMatchesDirectKernel) {
    // theta = 0.6 is routed through the pi/2 kernel; a fine grid lets the
    // direct kernel be applied too.
    const Axis x{512, -8.0, 8.0};
    const auto rho = density_from_wavefunction(x, mt::chirped_gaussian(x, 0.8));
    const double theta = 0.6;
    const auto composed = quadrature_distribution(rho, theta, x);
    ASSERT_LE(x.step(), max_kernel_spacing(x, theta));
    const ComplexMatrix a = quadrature_kernel_matrix(x, x, theta).conjugate() * x.step();
    const ComplexMatrix direct = a * rho.values * a.adjoint();
    double worst = 0.0, peak = 0.0;
    for (int j = 0; j < x.n; ++j) {
        worst = std::max(worst, std::abs(composed[j] - direct(j, j).real()));
        peak = std::max(peak, direct(j, j).real());
    }
    EXPECT_LE(worst, 1e-6 * peak);
}

TEST(Quadratures, AgreesWithRadonOfWigner) {
    const auto chirp = density_from_wavefunction(kX256, mt::chirped_gaussian(kX256, 0.8));
    const auto w = wigner_from_density(chirp, kX256);
    const std::vector<double> thetas{0.0, 0.5, 1.0, 1.6, 2.5};
    const auto via_wigner = radon_forward(w, thetas, 256, 8.0);
    const auto direct = quadratures(chirp, thetas, via_wigner.s);
    for (int k = 0; k < 5; ++k) {
        EXPECT_LE((direct.values.row(k) - via_wigner.values.row(k)).norm() / direct.values.row(k).norm(), 0.02)
            << "theta " << thetas[k];
    }
}

TEST(Quadratures, AliasedGrid) {
    const Axis coarse{24, -8.0, 8.0};
    const auto rho = density_from_wavefunction(coarse, mt::ground_state(coarse));
    try {
        quadratures(rho, {1.0}, coarse);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AliasedGrid);
    }
}

TEST(ReconstructWigner, GroundStateRoute) {
    const auto rho = ground();
    const auto quads = quadratures(rho, uniform_angles(180), kX256);
    const auto rec = reconstruct_wigner(quads, kX256, kX256);
    const auto direct = wigner_from_density(rho, kX256);
    EXPECT_LE(relative_l2(rec.values, direct.values), 0.02);
}

TEST(ReconstructWigner, ExcitedStateKeepsNegativity) {
    const auto rho = excited(kX257);
    const auto quads = quadratures(rho, uniform_angles(180), kX257);
    const auto rec = reconstruct_wigner(quads, kX257, kX257);
    EXPECT_LE(rec.values(128, 128), -0.25);
    const auto direct = wigner_from_density(rho, kX257);
    EXPECT_LE(relative_l2(rec.values, direct.values), 0.02);
}

TEST(ReconstructWigner, ZeroInput) {
    Sinogram zero{uniform_angles(8), kX256, Eigen::MatrixXd::Zero(8, 256)};
    EXPECT_EQ(reconstruct_wigner(zero, kX256, kX256).values.cwiseAbs().maxCoeff(), 0.0);
    Sinogram single{{0.0}, kX256, Eigen::MatrixXd::Zero(1, 256)};
    EXPECT_THROW(reconstruct_wigner(single, kX256, kX256), Error);
}

TEST(ReconstructDensity, GroundStateDiagonal) {
    const auto quads = quadratures(ground(), uniform_angles(180), kX256);
    const auto rec = reconstruct_density_continuous(quads, kX256);
    EXPECT_GE(rec.raw_trace, 0.97);
    EXPECT_LE(rec.raw_trace, 1.03);
    const double peak = 1.0 / std::sqrt(std::numbers::pi);
    double worst = 0.0;
    for (int i = 0; i < kX256.n; ++i) {
        const double x = kX256.at(i);
        worst = std::max(worst, std::abs(rec.rho.values(i, i).real() - std::exp(-x * x) / std::sqrt(std::numbers::pi)));
    }
    EXPECT_LE(worst, 0.03 * peak);
    EXPECT_LE((rec.rho.values - rec.rho.values.adjoint()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(rec.rho.trace(), 1.0, 1e-12);
}

TEST(ReconstructDensity, RecoversCoherences) {
    const auto truth = density_from_wavefunction(kX256, mt::chirped_gaussian(kX256, 0.8));
    const auto quads = quadratures(truth, uniform_angles(180), kX256);
    const auto rec = reconstruct_density_continuous(quads, kX256);
    EXPECT_LE((rec.rho.values - truth.values).norm() / truth.values.norm(), 0.05);
}
