// Simulated MUB tomography of a random qudit state at several shot counts.

#include <cstdio>
#include <cstdlib>
#include <random>

#include "mubtomo/mubtomo.hpp"

using namespace mubtomo;

int main(int argc, char** argv) {
    const int d = argc > 1 ? std::atoi(argv[1]) : 5;
    const PrimeModulus mod = assert_odd_prime(d);
    const MubBasisSet set = build_mub_set(mod);

    std::mt19937_64 gen(2024);
    std::normal_distribution<double> normal;
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            a(i, j) = cplx(normal(gen), normal(gen));
        }
    }
    ComplexMatrix m = a * a.adjoint();
    m /= m.trace().real();
    m = (0.5 * (m + m.adjoint())).eval();
    const DensityMatrix rho = make_density(m);

    const ProbabilityTable exact = measure_probabilities(rho, set);
    const ComplexMatrix back = reconstruct_density(exact, set);
    std::printf("d = %d, exact probabilities: max |error| = %.2e\n", d, (back - rho.entries).cwiseAbs().maxCoeff());

    for (long shots : {100L, 10000L, 1000000L}) {
        const CountTable counts = sample_counts(exact, shots, 7);
        const ComplexMatrix raw = reconstruct_density(frequencies(counts), set);
        const DensityMatrix fixed = project_to_physical(raw);
        std::printf("shots %8ld  trace-norm error raw %.4f  projected %.4f\n", shots,
                    trace_norm_distance(raw, rho.entries), trace_norm_distance(fixed.entries, rho.entries));
    }
    return 0;
}
