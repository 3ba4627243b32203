#ifndef MUBTOMO_QUDIT_TOMOGRAPHY_HPP
#define MUBTOMO_QUDIT_TOMOGRAPHY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubtomo/error.hpp"
#include "mubtomo/qudit_mub.hpp"
#include "mubtomo/rng.hpp"

namespace mubtomo {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Physical state: Hermitian, unit trace, positive semidefinite.
/// Use make_density() to construct a validated value.
struct DensityMatrix {
    ComplexMatrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Born probabilities, one row per basis: row 0 computational, row 1 + b
/// for basis b.
struct ProbabilityTable {
    int dim = 0;
    Eigen::MatrixXd rows;
};

struct CountTable {
    using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

    int dim = 0;
    std::int64_t shots_per_basis = 0;
    Counts counts;
};

inline double hermitian_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline DensityMatrix make_density(ComplexMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "density matrix must be square and non-empty");
    }
    if (hermitian_defect(m) > kHermitianTol) {
        fail(ErrorCode::NonHermitianInput, "density matrix is not Hermitian");
    }
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        fail(ErrorCode::InvalidInput, "density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    if (hermitian_eigenvalues(m).minCoeff() < kEigenvalueFloor) {
        fail(ErrorCode::InvalidInput, "density matrix has a negative eigenvalue");
    }
    return DensityMatrix{std::move(m)};
}

/// Largest |row sum - 1| of a probability table.
inline double max_row_sum_deviation(const ProbabilityTable& table) {
    return (table.rows.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

inline void validate_probabilities(const ProbabilityTable& table) {
    if (table.dim <= 0 || table.rows.rows() != table.dim + 1 || table.rows.cols() != table.dim) {
        fail(ErrorCode::DimensionMismatch, "probability table must be (d+1) x d");
    }
    if (table.rows.minCoeff() < -1e-12 || table.rows.maxCoeff() > 1.0 + 1e-12) {
        fail(ErrorCode::InvalidInput, "probability entries must lie in [0, 1]");
    }
    if (max_row_sum_deviation(table) > 1e-10) {
        fail(ErrorCode::InvalidInput, "probability rows must sum to 1");
    }
}

/// p[k][n] = <n|U_k^dagger rho U_k|n>.
inline ProbabilityTable measure_probabilities(const DensityMatrix& rho, const MubBasisSet& set) {
    const int d = set.dim;
    if (rho.dim() != d || static_cast<int>(set.bases.size()) != d + 1) {
        fail(ErrorCode::DimensionMismatch, "state and basis set dimensions differ");
    }
    ProbabilityTable table{d, Eigen::MatrixXd(d + 1, d)};
    for (int k = 0; k <= d; ++k) {
        const UnitaryMatrix& u = set.bases[k];
        for (int n = 0; n < d; ++n) {
            table.rows(k, n) = u.col(n).dot(rho.entries * u.col(n)).real();
        }
    }
    return table;
}

/// Multinomial draw of `shots` outcomes per row. Shot j of row k consumes
/// rng output k * shots + j; the outcome is the first n with u < p_0 + ... + p_n
/// (sums accumulated left to right), or the last nonzero entry when rounding
/// leaves u above the final sum.
inline CountTable sample_counts(const ProbabilityTable& table, std::int64_t shots, std::uint64_t seed) {
    if (shots < 0) {
        fail(ErrorCode::InvalidInput, "shots must be nonnegative");
    }
    const int d = table.dim;
    const auto rows = table.rows.rows();
    CountTable out{d, shots, CountTable::Counts::Zero(rows, d)};
    const CounterRng rng(seed);
    std::vector<double> cumulative(d);
    for (Eigen::Index k = 0; k < rows; ++k) {
        double acc = 0.0;
        int last_nonzero = 0;
        for (int n = 0; n < d; ++n) {
            const double p = std::max(0.0, table.rows(k, n));
            acc += p;
            cumulative[n] = acc;
            if (p > 0.0) {
                last_nonzero = n;
            }
        }
        const std::uint64_t base = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(shots);
        for (std::int64_t j = 0; j < shots; ++j) {
            const double u = rng.uniform(base + static_cast<std::uint64_t>(j));
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const int outcome = it == cumulative.end() ? last_nonzero
                                                       : static_cast<int>(it - cumulative.begin());
            ++out.counts(k, outcome);
        }
    }
    return out;
}

/// Naive frequencies count / shots.
inline ProbabilityTable frequencies(const CountTable& counts) {
    if (counts.shots_per_basis <= 0) {
        fail(ErrorCode::InvalidInput, "frequencies need a positive shot count");
    }
    return ProbabilityTable{counts.dim, counts.counts.cast<double>() /
                                            static_cast<double>(counts.shots_per_basis)};
}

/// rho = sum over all d+1 bases of sum_n p_{k,n} |k;n><k;n| - I.
/// Returns the raw affine combination; for tables whose rows do not sum to
/// one (finite-shot frequencies) the result can be unphysical.
inline ComplexMatrix reconstruct_density(const ProbabilityTable& table, const MubBasisSet& set) {
    const int d = set.dim;
    if (table.dim != d || table.rows.rows() != d + 1 || table.rows.cols() != d ||
        static_cast<int>(set.bases.size()) != d + 1) {
        fail(ErrorCode::DimensionMismatch, "probability table does not match basis set");
    }
    ComplexMatrix rho = -ComplexMatrix::Identity(d, d);
    for (int k = 0; k <= d; ++k) {
        const UnitaryMatrix& u = set.bases[k];
        rho.noalias() += u * table.rows.row(k).transpose().cast<cplx>().asDiagonal() * u.adjoint();
    }
    return rho;
}

/// Euclidean projection onto {x : x >= 0, sum x = 1} by the sorted-threshold rule.
inline Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double running = 0.0;
    double threshold = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        running += u[j];
        const double t = (running - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            threshold = t;
        }
    }
    return (v.array() - threshold).max(0.0).matrix();
}

/// Closest physical state in the eigenvalue sense: Hermitize, then project
/// the spectrum onto the probability simplex.
inline DensityMatrix project_to_physical(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "project_to_physical needs a square matrix");
    }
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const Eigen::VectorXd lambda = project_to_simplex(solver.eigenvalues());
    const ComplexMatrix& vecs = solver.eigenvectors();
    ComplexMatrix rebuilt = vecs * lambda.cast<cplx>().asDiagonal() * vecs.adjoint();
    rebuilt = 0.5 * (rebuilt + rebuilt.adjoint()).eval();
    return DensityMatrix{std::move(rebuilt)};
}

/// ||a - b||_1 for Hermitian a, b.
inline double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

} // namespace mubtomo

#endif
