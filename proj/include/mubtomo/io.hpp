#ifndef MUBTOMO_IO_HPP
#define MUBTOMO_IO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mubtomo/cv_wigner.hpp"
#include "mubtomo/error.hpp"
#include "mubtomo/phase_space.hpp"
#include "mubtomo/qudit_mub.hpp"
#include "mubtomo/qudit_tomography.hpp"

// JSON file formats. Every file is an object with "format": 1 and a "kind";
// complex numbers are [re, im] pairs and matrices are row-major nested arrays.
//
//   density           dim, data (d x d complex), physical (bool, default true)
//   unitary           dim, data (d + 1 matrices, each d x d complex)
//   probabilities     dim, data ((d + 1) x d real)
//   counts            dim, shots, data ((d + 1) x d integers)
//   grid              role, hbar, x, p (axes), data (x.n x p.n real)
//   sinogram          role, thetas, s (axis), data (n_theta x s.n real)
//   position_density  hbar, x (axis), data (x.n x x.n complex), raw_trace (optional)
//   wavefunction      hbar, x (axis), data (x.n complex)
//
// An axis is {"n": n, "lo": lo, "hi": hi}; nodes lo + i (hi - lo) / (n - 1).

namespace mubtomo::io {

using Json = nlohmann::json;

inline constexpr int kFormat = 1;

struct Wavefunction {
    Axis x;
    ComplexVector psi;
};

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { fail(ErrorCode::InvalidInput, what); }

inline const Json& field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        bad(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

inline double number(const Json& j, const char* what) {
    if (!j.is_number()) {
        bad(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

inline int integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) {
        bad(std::string(what) + " must be an integer");
    }
    return j.get<int>();
}

inline const Json& array(const Json& j, std::size_t size, const char* what) {
    if (!j.is_array() || j.size() != size) {
        bad(std::string(what) + " must be an array of length " + std::to_string(size));
    }
    return j;
}

inline Json complex_value(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_value(const Json& j) {
    array(j, 2, "complex entry");
    return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

inline Json complex_matrix(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_value(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix complex_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols) {
    array(j, static_cast<std::size_t>(rows), "matrix");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        array(j[i], static_cast<std::size_t>(cols), "matrix row");
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = complex_value(j[i][c]);
        }
    }
    return m;
}

inline Json real_matrix(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd real_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols) {
    array(j, static_cast<std::size_t>(rows), "matrix");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        array(j[i], static_cast<std::size_t>(cols), "matrix row");
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = number(j[i][c], "matrix entry");
        }
    }
    return m;
}

inline Json axis(const Axis& a) { return {{"n", a.n}, {"lo", a.lo}, {"hi", a.hi}}; }

inline Axis axis(const Json& j, const char* name) {
    Axis a{integer(field(j, "n"), "axis n"), number(field(j, "lo"), "axis lo"), number(field(j, "hi"), "axis hi")};
    validate_axis(a, name);
    return a;
}

inline Json header(const char* kind) { return {{"format", kFormat}, {"kind", kind}}; }

inline void expect_kind(const Json& j, const char* kind) {
    if (!j.is_object()) {
        bad("file must hold a JSON object");
    }
    const Json& f = field(j, "format");
    if (!f.is_number_integer() || f.get<int>() != kFormat) {
        bad("unsupported format version");
    }
    const Json& k = field(j, "kind");
    if (!k.is_string() || k.get<std::string>() != kind) {
        bad(std::string("expected kind \"") + kind + "\"");
    }
}

inline int dimension(const Json& j) {
    const int d = integer(field(j, "dim"), "dim");
    if (d <= 0) {
        bad("dim must be positive");
    }
    return d;
}

} // namespace detail

/// Kind of a parsed file, or "" when absent.
inline std::string kind_of(const Json& j) {
    if (j.is_object() && j.contains("kind") && j["kind"].is_string()) {
        return j["kind"].get<std::string>();
    }
    return {};
}

// density -------------------------------------------------------------------

/// Raw operators (e.g. unprojected reconstructions) are stored with
/// physical = false and skip the eigenvalue check on load.
inline Json density_json(const ComplexMatrix& m, bool physical = true) {
    Json j = detail::header("density");
    j["dim"] = m.rows();
    j["physical"] = physical;
    j["data"] = detail::complex_matrix(m);
    return j;
}

inline Json to_json(const DensityMatrix& rho) { return density_json(rho.entries, true); }

/// Hermitian unit-trace operator; positive semidefinite too unless the file
/// says physical = false.
inline ComplexMatrix density_entries(const Json& j) {
    detail::expect_kind(j, "density");
    const int d = detail::dimension(j);
    ComplexMatrix m = detail::complex_matrix(detail::field(j, "data"), d, d);
    const bool physical = !j.contains("physical") || j["physical"].get<bool>();
    if (physical) {
        return make_density(std::move(m)).entries;
    }
    if (hermitian_defect(m) > kHermitianTol) {
        fail(ErrorCode::NonHermitianInput, "operator is not Hermitian");
    }
    if (std::abs(m.trace() - 1.0) > 1e-9) {
        detail::bad("operator trace differs from 1");
    }
    return m;
}

inline DensityMatrix density_from_json(const Json& j) {
    if (j.contains("physical") && !j["physical"].get<bool>()) {
        detail::bad("file holds an unphysical operator");
    }
    return DensityMatrix{density_entries(j)};
}

// unitary -------------------------------------------------------------------

inline Json to_json(const MubBasisSet& set) {
    Json j = detail::header("unitary");
    j["dim"] = set.dim;
    Json bases = Json::array();
    for (const auto& u : set.bases) {
        bases.push_back(detail::complex_matrix(u));
    }
    j["data"] = std::move(bases);
    return j;
}

inline MubBasisSet mub_set_from_json(const Json& j) {
    detail::expect_kind(j, "unitary");
    const int d = detail::dimension(j);
    assert_odd_prime(d);
    const Json& data = detail::array(detail::field(j, "data"), static_cast<std::size_t>(d + 1), "basis list");
    MubBasisSet set{d, {}};
    for (const auto& b : data) {
        set.bases.push_back(detail::complex_matrix(b, d, d));
        if (unitarity_defect(set.bases.back()) > 1e-10) {
            detail::bad("basis " + std::to_string(set.bases.size() - 1) + " is not unitary");
        }
    }
    return set;
}

// probabilities / counts ----------------------------------------------------

inline Json to_json(const ProbabilityTable& t) {
    Json j = detail::header("probabilities");
    j["dim"] = t.dim;
    j["data"] = detail::real_matrix(t.rows);
    return j;
}

inline ProbabilityTable probabilities_from_json(const Json& j) {
    detail::expect_kind(j, "probabilities");
    const int d = detail::dimension(j);
    ProbabilityTable t{d, detail::real_matrix(detail::field(j, "data"), d + 1, d)};
    validate_probabilities(t);
    return t;
}

inline Json to_json(const CountTable& t) {
    Json j = detail::header("counts");
    j["dim"] = t.dim;
    j["shots"] = t.shots_per_basis;
    Json rows = Json::array();
    for (Eigen::Index k = 0; k < t.counts.rows(); ++k) {
        Json row = Json::array();
        for (Eigen::Index n = 0; n < t.counts.cols(); ++n) {
            row.push_back(t.counts(k, n));
        }
        rows.push_back(std::move(row));
    }
    j["data"] = std::move(rows);
    return j;
}

inline CountTable counts_from_json(const Json& j) {
    detail::expect_kind(j, "counts");
    const int d = detail::dimension(j);
    const Json& shots = detail::field(j, "shots");
    if (!shots.is_number_integer() || shots.get<std::int64_t>() < 0) {
        detail::bad("shots must be a nonnegative integer");
    }
    CountTable t{d, shots.get<std::int64_t>(), CountTable::Counts(d + 1, d)};
    const Json& data = detail::array(detail::field(j, "data"), static_cast<std::size_t>(d + 1), "count table");
    for (int k = 0; k <= d; ++k) {
        detail::array(data[k], static_cast<std::size_t>(d), "count row");
        std::int64_t total = 0;
        for (int n = 0; n < d; ++n) {
            if (!data[k][n].is_number_integer() || data[k][n].get<std::int64_t>() < 0) {
                detail::bad("counts must be nonnegative integers");
            }
            t.counts(k, n) = data[k][n].get<std::int64_t>();
            total += t.counts(k, n);
        }
        if (total != t.shots_per_basis) {
            detail::bad("count row " + std::to_string(k) + " does not sum to shots");
        }
    }
    return t;
}

// grid / sinogram -----------------------------------------------------------

inline Json to_json(const PhaseSpaceGrid& g, const std::string& role = "phase_space") {
    Json j = detail::header("grid");
    j["role"] = role;
    j["hbar"] = 1;
    j["x"] = detail::axis(g.x);
    j["p"] = detail::axis(g.p);
    j["data"] = detail::real_matrix(g.values);
    return j;
}

inline PhaseSpaceGrid grid_from_json(const Json& j) {
    detail::expect_kind(j, "grid");
    const Axis x = detail::axis(detail::field(j, "x"), "x");
    const Axis p = detail::axis(detail::field(j, "p"), "p");
    return PhaseSpaceGrid{x, p, detail::real_matrix(detail::field(j, "data"), x.n, p.n)};
}

inline Json to_json(const Sinogram& s, const std::string& role = "radon") {
    Json j = detail::header("sinogram");
    j["role"] = role;
    j["thetas"] = s.thetas;
    j["s"] = detail::axis(s.s);
    j["data"] = detail::real_matrix(s.values);
    return j;
}

inline Sinogram sinogram_from_json(const Json& j) {
    detail::expect_kind(j, "sinogram");
    const Json& thetas = detail::field(j, "thetas");
    if (!thetas.is_array() || thetas.empty()) {
        detail::bad("thetas must be a non-empty array");
    }
    Sinogram s;
    for (const auto& t : thetas) {
        s.thetas.push_back(detail::number(t, "theta"));
        if (!std::isfinite(s.thetas.back())) {
            detail::bad("thetas must be finite");
        }
    }
    s.s = detail::axis(detail::field(j, "s"), "s");
    s.values = detail::real_matrix(detail::field(j, "data"), s.n_theta(), s.s.n);
    if (j.value("role", std::string()) == "quadratures") {
        validate_quadratures(s);
    }
    return s;
}

// position_density / wavefunction -------------------------------------------

inline Json to_json(const PositionDensityMatrix& rho) {
    Json j = detail::header("position_density");
    j["hbar"] = 1;
    j["x"] = detail::axis(rho.x);
    j["data"] = detail::complex_matrix(rho.values);
    return j;
}

inline Json to_json(const ContinuousReconstruction& rec) {
    Json j = to_json(rec.rho);
    j["raw_trace"] = rec.raw_trace;
    return j;
}

inline PositionDensityMatrix position_density_from_json(const Json& j) {
    detail::expect_kind(j, "position_density");
    const Axis x = detail::axis(detail::field(j, "x"), "x");
    PositionDensityMatrix rho{x, detail::complex_matrix(detail::field(j, "data"), x.n, x.n)};
    validate_position_density(rho);
    return rho;
}

inline Json to_json(const Wavefunction& w) {
    Json j = detail::header("wavefunction");
    j["hbar"] = 1;
    j["x"] = detail::axis(w.x);
    Json data = Json::array();
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) {
        data.push_back(detail::complex_value(w.psi(i)));
    }
    j["data"] = std::move(data);
    return j;
}

inline Wavefunction wavefunction_from_json(const Json& j) {
    detail::expect_kind(j, "wavefunction");
    Wavefunction w{detail::axis(detail::field(j, "x"), "x"), {}};
    const Json& data = detail::array(detail::field(j, "data"), static_cast<std::size_t>(w.x.n), "wavefunction");
    w.psi.resize(w.x.n);
    for (int i = 0; i < w.x.n; ++i) {
        w.psi(i) = detail::complex_value(data[i]);
    }
    if (w.psi.norm() == 0.0) {
        detail::bad("wavefunction is identically zero");
    }
    return w;
}

/// position_density as stored, or |psi><psi| for a wavefunction file.
inline PositionDensityMatrix continuous_state_from_json(const Json& j) {
    if (kind_of(j) == "wavefunction") {
        const Wavefunction w = wavefunction_from_json(j);
        return density_from_wavefunction(w.x, w.psi);
    }
    return position_density_from_json(j);
}

// files ---------------------------------------------------------------------

inline Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorCode::InvalidInput, path + ": " + e.what());
    }
}

inline void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + path);
    }
    out << j.dump() << '\n';
    if (!out) {
        fail(ErrorCode::IoError, "write failed for " + path);
    }
}

// CSV: header row of column coordinates, then one row per x (or theta).

inline void write_csv(std::ostream& out, const PhaseSpaceGrid& g) {
    out << std::setprecision(17) << "x\\p";
    for (int j = 0; j < g.p.n; ++j) {
        out << ',' << g.p.at(j);
    }
    out << '\n';
    for (int i = 0; i < g.x.n; ++i) {
        out << g.x.at(i);
        for (int j = 0; j < g.p.n; ++j) {
            out << ',' << g.values(i, j);
        }
        out << '\n';
    }
}

inline void write_csv(std::ostream& out, const Sinogram& s) {
    out << std::setprecision(17) << "theta\\s";
    for (int j = 0; j < s.s.n; ++j) {
        out << ',' << s.s.at(j);
    }
    out << '\n';
    for (int k = 0; k < s.n_theta(); ++k) {
        out << s.thetas[k];
        for (int j = 0; j < s.s.n; ++j) {
            out << ',' << s.values(k, j);
        }
        out << '\n';
    }
}

template <typename T>
void write_csv(const std::string& path, const T& value) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::IoError, "cannot write " + path);
    }
    write_csv(out, value);
}

} // namespace mubtomo::io

#endif
