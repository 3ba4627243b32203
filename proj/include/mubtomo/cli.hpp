#ifndef MUBTOMO_CLI_HPP
#define MUBTOMO_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mubtomo/mubtomo.hpp"
#include "mubtomo/io.hpp"

namespace mubtomo::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kBadInput = 3,
    kNumeric = 4,
};

inline int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::AliasedGrid:
    case ErrorCode::DegenerateAngle:
        return kNumeric;
    case ErrorCode::IoError:
        return kUsage;
    default:
        return kBadInput;
    }
}

namespace detail {

inline void maybe_csv(const std::string& path, const auto& value) {
    if (!path.empty()) {
        io::write_csv(path, value);
    }
}

inline RampWindow parse_window(const std::string& name) {
    if (name == "hann") {
        return RampWindow::Hann;
    }
    if (name == "shepp-logan") {
        return RampWindow::SheppLogan;
    }
    return RampWindow::None;
}

inline const std::map<std::string, std::string> kWindows{
    {"none", "none"}, {"hann", "hann"}, {"shepp-logan", "shepp-logan"}};

} // namespace detail

/// Runs one command line (args excludes the program name). Errors are
/// reported on `err` as a single line "error:<Code>:<message>".
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Qudit MUB tomography and phase-space reconstruction", "mubtomo"};
    app.require_subcommand(1);

    std::string out_path, csv_path, in_path, state_path, window = "none";
    int dim = 0, angles = 0, grid_n = 0, n_s = 0;
    double xmax = 0.0;
    std::int64_t shots = -1;
    std::uint64_t seed = 0;
    bool project = false;
    std::string wigner_out;

    auto* mub = app.add_subcommand("mub", "write the d + 1 mutually unbiased bases");
    mub->add_option("--dim", dim, "odd prime dimension")->required();
    mub->add_option("--out", out_path)->required();

    auto* simulate = app.add_subcommand("simulate", "Born probabilities (or sampled counts) of a density matrix");
    simulate->add_option("--dim", dim)->required();
    simulate->add_option("--state", state_path, "density file")->required();
    simulate->add_option("--shots", shots, "draw this many shots per basis")->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", seed);
    simulate->add_option("--out", out_path)->required();

    auto* reconstruct = app.add_subcommand("reconstruct", "density matrix from probabilities or counts");
    reconstruct->add_option("--probs", in_path, "probabilities or counts file")->required();
    reconstruct->add_flag("--project", project, "project onto the physical states");
    reconstruct->add_option("--out", out_path)->required();

    auto* radon = app.add_subcommand("radon", "Radon transform of a phase-space grid");
    radon->add_option("--in", in_path, "grid file")->required();
    radon->add_option("--angles", angles, "angles k pi / N")->required()->check(CLI::PositiveNumber);
    radon->add_option("--ns", n_s, "samples per projection (default: grid x size)");
    radon->add_option("--out", out_path)->required();
    radon->add_option("--csv", csv_path);

    auto* iradon = app.add_subcommand("iradon", "filtered back-projection of a sinogram");
    iradon->add_option("--in", in_path, "sinogram file")->required();
    iradon->add_option("--grid", grid_n, "output size per axis (default: s size)");
    iradon->add_option("--xmax", xmax, "output half-width (default: s extent / sqrt 2)");
    iradon->add_option("--window", window)->transform(CLI::CheckedTransformer(detail::kWindows));
    iradon->add_option("--out", out_path)->required();
    iradon->add_option("--csv", csv_path);

    auto* wigner = app.add_subcommand("wigner", "Wigner function of a continuous-variable state");
    wigner->add_option("--state", state_path, "position_density or wavefunction file")->required();
    wigner->add_option("--grid", grid_n)->required()->check(CLI::Range(2, 1 << 16));
    wigner->add_option("--xmax", xmax)->required()->check(CLI::PositiveNumber);
    wigner->add_option("--out", out_path)->required();
    wigner->add_option("--csv", csv_path);

    auto* quads = app.add_subcommand("quads", "rotated-quadrature distributions of a state");
    quads->add_option("--state", state_path, "position_density or wavefunction file")->required();
    quads->add_option("--angles", angles, "angles k pi / N")->required()->check(CLI::PositiveNumber);
    quads->add_option("--out", out_path)->required();
    quads->add_option("--csv", csv_path);

    auto* recon_cv = app.add_subcommand("reconstruct-cv", "position density matrix from quadratures");
    recon_cv->add_option("--quads", in_path, "quadrature sinogram file")->required();
    recon_cv->add_option("--window", window)->transform(CLI::CheckedTransformer(detail::kWindows));
    recon_cv->add_option("--wigner-out", wigner_out, "also write the reconstructed Wigner grid");
    recon_cv->add_option("--grid", grid_n, "Wigner grid size (default: s size)");
    recon_cv->add_option("--xmax", xmax, "Wigner grid half-width (default: s extent)");
    recon_cv->add_option("--out", out_path)->required();
    recon_cv->add_option("--csv", csv_path, "CSV of the Wigner grid");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error:Usage:" << msg << '\n';
        return kUsage;
    }

    try {
        if (mub->parsed()) {
            const MubBasisSet set = build_mub_set(assert_odd_prime(dim));
            io::write_json(out_path, io::to_json(set));
            out << "wrote " << set.bases.size() << " bases of dimension " << dim << " to " << out_path << '\n';
        } else if (simulate->parsed()) {
            const PrimeModulus d = assert_odd_prime(dim);
            const DensityMatrix rho = io::density_from_json(io::read_json(state_path));
            if (rho.dim() != dim) {
                fail(ErrorCode::DimensionMismatch, "state has dimension " + std::to_string(rho.dim()));
            }
            const ProbabilityTable probs = measure_probabilities(rho, build_mub_set(d));
            if (shots >= 0) {
                io::write_json(out_path, io::to_json(sample_counts(probs, shots, seed)));
            } else {
                io::write_json(out_path, io::to_json(probs));
            }
        } else if (reconstruct->parsed()) {
            const io::Json j = io::read_json(in_path);
            const ProbabilityTable probs = io::kind_of(j) == "counts" ? frequencies(io::counts_from_json(j))
                                                                       : io::probabilities_from_json(j);
            const ComplexMatrix raw = reconstruct_density(probs, build_mub_set(assert_odd_prime(probs.dim)));
            if (project) {
                io::write_json(out_path, io::to_json(project_to_physical(raw)));
            } else {
                const double lowest = hermitian_eigenvalues(raw).minCoeff();
                if (lowest < kEigenvalueFloor) {
                    err << "warning: reconstruction has eigenvalue " << lowest << "; use --project\n";
                }
                io::write_json(out_path, io::density_json(raw, lowest >= kEigenvalueFloor));
            }
        } else if (radon->parsed()) {
            const PhaseSpaceGrid g = io::grid_from_json(io::read_json(in_path));
            const Sinogram s = radon_forward(g, uniform_angles(angles), n_s > 0 ? n_s : g.x.n);
            io::write_json(out_path, io::to_json(s, "radon"));
            detail::maybe_csv(csv_path, s);
        } else if (iradon->parsed()) {
            const Sinogram s = io::sinogram_from_json(io::read_json(in_path));
            const int n = grid_n > 0 ? grid_n : s.s.n;
            const double half = xmax > 0.0 ? xmax : s.s.extent() / std::numbers::sqrt2;
            const Axis a{n, -half, half};
            const PhaseSpaceGrid g = inverse_radon(s, a, a, detail::parse_window(window));
            io::write_json(out_path, io::to_json(g, "phase_space"));
            detail::maybe_csv(csv_path, g);
        } else if (wigner->parsed()) {
            const PositionDensityMatrix rho = io::continuous_state_from_json(io::read_json(state_path));
            const Axis a{grid_n, -xmax, xmax};
            const PhaseSpaceGrid w = wigner_from_density(rho, a, a);
            io::write_json(out_path, io::to_json(w, "wigner"));
            detail::maybe_csv(csv_path, w);
        } else if (quads->parsed()) {
            const PositionDensityMatrix rho = io::continuous_state_from_json(io::read_json(state_path));
            const Sinogram s = quadratures(rho, uniform_angles(angles), rho.x);
            io::write_json(out_path, io::to_json(s, "quadratures"));
            detail::maybe_csv(csv_path, s);
        } else if (recon_cv->parsed()) {
            const Sinogram s = io::sinogram_from_json(io::read_json(in_path));
            const RampWindow w = detail::parse_window(window);
            const ContinuousReconstruction rec = reconstruct_density_continuous(s, s.s, w);
            io::write_json(out_path, io::to_json(rec));
            if (!wigner_out.empty() || !csv_path.empty()) {
                const Axis a{grid_n > 0 ? grid_n : s.s.n, -(xmax > 0.0 ? xmax : s.s.extent()),
                             xmax > 0.0 ? xmax : s.s.extent()};
                const PhaseSpaceGrid g = reconstruct_wigner(s, a, a, w);
                if (!wigner_out.empty()) {
                    io::write_json(wigner_out, io::to_json(g, "wigner"));
                }
                detail::maybe_csv(csv_path, g);
            }
            out << "raw trace " << rec.raw_trace << '\n';
        }
    } catch (const Error& e) {
        err << "error:" << to_string(e.code()) << ':' << e.what() << '\n';
        return exit_code(e.code());
    } catch (const io::Json::exception& e) {
        err << "error:InvalidInput:" << e.what() << '\n';
        return kBadInput;
    }
    return kOk;
}

} // namespace mubtomo::cli

#endif
