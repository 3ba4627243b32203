#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mubtomo/cli.hpp"
#include "support/states.hpp"

using namespace mubtomo;
namespace fs = std::filesystem;
namespace mt = mubtomo::testing;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mubtomo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run_cli(std::move(args), out, err);
        stdout_ = out.str();
        stderr_ = err.str();
        return code;
    }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::string stdout_, stderr_;
};

void write_mixed(const std::string& p, int d) {
    io::write_json(p, io::to_json(DensityMatrix{ComplexMatrix::Identity(d, d) / static_cast<double>(d)}));
}

} // namespace

TEST_F(CliTest, MubWritesFourBasesForDimThree) {
    ASSERT_EQ(run({"mub", "--dim", "3", "--out", path("b.json")}), 0);
    const MubBasisSet set = io::mub_set_from_json(io::read_json(path("b.json")));
    EXPECT_EQ(set.bases.size(), 4u);
    EXPECT_LE(mub_deviation(set), 1e-12);
}

TEST_F(CliTest, CompositeDimensionIsRejected) {
    EXPECT_EQ(run({"mub", "--dim", "4", "--out", path("b.json")}), 3);
    EXPECT_EQ(stderr_.rfind("error:NotPrime:", 0), 0u) << stderr_;
    EXPECT_EQ(std::count(stderr_.begin(), stderr_.end(), '\n'), 1);
    EXPECT_FALSE(fs::exists(path("b.json")));
}

TEST_F(CliTest, MaximallyMixedRoundTrip) {
    write_mixed(path("mixed.json"), 5);
    ASSERT_EQ(run({"simulate", "--dim", "5", "--state", path("mixed.json"), "--out", path("p.json")}), 0);
    ASSERT_EQ(run({"reconstruct", "--probs", path("p.json"), "--out", path("r.json")}), 0);
    const ComplexMatrix r = io::density_entries(io::read_json(path("r.json")));
    EXPECT_LE((r - ComplexMatrix::Identity(5, 5) / 5.0).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}), 2);
    EXPECT_EQ(run({"mub", "--out", path("b.json")}), 2);
    EXPECT_EQ(run({"mub", "--dim", "three", "--out", path("b.json")}), 2);
    EXPECT_EQ(run({"reconstruct", "--probs", path("missing.json"), "--out", path("r.json")}), 2);
    EXPECT_EQ(stderr_.rfind("error:IoError:", 0), 0u);
    EXPECT_EQ(run({"--help"}), 0);
    EXPECT_NE(stdout_.find("reconstruct-cv"), std::string::npos);
}

TEST_F(CliTest, InvalidInputFiles) {
    ComplexMatrix bad = ComplexMatrix::Identity(3, 3) / 3.0;
    bad(0, 1) = 0.1;
    io::Json j = io::density_json(bad);
    io::write_json(path("bad.json"), j);
    EXPECT_EQ(run({"simulate", "--dim", "3", "--state", path("bad.json"), "--out", path("p.json")}), 3);
    EXPECT_EQ(stderr_.rfind("error:NonHermitianInput:", 0), 0u);

    std::ofstream(path("garbage.json")) << "{not json";
    EXPECT_EQ(run({"reconstruct", "--probs", path("garbage.json"), "--out", path("r.json")}), 3);

    write_mixed(path("mixed.json"), 5);
    EXPECT_EQ(run({"simulate", "--dim", "3", "--state", path("mixed.json"), "--out", path("p.json")}), 3);
    EXPECT_EQ(run({"radon", "--in", path("mixed.json"), "--angles", "4", "--out", path("s.json")}), 3);

    ProbabilityTable p{3, Eigen::MatrixXd::Constant(4, 3, 0.3)};
    io::Json pj = io::to_json(p);
    io::write_json(path("p.json"), pj);
    EXPECT_EQ(run({"reconstruct", "--probs", path("p.json"), "--out", path("r.json")}), 3);
}

TEST_F(CliTest, CountsAreDeterministicAndProjectable) {
    std::mt19937_64 gen(5);
    io::write_json(path("rho.json"), io::to_json(DensityMatrix{mt::random_density(5, gen)}));
    const std::vector<std::string> sim{"simulate", "--dim", "5", "--state", path("rho.json"), "--shots", "200",
                                       "--seed", "42", "--out"};
    auto a = sim, b = sim;
    a.push_back(path("c1.json"));
    b.push_back(path("c2.json"));
    ASSERT_EQ(run(a), 0);
    ASSERT_EQ(run(b), 0);
    EXPECT_EQ(slurp(path("c1.json")), slurp(path("c2.json")));
    const CountTable counts = io::counts_from_json(io::read_json(path("c1.json")));
    EXPECT_EQ(counts.shots_per_basis, 200);

    ASSERT_EQ(run({"reconstruct", "--probs", path("c1.json"), "--project", "--out", path("r.json")}), 0);
    EXPECT_NO_THROW(io::density_from_json(io::read_json(path("r.json"))));
    ASSERT_EQ(run({"reconstruct", "--probs", path("c1.json"), "--out", path("raw.json")}), 0);
    EXPECT_NO_THROW(io::density_entries(io::read_json(path("raw.json"))));
}

TEST_F(CliTest, ContinuousPipeline) {
    const Axis x{129, -8.0, 8.0};
    io::write_json(path("psi.json"), io::to_json(io::Wavefunction{x, mt::first_excited_state(x)}));
    ASSERT_EQ(run({"wigner", "--state", path("psi.json"), "--grid", "65", "--xmax", "4", "--out", path("w.json"),
                   "--csv", path("w.csv")}),
              0)
        << stderr_;
    const PhaseSpaceGrid w = io::grid_from_json(io::read_json(path("w.json")));
    EXPECT_NEAR(w.values(32, 32), -1.0 / std::numbers::pi, 1e-3);
    EXPECT_TRUE(fs::exists(path("w.csv")));

    ASSERT_EQ(run({"quads", "--state", path("psi.json"), "--angles", "60", "--out", path("q.json")}), 0) << stderr_;
    ASSERT_EQ(run({"reconstruct-cv", "--quads", path("q.json"), "--out", path("rho.json"), "--wigner-out",
                   path("wr.json"), "--grid", "65", "--xmax", "4"}),
              0)
        << stderr_;
    const PositionDensityMatrix rho = io::position_density_from_json(io::read_json(path("rho.json")));
    EXPECT_EQ(rho.x, x);
    const PhaseSpaceGrid wr = io::grid_from_json(io::read_json(path("wr.json")));
    EXPECT_LT(wr.values(32, 32), -0.25);

    ASSERT_EQ(run({"radon", "--in", path("w.json"), "--angles", "90", "--out", path("s.json"), "--csv",
                   path("s.csv")}),
              0);
    ASSERT_EQ(run({"iradon", "--in", path("s.json"), "--grid", "65", "--xmax", "4", "--window", "hann", "--out",
                   path("back.json")}),
              0);
    EXPECT_EQ(run({"iradon", "--in", path("s.json"), "--window", "square", "--out", path("back.json")}), 2);
}

TEST_F(CliTest, AliasedGridIsNumericFailure) {
    const Axis coarse{24, -8.0, 8.0};
    io::write_json(path("psi.json"), io::to_json(io::Wavefunction{coarse, mt::ground_state(coarse)}));
    EXPECT_EQ(run({"quads", "--state", path("psi.json"), "--angles", "8", "--out", path("q.json")}), 4);
    EXPECT_EQ(stderr_.rfind("error:AliasedGrid:", 0), 0u) << stderr_;
}

// write -> read is lossless for every kind.

TEST(JsonRoundTrip, QuditKinds) {
    std::mt19937_64 gen(11);
    const DensityMatrix rho{mt::random_density(7, gen)};
    EXPECT_EQ(io::density_from_json(io::Json::parse(io::to_json(rho).dump())).entries, rho.entries);

    const MubBasisSet set = build_mub_set(assert_odd_prime(7));
    const MubBasisSet back = io::mub_set_from_json(io::Json::parse(io::to_json(set).dump()));
    for (std::size_t k = 0; k < set.bases.size(); ++k) {
        EXPECT_EQ(back.bases[k], set.bases[k]);
    }

    const ProbabilityTable probs = measure_probabilities(rho, set);
    EXPECT_EQ(io::probabilities_from_json(io::Json::parse(io::to_json(probs).dump())).rows, probs.rows);

    const CountTable counts = sample_counts(probs, 1000, 3);
    EXPECT_EQ(io::counts_from_json(io::Json::parse(io::to_json(counts).dump())).counts, counts.counts);
}

TEST(JsonRoundTrip, PhaseSpaceKinds) {
    const Axis x{33, -4.0, 4.0}, p{17, -3.3, 2.9};
    const PhaseSpaceGrid g = sample_grid(x, p, [](double a, double b) { return std::sin(a * b) / 3.0 + 1e-300; });
    const PhaseSpaceGrid g2 = io::grid_from_json(io::Json::parse(io::to_json(g).dump()));
    EXPECT_EQ(g2.x, g.x);
    EXPECT_EQ(g2.p, g.p);
    EXPECT_EQ(g2.values, g.values);

    const Sinogram s = radon_forward(g, uniform_angles(7), 21);
    const Sinogram s2 = io::sinogram_from_json(io::Json::parse(io::to_json(s).dump()));
    EXPECT_EQ(s2.thetas, s.thetas);
    EXPECT_EQ(s2.s, s.s);
    EXPECT_EQ(s2.values, s.values);

    const Axis xs{64, -8.0, 8.0};
    const auto psi = mt::chirped_gaussian(xs, 0.7);
    const io::Wavefunction w{xs, psi};
    EXPECT_EQ(io::wavefunction_from_json(io::Json::parse(io::to_json(w).dump())).psi, psi);

    const PositionDensityMatrix rho = density_from_wavefunction(xs, psi);
    EXPECT_EQ(io::position_density_from_json(io::Json::parse(io::to_json(rho).dump())).values, rho.values);
}

TEST(JsonRoundTrip, WrongKindIsRejected) {
    const io::Json j = io::to_json(ProbabilityTable{3, Eigen::MatrixXd::Constant(4, 3, 1.0 / 3.0)});
    try {
        io::density_from_json(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
    io::Json versioned = j;
    versioned["format"] = 2;
    EXPECT_THROW(io::probabilities_from_json(versioned), Error);
}

TEST(Csv, GridLayout) {
    const PhaseSpaceGrid g = sample_grid(Axis{2, 0.0, 1.0}, Axis{3, -1.0, 1.0}, [](double a, double b) { return a + b; });
    std::ostringstream out;
    io::write_csv(out, g);
    EXPECT_EQ(out.str(), "x\\p,-1,0,1\n0,-1,0,1\n1,0,1,2\n");
}
