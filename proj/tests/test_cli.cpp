#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBinary = SIVT_BINARY;
const std::string kSamples = SIVT_SAMPLES;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("sivt_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kBinary + " " + args + " 2>" + (scratch_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

struct Row {
    double x, value, err;
};

std::vector<Row> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x,value,err_est");
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        Row r{};
        char c1, c2;
        std::istringstream ls(line);
        ls >> r.x >> c1 >> r.value >> c2 >> r.err;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST(CliTransform, SemicircleFiniteHilbert) {
    const fs::path out = scratch_dir() / "semi.csv";
    ASSERT_EQ(run("transform --func " + sample("semicircle.fn") +
                  " --op finite-hilbert --interval -1 1 --grid 41 --out " + out.string()),
              0);
    const auto rows = read_csv(out);
    ASSERT_EQ(rows.size(), 41u);
    for (const Row& r : rows) EXPECT_NEAR(r.value, r.x, 1e-5);
}

TEST(CliTransform, ConstantUnderT) {
    const fs::path out = scratch_dir() / "const.csv";
    ASSERT_EQ(run("transform --func " + sample("const.fn") + " --op T --interval 0 1 --grid 5 --out " + out.string()), 0);
    const auto rows = read_csv(out);
    ASSERT_EQ(rows.size(), 5u);
    for (const Row& r : rows) EXPECT_EQ(r.value, 0.0);
}

TEST(CliTransform, SeventeenDigitsRoundTrip) {
    const fs::path out = scratch_dir() / "cube.csv";
    ASSERT_EQ(run("transform --func " + sample("cube.fn") + " --op T --interval 0 1 --grid 3 --out " + out.string()), 0);
    const std::string text = slurp(out);
    EXPECT_NE(text.find("0.001,"), std::string::npos);
    // T y^3 at the middle point 0.5: 1/3 + 1/4 + 1/4.
    const auto rows = read_csv(out);
    EXPECT_NEAR(rows[1].value, 5.0 / 6.0, 1e-12);
}

TEST(CliTransform, BadFunctionFileExitsOneWithoutOutput) {
    const fs::path out = scratch_dir() / "bad.csv";
    fs::remove(out);
    EXPECT_EQ(run("transform --func " + sample("bad.fn") + " --op T --interval 0 1 --out " + out.string()), 1);
    EXPECT_FALSE(fs::exists(out));
    EXPECT_NE(slurp(scratch_dir() / "stderr.txt").find("expected"), std::string::npos);
}

TEST(CliTransform, ConfigErrors) {
    EXPECT_EQ(run("transform --func " + sample("cube.fn") + " --op T --interval 1 0"), 1);
    EXPECT_EQ(run("transform --func " + sample("cube.fn") + " --op T --interval 0 1 --grid 1"), 1);
    EXPECT_EQ(run("transform --func " + sample("cube.fn") + " --op T --interval 0 1 --margin 0"), 1);
    EXPECT_EQ(run("transform --func " + sample("cube.fn") + " --op nope --interval 0 1"), 1);
    EXPECT_EQ(run("transform --func /nonexistent.fn --op T --interval 0 1"), 1);
    EXPECT_EQ(run("transform --func " + sample("cube.fn") + " --op T --interval 0 1 --format xml"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
}

TEST(CliTransform, UnconvergedPointsExitTwo) {
    // A tolerance below what double precision can certify forces non-convergence.
    const fs::path out = scratch_dir() / "tight.csv";
    EXPECT_EQ(run("transform --func " + sample("sqrt.fn") + " --op T --interval 0 1 --grid 3 --tol 1e-30 --out " +
                  out.string()),
              2);
    EXPECT_TRUE(fs::exists(out));
}

TEST(CliTransform, JsonFormat) {
    const fs::path out = scratch_dir() / "lor.json";
    ASSERT_EQ(run("transform --func " + sample("lorentzian.fn") +
                  " --op hilbert --interval -1 1 --grid 5 --format json --out " + out.string()),
              0);
    const auto j = nlohmann::json::parse(slurp(out));
    ASSERT_EQ(j.size(), 5u);
    for (const auto& p : j) {
        const double x = p["x"];
        EXPECT_NEAR(p["value"].get<double>(), x / (1 + x * x), 1e-8);
    }
}

TEST(CliTransform, Deterministic) {
    const fs::path a = scratch_dir() / "det_a.csv", b = scratch_dir() / "det_b.csv";
    const std::string args = "transform --func " + sample("shifted_power.fn") + " --op finite-hilbert --interval 0 1 --grid 9 --out ";
    ASSERT_EQ(run(args + a.string()), 0);
    ASSERT_EQ(run(args + b.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(CliVerify, SuitesPassWithFiveFieldRecords) {
    for (const std::string suite : {"oracles", "identities", "regularity", "algebra"}) {
        const fs::path out = scratch_dir() / (suite + ".json");
        EXPECT_EQ(run("verify --suite " + suite + " --out " + out.string()), 0) << suite;
        const auto j = nlohmann::json::parse(slurp(out));
        ASSERT_TRUE(j.is_array());
        ASSERT_FALSE(j.empty());
        for (const auto& c : j) {
            EXPECT_EQ(c.size(), 5u);
            EXPECT_EQ(c["status"], "pass") << c["check_id"];
            EXPECT_TRUE(c.contains("bound_or_expected"));
        }
    }
}

TEST(CliVerify, IdentitiesReportTheCubeDiscrepancy) {
    const fs::path out = scratch_dir() / "ident.json";
    ASSERT_EQ(run("verify --suite identities --out " + out.string()), 0);
    const auto j = nlohmann::json::parse(slurp(out));
    bool seen = false;
    for (const auto& c : j)
        if (c["check_id"] == "identities.recursion.y3.uncorrected_discrepancy") {
            seen = true;
            EXPECT_NEAR(c["measured"].get<double>(), -1.0, 1e-8);
        }
    EXPECT_TRUE(seen);
}

TEST(CliVerify, AllIsDeterministic) {
    const fs::path a = scratch_dir() / "all_a.json", b = scratch_dir() / "all_b.json";
    ASSERT_EQ(run("verify --suite all --out " + a.string()), 0);
    ASSERT_EQ(run("verify --out " + b.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(CliVerify, FailingChecksExitTwoAndUnknownSuiteExitsOne) {
    // Quadrature at 1e-2 cannot meet the 1e-10 polynomial checks.
    EXPECT_EQ(run("verify --suite algebra --tol 1e-2 --out " + (scratch_dir() / "loose.json").string()), 2);
    EXPECT_EQ(run("verify --suite nonsense"), 1);
}

TEST(CliHolder, ShiftedPowerTransform) {
    const fs::path out = scratch_dir() / "holder.json";
    ASSERT_EQ(run("holder --func " + sample("shifted_power.fn") +
                  " --op finite-hilbert --interval 0 1 --at 0.5 --out " + out.string()),
              0);
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_GE(j["alpha_hat"].get<double>(), 0.45);
    EXPECT_LE(j["alpha_hat"].get<double>(), 0.55);
}

TEST(CliHolder, SmoothAndConstantInputs) {
    const fs::path s = scratch_dir() / "holder_sine.json", c = scratch_dir() / "holder_const.json";
    ASSERT_EQ(run("holder --func " + sample("sine.fn") + " --interval -1 1 --at 0.3 --out " + s.string()), 0);
    EXPECT_GE(nlohmann::json::parse(slurp(s))["alpha_hat"].get<double>(), 0.95);
    ASSERT_EQ(run("holder --func " + sample("const.fn") + " --interval 0 1 --at 0.5 --out " + c.string()), 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(c))["alpha_hat"].get<double>(), 1.5);
}

TEST(CliHolder, ConfigErrors) {
    EXPECT_EQ(run("holder --func " + sample("sine.fn") + " --interval 0 1 --at 0.001"), 1);
    EXPECT_EQ(run("holder --func " + sample("sine.fn") + " --interval 0 1 --at 0.5 --scales 8 4"), 1);
    EXPECT_EQ(run("holder --func " + sample("bad.fn") + " --interval 0 1 --at 0.5"), 1);
}

TEST(CliOracle, Values) {
    const fs::path out = scratch_dir() / "oracle.json";
    ASSERT_EQ(run("oracle --name semicircle --at 2 --format json --out " + out.string()), 0);
    EXPECT_NEAR(nlohmann::json::parse(slurp(out))["value"].get<double>(), 2.0 - std::sqrt(3.0), 1e-15);
    ASSERT_EQ(run("oracle --name chebyshev --at -2 --format json --out " + out.string()), 0);
    EXPECT_NEAR(nlohmann::json::parse(slurp(out))["value"].get<double>(), -M_PI / std::sqrt(3.0), 1e-15);
    ASSERT_EQ(run("oracle --name shifted-xalpha --at 0.3 --x0 0.3 --alpha 0.5 --format json --out " + out.string()), 0);
    EXPECT_NEAR(nlohmann::json::parse(slurp(out))["value"].get<double>(), -std::sqrt(0.7) / (M_PI * 0.5), 1e-15);
    ASSERT_EQ(run("oracle --name divergence --eps 1e-4 --format json --out " + out.string()), 0);
    EXPECT_NEAR(nlohmann::json::parse(slurp(out))["value"].get<double>(), 1.2055621178, 1e-10);
    ASSERT_EQ(run("oracle --name xalpha --at 0.25 --alpha 0.5 --format json --out " + out.string()), 0);
    EXPECT_NEAR(nlohmann::json::parse(slurp(out))["value"].get<double>(), -0.46177019608455145, 1e-12);
}

TEST(CliOracle, Errors) {
    EXPECT_EQ(run("oracle --name chebyshev --at 1"), 1);
    EXPECT_EQ(run("oracle --name xalpha --at 1.5"), 1);
    EXPECT_EQ(run("oracle --name nope --at 0"), 1);
    EXPECT_EQ(run("oracle --at 0"), 1);
}
