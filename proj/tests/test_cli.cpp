// Runs the pcool executable end to end.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "pcool/io.hpp"

#ifndef PCOOL_EXE
#error "PCOOL_EXE must name the pcool executable"
#endif

namespace fs = std::filesystem;
using namespace pcool;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "pcool_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_pcool(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(PCOOL_EXE) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

double printed(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + " = ");
    if (pos == std::string::npos) return std::nan("");
    return std::stod(text.substr(pos + key.size() + 3));
}

Vector distribution(const fs::path& path) {
    std::ifstream in(path);
    return read_distribution_csv(in);
}

}  // namespace

TEST(Cli, CoolClosedDefaults) {
    const fs::path dir = scratch("closed");
    const CliRun r = run_pcool("cool-closed --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(printed(r.out, "p_post"), 0.217, 0.002);
    EXPECT_GE(printed(r.out, "vacuum_fidelity"), 0.999);
    for (const char* f : {"initial_distribution.csv", "final_distribution.csv", "cooling_result.json",
                          "wigner_initial.csv", "wigner_initial.json", "wigner_final.csv", "wigner_final.json"}) {
        EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    }
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "cooling_result.json"));
    EXPECT_NEAR(j["p_post"].get<double>(), 0.217, 0.002);
    EXPECT_EQ(j["phases"].size(), 5u);
}

TEST(Cli, CoolClosedZeroTemperature) {
    const fs::path dir = scratch("closed_zero");
    const CliRun r = run_pcool("cool-closed --n-t 0 --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(printed(r.out, "p_post"), 1.0);
    EXPECT_EQ(printed(r.out, "vacuum_fidelity"), 1.0);
}

TEST(Cli, CoolClosedSingleAtom) {
    const fs::path dir = scratch("closed_one");
    const CliRun r = run_pcool("cool-closed --atoms 1 --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const Vector p = distribution(dir / "out" / "initial_distribution.csv");
    double even = 0.0;
    for (Eigen::Index n = 0; n < p.size(); n += 2) even += p(n);
    EXPECT_NEAR(printed(r.out, "vacuum_fidelity"), p(0) / even, 1e-15);
}

TEST(Cli, FidelitySweepHotField) {
    const fs::path dir = scratch("sweep");
    const CliRun r = run_pcool("fidelity-sweep --n-t 100 --atoms 14 --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream csv(slurp(dir / "out" / "fidelity_sweep.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "N,fidelity,p_post");
    std::vector<double> f, p;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string a, b, c;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, c, ',');
        EXPECT_EQ(std::stoul(a), f.size() + 1);
        f.push_back(std::stod(b));
        p.push_back(std::stod(c));
    }
    ASSERT_EQ(f.size(), 14u);
    for (std::size_t k = 1; k < f.size(); ++k) EXPECT_GE(f[k], f[k - 1]);
    EXPECT_GT(f[9], 0.99);
    EXPECT_NEAR(p[13], 1.0 / 101.0, 1e-3);
}

TEST(Cli, FidelitySweepZeroTemperature) {
    const fs::path dir = scratch("sweep_zero");
    const CliRun r = run_pcool("fidelity-sweep --n-t 0 --atoms 6 --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "out" / "fidelity_sweep.csv");
    EXPECT_EQ(csv, "N,fidelity,p_post\n1,1,1\n2,1,1\n3,1,1\n4,1,1\n5,1,1\n6,1,1\n");
}

TEST(Cli, CoolOpenClosedLimitMatchesCoolClosed) {
    const fs::path dir = scratch("open_closed");
    std::ofstream(dir / "lossless.cfg") << "kappa = 0\ngamma = 0\nn-t = 1.0\natoms = 3\n";
    const std::string cfg = "--config " + (dir / "lossless.cfg").string();
    const CliRun open = run_pcool("cool-open " + cfg + " --out " + (dir / "open").string(), dir);
    ASSERT_EQ(open.code, 0) << open.err;
    const CliRun closed = run_pcool("cool-closed " + cfg + " --out " + (dir / "closed").string(), dir);
    ASSERT_EQ(closed.code, 0) << closed.err;
    const Vector a = distribution(dir / "open" / "open_final_distribution.csv");
    const Vector b = distribution(dir / "closed" / "final_distribution.csv");
    ASSERT_EQ(a.size(), b.size());
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(printed(open.out, "p_total"), printed(closed.out, "p_post"), 1e-6);
}

TEST(Cli, CoolOpenNoGapAtLeastAsCold) {
    const fs::path dir = scratch("open_gap");
    const std::string common = "cool-open --n-t 1 --atoms 3 --out " + (dir / "out").string();
    const CliRun with_gap = run_pcool(common, dir);
    ASSERT_EQ(with_gap.code, 0) << with_gap.err;
    const CliRun no_gap = run_pcool(common + " --gap 0", dir);
    ASSERT_EQ(no_gap.code, 0) << no_gap.err;
    EXPECT_GE(printed(no_gap.out, "vacuum_fidelity"), printed(with_gap.out, "vacuum_fidelity"));
}

TEST(Cli, CoolOpenIntegratorFailure) {
    const fs::path dir = scratch("open_fail");
    const CliRun r = run_pcool("cool-open --dt 1e-6 --atoms 1 --out " + (dir / "out").string(), dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("atom 1"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("dt <="), std::string::npos) << r.err;
}

TEST(Cli, VerifyDefaultSeed) {
    const fs::path dir = scratch("verify");
    const CliRun r = run_pcool("verify --out " + (dir / "out").string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "verify_report.json"));
    EXPECT_GE(j["cases"].get<std::size_t>(), 1000u);
    EXPECT_TRUE(j["passed"].get<bool>());
    for (const char* key : {"max_probability_deviation", "max_state_deviation", "max_count_deviation"}) {
        EXPECT_LT(j[key].get<double>(), 1e-10) << key;
    }
}

TEST(Cli, VerifyInjectedFaultFails) {
    const fs::path dir = scratch("verify_fault");
    std::ofstream(dir / "fault.cfg") << "inject-fault = true\nverify-cases = 20\n";
    const CliRun r = run_pcool("verify --config " + (dir / "fault.cfg").string() + " --out " + (dir / "out").string(), dir);
    EXPECT_EQ(r.code, 3);
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "verify_report.json"));
    EXPECT_FALSE(j["passed"].get<bool>());
    EXPECT_TRUE(j["first_failure"].contains("seed"));
    EXPECT_TRUE(j["first_failure"].contains("phases"));
}

TEST(Cli, ConfigErrorsExitOne) {
    const fs::path dir = scratch("config_error");
    std::ofstream(dir / "bad.cfg") << "n-t = 3.6\n# fine so far\nwarp = 9\n";
    const CliRun r = run_pcool("cool-closed --config " + (dir / "bad.cfg").string(), dir);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

    EXPECT_EQ(run_pcool("cool-closed --atoms zero", dir).code, 1);
    EXPECT_EQ(run_pcool("cool-closed --bogus 1", dir).code, 1);
    EXPECT_EQ(run_pcool("", dir).code, 1);
    EXPECT_EQ(run_pcool("cool-closed --n-t -2", dir).code, 1);
}

TEST(Cli, OutputsAreDeterministic) {
    const fs::path dir = scratch("determinism");
    for (const char* mode : {"cool-closed", "wigner", "verify"}) {
        const std::string extra = std::string(mode) == "verify" ? " --seed 17" : "";
        ASSERT_EQ(run_pcool(std::string(mode) + extra + " --out " + (dir / "a").string(), dir).code, 0);
        ASSERT_EQ(run_pcool(std::string(mode) + extra + " --out " + (dir / "b").string(), dir).code, 0);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const fs::path twin = dir / "b" / entry.path().filename();
        ASSERT_TRUE(fs::exists(twin)) << twin;
        EXPECT_EQ(slurp(entry.path()), slurp(twin)) << entry.path().filename();
        ++compared;
    }
    EXPECT_GE(compared, 10u);
}
