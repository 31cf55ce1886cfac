#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <hillspec/galerkin.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace hillspec;
using namespace hillspec::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hillspec_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream f(p);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

int run_exe(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(HILLSPEC_CLI_EXE) + " " + args + " > " + log.string() + " 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
    ExperimentConfig cfg;
    load_config_text("# comment\n[potential]\nspec = single-mode:c=0.05\n\n[spectral]\nK = 128 ; trailing\ns=-0.25\n",
                     cfg);
    EXPECT_EQ(cfg.potential, "single-mode:c=0.05");
    EXPECT_EQ(cfg.K, 128);
    EXPECT_EQ(cfg.s, -0.25);
}

TEST(Config, ErrorsNameLineAndField) {
    ExperimentConfig cfg;
    try {
        load_config_text("[spectral]\nK = 64\nK = sixty\n", cfg, "exp.cfg");
        FAIL() << "no error";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("exp.cfg:3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("spectral.K"), std::string::npos) << msg;
    }
    EXPECT_THROW(load_config_text("[spectral]\nbogus = 1\n", cfg), ConfigError);
    EXPECT_THROW(load_config_text("K = 1\n", cfg), ConfigError);
    EXPECT_THROW(load_config_text("[spectral\n", cfg), ConfigError);
    EXPECT_THROW(load_config_text("[spectral]\nK\n", cfg), ConfigError);
}

TEST(Config, HashIsDeterministicAndIgnoresOutput) {
    ExperimentConfig a, b;
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(a.hash().size(), 16u);
    b.out = "/elsewhere";
    EXPECT_EQ(a.hash(), b.hash());
    b.K = 65;
    EXPECT_NE(a.hash(), b.hash());
}

TEST(Config, PotentialSpecs) {
    EXPECT_TRUE(parse_potential("zero", 0.0, Weight{}, 1).seq.empty());
    const Potential sm = parse_potential("single-mode:c=0.05", 0.0, Weight{}, 1);
    EXPECT_EQ(sm[2], cplx(0.05));
    EXPECT_EQ(sm[-2], cplx(0.05));
    const Potential in = parse_potential("inline:1=0.1+0.2i,3=-0.05", 0.0, Weight{}, 1);
    EXPECT_EQ(in[2], cplx(0.1, 0.2));
    EXPECT_EQ(in[-2], cplx(0.1, -0.2));
    EXPECT_EQ(in[6], cplx(-0.05));
    const Potential pl1 = parse_potential("power-law:amp=0.1,expo=-1,jmax=8", 0.0, Weight{}, 5);
    const Potential pl2 = parse_potential("power-law:amp=0.1,expo=-1,jmax=8", 0.0, Weight{}, 5);
    EXPECT_TRUE(pl1.seq.same_entries(pl2.seq));
    EXPECT_EQ(parse_complex("1-2i"), cplx(1.0, -2.0));
    EXPECT_EQ(parse_complex("-3.5"), cplx(-3.5, 0.0));
    EXPECT_THROW(parse_potential("wobbly", 0.0, Weight{}, 1), ConfigError);
    EXPECT_THROW(parse_weight("poly:eps=1"), ConfigError);
    EXPECT_NO_THROW(parse_weight("poly:a=1,eps=0.01"));
}

TEST(Csv, Quoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(std::stod(csv_number(0.1)), 0.1);
    EXPECT_EQ(std::stod(csv_number(kPi)), kPi);
}

TEST(Commands, ZeroPotentialSpectrumTable) {
    ExperimentConfig cfg;
    cfg.potential = "zero";
    cfg.K = 64;
    cfg.out = scratch("zero").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_spectrum(cfg, log), kPass);
    const std::string text = slurp(fs::path(cfg.out) / "spectrum.csv");
    EXPECT_EQ(text.rfind("# hillspec ", 0), 0u);
    EXPECT_NE(text.find(cfg.hash()), std::string::npos);
    const auto rows = csv_rows(fs::path(cfg.out) / "spectrum.csv");
    ASSERT_GT(rows.size(), 10u);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double n = std::stod(rows[i][0]);
        const double want = n * n * kPi * kPi;
        EXPECT_NEAR(std::stod(rows[i][1]), want, 1e-9 * want);
        EXPECT_NEAR(std::stod(rows[i][3]), want, 1e-9 * want);
    }
    EXPECT_TRUE(fs::exists(fs::path(cfg.out) / "spectrum.json"));
}

TEST(Commands, ByteIdenticalReruns) {
    ExperimentConfig cfg;
    cfg.potential = "power-law:amp=0.1,expo=-1,jmax=6";
    cfg.K = 32;
    cfg.seed = 42;
    cfg.out = scratch("rerun").string();
    const std::vector<std::string> files{"spectrum.csv", "spectrum.json", "flow.csv", "flow.json"};
    std::vector<std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
        std::ostringstream log;
        ASSERT_EQ(cmd_spectrum(cfg, log), kPass);
        ASSERT_EQ(cmd_flow(cfg, log), kPass);
        for (std::size_t i = 0; i < files.size(); ++i) {
            const std::string text = slurp(fs::path(cfg.out) / files[i]);
            if (pass == 0)
                first.push_back(text);
            else
                EXPECT_EQ(text, first[i]) << files[i];
        }
    }
}

TEST(Commands, ZeroPotentialReduction) {
    ExperimentConfig cfg;
    cfg.potential = "zero";
    cfg.m = 0.005;
    cfg.n_from = 1;
    cfg.n_to = 6;
    cfg.out = scratch("reduce_zero").string();
    std::ostringstream log;
    EXPECT_EQ(cmd_reduce(cfg, log), kPass) << log.str();
}

TEST(Commands, BelowThresholdRowsStillPass) {
    ExperimentConfig cfg;
    cfg.potential = "single-mode:c=0.2";
    cfg.n_from = 1;
    cfg.n_to = 3;
    cfg.out = scratch("reduce_below").string();
    std::ostringstream log;
    EXPECT_EQ(cmd_reduce(cfg, log), kPass) << log.str();
    EXPECT_NE(slurp(fs::path(cfg.out) / "reduce.csv").find("below-threshold"), std::string::npos);
}

TEST(Commands, FlowAtZeroTimeEchoesInput) {
    ExperimentConfig cfg;
    cfg.potential = "power-law:amp=0.1,expo=-1,jmax=6";
    cfg.t = 0.0;
    cfg.out = scratch("flow0").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_flow(cfg, log), kPass);
    EXPECT_TRUE(fs::exists(fs::path(cfg.out) / "flow.json"));
}

TEST(Commands, AiryDemoCsv) {
    ExperimentConfig cfg;
    cfg.suite = "airy-demo";
    cfg.s = -0.25;
    cfg.out = scratch("airy").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_verify(cfg, log), kPass) << log.str();
    const auto rows = csv_rows(fs::path(cfg.out) / "airy.csv");
    ASSERT_EQ(rows.front(), (std::vector<std::string>{"t", "sup_norm_distance", "max_component_distance"}));
    EXPECT_EQ(rows.size(), static_cast<std::size_t>(cfg.airy_points) + 1);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][1]), 0.1);
}

TEST(Commands, PerturbedGapTableFailsSandwich) {
    const fs::path dir = scratch("sandwich");
    const fs::path table = dir / "gaps.csv";
    {
        std::ofstream f(table);
        f << "n,gamma_re,gamma_im\n";
        for (int n = 21; n <= 30; ++n) f << n << ",1.0,0\n";
    }
    ExperimentConfig cfg;
    cfg.potential = "power-law:amp=0.005,expo=-1,jmax=40";
    cfg.m = 0.005;
    cfg.suite = "sandwich";
    cfg.out = dir.string();
    std::ostringstream log;
    EXPECT_EQ(cmd_verify(cfg, log), kPass) << log.str();
    cfg.gap_table = table.string();
    std::ostringstream log2;
    EXPECT_EQ(cmd_verify(cfg, log2), kAssertionFailed);
    EXPECT_NE(log2.str().find("sandwich"), std::string::npos);
    const std::string summary = slurp(dir / "verify.json");
    const std::size_t at = summary.find("\"failed_criteria\"");
    ASSERT_NE(at, std::string::npos);
    EXPECT_NE(summary.find("\"sandwich\"", at), std::string::npos);
}

TEST(Executable, ExitCodes) {
    const fs::path dir = scratch("exe");
    const fs::path log = dir / "log.txt";
    EXPECT_EQ(run_exe("spectrum --potential zero --K 32 --out " + dir.string(), log), 0);
    EXPECT_EQ(run_exe("spectrum --K notanumber --out " + dir.string(), log), 2);
    EXPECT_NE(slurp(log).find("spectral.K"), std::string::npos);
    {
        std::ofstream f(dir / "bad.cfg");
        f << "[spectral]\nK = 64\nweight = sideways\n";
    }
    EXPECT_EQ(run_exe("spectrum --config " + (dir / "bad.cfg").string() + " --out " + dir.string(), log), 2);
    EXPECT_NE(slurp(log).find("spectral.weight"), std::string::npos);
    EXPECT_EQ(run_exe("bogus-command", log), 2);
    EXPECT_EQ(run_exe("spectrum --config " + (dir / "missing.cfg").string(), log), 2);
}

TEST(Executable, FlagsOverrideConfig) {
    const fs::path dir = scratch("override");
    {
        std::ofstream f(dir / "exp.cfg");
        f << "[potential]\nspec = zero\n[spectral]\nK = 24\n";
    }
    ASSERT_EQ(run_exe("spectrum --config " + (dir / "exp.cfg").string() + " --K 20 --out " + dir.string(),
                      dir / "log.txt"),
              0);
    EXPECT_NE(slurp(dir / "spectrum.json").find("\"K\": 20"), std::string::npos);
}
