#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "meanset/meanset.hpp"

// End-to-end checks of the command-line binary (path injected by the build).
// The CLI is a thin adapter: its outputs must be byte-identical to direct
// library calls, and identical across reruns.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MEANSET_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    EXPECT_NE(pipe, nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        res.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

TEST(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("--bogus").exit_code, 2);
    EXPECT_EQ(run_cli("estimate").exit_code, 2);  // missing required --data
    EXPECT_EQ(run_cli("no_such_command").exit_code, 2);
}

TEST(CliTest, HelpExitsZero) {
    const auto res = run_cli("--help");
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_NE(res.out.find("estimate"), std::string::npos);
    EXPECT_NE(res.out.find("median1d"), std::string::npos);
}

TEST(CliTest, MedianGoldenOutput) {
    const auto data = write_file("med_data.csv", "1\n2\n3\n");
    const auto res = run_cli("median1d --data " + data);
    EXPECT_EQ(res.exit_code, 0);
    const nlohmann::json expect = meanset::median_interval({1.0, 2.0, 3.0}, 0.0);
    EXPECT_EQ(res.out, expect.dump(2) + "\n");
    // The values themselves: a point interval at 2 (up to the membership
    // slack, which widens each side by about slack / |slope|) with m1 = 2/3.
    const auto parsed = nlohmann::json::parse(res.out);
    EXPECT_NEAR(parsed.at("u").get<double>(), 2.0, 1e-10);
    EXPECT_NEAR(parsed.at("v").get<double>(), 2.0, 1e-10);
    EXPECT_NEAR(parsed.at("m1").get<double>(), 2.0 / 3.0, 1e-15);
}

TEST(CliTest, MedianTwoStepMatchesLibrary) {
    const auto data = write_file("med2_data.csv", "0.5\n1.5\n2\n2\n3.25\n4\n5\n5\n6.5\n7\n");
    const auto res = run_cli("median1d --data " + data + " --two-step --delta 0.25");
    EXPECT_EQ(res.exit_code, 0);
    const nlohmann::json expect = meanset::two_step_median_1d(
        {0.5, 1.5, 2, 2, 3.25, 4, 5, 5, 6.5, 7}, 0.25, meanset::Sigma1Mode::exact);
    EXPECT_EQ(res.out, expect.dump(2) + "\n");
    EXPECT_EQ(run_cli("median1d --data " + data + " --two-step --sigma-mode junk").exit_code,
              3);
}

TEST(CliTest, EstimateMatchesLibraryBytes) {
    const auto space = write_file("est_space.csv", "0,1\n1,0\n");
    const auto data = write_file("est_data.csv", "0\n0\n1\n0\n1\n0\n");
    const auto res = run_cli("estimate --space " + space + " --data " + data + " --p 2");
    EXPECT_EQ(res.exit_code, 0);

    const meanset::FiniteMatrix sp({{0, 1}, {1, 0}});
    const auto mu = meanset::EmpiricalMeasure::uniform(sp, {0, 0, 1, 0, 1, 0});
    const nlohmann::json expect = meanset::two_step_estimate(mu, {0, 1}, 2.0, 0.5);
    EXPECT_EQ(res.out, expect.dump(2) + "\n");
}

TEST(CliTest, EstimateFixedEpsilonAndRate) {
    const auto space = write_file("eps_space.csv", "0,1\n1,0\n");
    const auto data = write_file("eps_data.csv", "0\n1\n0\n");
    const auto fixed = run_cli("estimate --space " + space + " --data " + data +
                               " --epsilon 0.5 --p 1");
    EXPECT_EQ(fixed.exit_code, 0);
    const auto parsed = nlohmann::json::parse(fixed.out);
    ASSERT_TRUE(parsed.contains("relaxed_mean_set"));
    EXPECT_EQ(parsed.at("relaxed_mean_set").at("members").get<std::vector<int>>(),
              (std::vector<int>{0, 1}));

    const auto rated = run_cli("estimate --space " + space + " --data " + data +
                               " --rate lil:0.5 --p 1");
    EXPECT_EQ(rated.exit_code, 0);
    EXPECT_TRUE(nlohmann::json::parse(rated.out).contains("schedule"));
    // --epsilon and --rate together contradict each other.
    EXPECT_EQ(run_cli("estimate --space " + space + " --data " + data +
                      " --epsilon 0.5 --rate lil:1")
                  .exit_code,
              3);
}

TEST(CliTest, InputErrorsExitThree) {
    const auto space = write_file("bad_space.csv", "0,1\n1,0\n");
    const auto bad_id = write_file("bad_ids.csv", "0\n3\n");
    EXPECT_EQ(run_cli("estimate --space " + space + " --data " + bad_id).exit_code, 3);
    const auto data = write_file("ok_ids.csv", "0\n1\n");
    // Both space sources at once, or neither, is invalid.
    EXPECT_EQ(run_cli("estimate --space " + space + " --points " + space + " --data " + data)
                  .exit_code,
              3);
    EXPECT_EQ(run_cli("estimate --data " + data).exit_code, 3);
    EXPECT_EQ(run_cli("estimate --space /no/such/file.csv --data " + data).exit_code, 3);
    // Broken metric: asymmetric matrix.
    const auto asym = write_file("asym_space.csv", "0,1\n2,0\n");
    EXPECT_EQ(run_cli("estimate --space " + asym + " --data " + data).exit_code, 3);
    // Bad rate specs.
    EXPECT_EQ(run_cli("estimate --space " + space + " --data " + data + " --rate 1,2,3")
                  .exit_code,
              3);
    EXPECT_EQ(run_cli("estimate --space " + space + " --data " + data + " --rate bogus:1")
                  .exit_code,
              3);
}

TEST(CliTest, ResourceErrorsExitFour) {
    std::string coords, base;
    for (int i = 0; i < 70; ++i) {
        coords += std::to_string(i) + "\n";
        if (i < 65) {
            if (i > 0) base += ",";
            base += std::to_string(i);
        }
    }
    const auto points = write_file("big_points.csv", coords);
    const auto data = write_file("big_data.csv", "0\n1\n2\n");
    const auto res = run_cli("diag --points " + points + " --data " + data + " --base " + base +
                             " --draws 10");
    EXPECT_EQ(res.exit_code, 4);
}

TEST(CliTest, DiagReportsCoveringAndGaussian) {
    const auto space = write_file("diag_space.csv", "0,1\n1,0\n");
    const auto data = write_file("diag_data.csv", "0\n1\n");
    const auto res = run_cli("diag --space " + space + " --data " + data +
                             " --cover-eps 0.5 --radii 0.25,0.5,1 --base 0,1 --p 1 "
                             "--draws 2000 --seed 9");
    EXPECT_EQ(res.exit_code, 0);
    const auto parsed = nlohmann::json::parse(res.out);
    EXPECT_EQ(parsed.at("covering_number").get<int>(), 2);
    EXPECT_EQ(parsed.at("dudley").at("counts").get<std::vector<int>>(),
              (std::vector<int>{2, 2, 1}));
    EXPECT_GT(parsed.at("gaussian_sup").at("estimate").get<double>(), 0.5);
    EXPECT_EQ(parsed.at("seed").get<int>(), 9);
    // Reruns are byte-identical.
    const auto rerun = run_cli("diag --space " + space + " --data " + data +
                               " --cover-eps 0.5 --radii 0.25,0.5,1 --base 0,1 --p 1 "
                               "--draws 2000 --seed 9");
    EXPECT_EQ(res.out, rerun.out);
    // Restricting to the two off-identity pairs keeps the estimate but a
    // malformed pair list fails.
    const auto restricted = run_cli("diag --space " + space + " --data " + data +
                                    " --base 0,1 --pairs \"0,1;1,0\" --p 1 --draws 500");
    EXPECT_EQ(restricted.exit_code, 0);
    EXPECT_EQ(run_cli("diag --space " + space + " --data " + data +
                      " --base 0,1 --pairs 7,7 --p 1 --draws 10")
                  .exit_code,
              3);
    // diag with nothing to do is an input error.
    EXPECT_EQ(run_cli("diag --space " + space).exit_code, 3);
}

TEST(CliTest, ExperimentMatchesLibraryAndEchoesSeed) {
    const std::string config_text = R"({
  "model": {"kind": "two_point", "q": 0.75},
  "schedule": {"a": 0.0, "c": 1.0, "alpha": 0.5, "beta": 0.0, "gamma": 0.5},
  "n_grid": [50, 100],
  "trials": 25,
  "delta_h": 0.5,
  "seed": 11,
  "error_mode": "full_hausdorff"
})";
    const auto config = write_file("exp_config.json", config_text);
    const auto out_path = ::testing::TempDir() + "exp_out.csv";
    const auto res =
        run_cli("experiment --config " + config + " --threads 2 --out " + out_path);
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_EQ(res.out, "");  // CSV went to the file

    meanset::ExperimentConfig ec;
    ec.model = meanset::ModelSpec::of(meanset::ExampleModel::two_point(0.75));
    ec.schedule = meanset::RelaxationSchedule{0.0, 1.0, 0.5, 0.0, 0.5};
    ec.n_grid = {50, 100};
    ec.trials = 25;
    ec.delta_h = 0.5;
    ec.seed = 11;
    ec.error_mode = meanset::ErrorMode::full_hausdorff;
    const std::string expect = meanset::experiment_csv(meanset::run_experiment(ec));
    std::ifstream f(out_path, std::ios::binary);
    const std::string written((std::istreambuf_iterator<char>(f)),
                              std::istreambuf_iterator<char>());
    EXPECT_EQ(written, expect);

    // --seed overrides the config and shows up in the output rows.
    const auto reseeded = run_cli("experiment --config " + config + " --seed 99");
    EXPECT_EQ(reseeded.exit_code, 0);
    EXPECT_NE(reseeded.out.find(",99\n"), std::string::npos);
    EXPECT_EQ(reseeded.out.find(",11\n"), std::string::npos);

    // Stdout bytes equal the file bytes for the same run.
    const auto stdout_run = run_cli("experiment --config " + config + " --threads 2");
    EXPECT_EQ(stdout_run.out, expect);
    // And reruns reproduce byte for byte with a different thread count.
    const auto rerun = run_cli("experiment --config " + config + " --threads 5");
    EXPECT_EQ(rerun.out, expect);
}

TEST(CliTest, ExperimentRateOverrideAndPlot) {
    const std::string config_text = R"({
  "model": {"kind": "two_point", "q": 0.6},
  "schedule": "lil:1",
  "n_grid": [40],
  "trials": 10,
  "delta_h": 0.5,
  "seed": 3,
  "error_mode": "miss_true_set"
})";
    const auto config = write_file("exp_rate_config.json", config_text);
    const auto plain = run_cli("experiment --config " + config);
    EXPECT_EQ(plain.exit_code, 0);
    // Override with a pure-offset schedule: the c column flips to 0, a to 2.
    const auto overridden =
        run_cli("experiment --config " + config + " --rate 2,0,0,0,0");
    EXPECT_EQ(overridden.exit_code, 0);
    EXPECT_NE(overridden.out.find("40,0,2,0,0,0,"), std::string::npos) << overridden.out;

    const auto out_path = ::testing::TempDir() + "plot_exp.csv";
    const auto gp_path = ::testing::TempDir() + "plot_exp.gp";
    // --plot without --out cannot reference a CSV file.
    EXPECT_EQ(run_cli("experiment --config " + config + " --plot " + gp_path).exit_code, 3);
    const auto with_plot = run_cli("experiment --config " + config + " --out " + out_path +
                                   " --plot " + gp_path);
    EXPECT_EQ(with_plot.exit_code, 0);
    std::ifstream gp(gp_path);
    const std::string script((std::istreambuf_iterator<char>(gp)),
                             std::istreambuf_iterator<char>());
    EXPECT_NE(script.find(out_path), std::string::npos);

    // Malformed config JSON is an input error.
    const auto broken = write_file("broken.json", "{ not json");
    EXPECT_EQ(run_cli("experiment --config " + broken).exit_code, 3);
    const auto incomplete = write_file("incomplete.json", R"({"model": {"kind": "two_point"}})");
    EXPECT_EQ(run_cli("experiment --config " + incomplete).exit_code, 3);
}

TEST(CliTest, ScanRunsAndReproduces) {
    const std::string config_text = R"({
  "model": {"kind": "two_point", "q": 0.75},
  "family": {"a": 0.5, "c_scale": -1.0, "alpha": 0.5, "beta": 0.0, "gamma": 0.5},
  "c_grid": [0.5, 1.0, 1.5],
  "n_grid": [50, 100],
  "trials": 20,
  "delta_h": 0.5,
  "seed": 21,
  "error_mode": "full_hausdorff",
  "burn_in": 1
})";
    const auto config = write_file("scan_config.json", config_text);
    const auto a = run_cli("scan --config " + config + " --threads 2");
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out.rfind("n,c,a,alpha,beta,gamma,error_mode,trials,freq,ci_half,seed\n", 0),
              0u);
    EXPECT_NE(a.out.find("traj:full_hausdorff"), std::string::npos);
    const auto b = run_cli("scan --config " + config + " --threads 7");
    EXPECT_EQ(a.out, b.out);

    meanset::ScanConfig sc;
    sc.model = meanset::ModelSpec::of(meanset::ExampleModel::two_point(0.75));
    sc.family = meanset::RateFamily{0.5, -1.0, 0.5, 0.0, 0.5};
    sc.c_grid = {0.5, 1.0, 1.5};
    sc.n_grid = {50, 100};
    sc.trials = 20;
    sc.delta_h = 0.5;
    sc.seed = 21;
    sc.error_mode = meanset::ErrorMode::full_hausdorff;
    sc.burn_in = 1;
    EXPECT_EQ(a.out, meanset::scan_csv(meanset::threshold_scan(sc)));
}

TEST(CliTest, CustomModelConfigLoadsPoints) {
    const auto points = write_file("cust_points.csv", "0\n4\n");
    const std::string config_text = R"({
  "model": {"kind": "custom", "points": ")" + points + R"(", "probs": [0.8, 0.2], "p": 2},
  "schedule": "subopt:1",
  "n_grid": [30],
  "trials": 8,
  "delta_h": 0.5,
  "seed": 2,
  "error_mode": "extraneous_point"
})";
    const auto config = write_file("cust_config.json", config_text);
    const auto res = run_cli("experiment --config " + config);
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_NE(res.out.find("extraneous_point"), std::string::npos);
}

}  // namespace
