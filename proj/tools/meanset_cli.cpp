// meanset — relaxed empirical Fréchet mean sets on finite metric spaces.
//
// Subcommands:
//   estimate    two-step adaptive mean-set estimate (or a single relaxed
//               solve with --epsilon / --rate) on a finite space
//   median1d    exact relaxed median intervals on the real line
//   experiment  Monte Carlo error-frequency sweep over sample sizes
//   scan        the same sweep over the free coefficient of a rate family
//   diag        covering numbers, Dudley entropy, Gaussian-sup estimates
//
// Exit codes: 0 success, 2 usage, 3 input validation, 4 resource cap,
// 5 numeric failure. Every subcommand is a thin adapter over the library;
// outputs are byte-identical to direct library calls.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "meanset/meanset.hpp"

namespace {

using nlohmann::json;

double parse_real(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw meanset::input_error(what + ": '" + text + "' is not a number");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& part : split(text, ',')) {
        out.push_back(parse_real(part, what));
    }
    return out;
}

// `--rate` grammar: either the five raw coefficients "a,c,alpha,beta,gamma"
// or a named constructor — lil:c, subopt:c, compact:diam,p,
// median:diam_f1,delta, mean:diam_f2,m2,delta.
meanset::RelaxationSchedule parse_rate_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        const std::vector<double> v = parse_real_list(spec, "--rate");
        if (v.size() != 5) {
            throw meanset::input_error("--rate: expected 5 coefficients a,c,alpha,beta,gamma, got " +
                                       std::to_string(v.size()));
        }
        meanset::RelaxationSchedule s;
        s.a = v[0];
        s.c = v[1];
        s.alpha = v[2];
        s.beta = v[3];
        s.gamma = v[4];
        return s;
    }
    const std::string name = spec.substr(0, colon);
    const std::vector<double> v = parse_real_list(spec.substr(colon + 1), "--rate " + name);
    auto want = [&](std::size_t k) {
        if (v.size() != k) {
            throw meanset::input_error("--rate " + name + ": expected " + std::to_string(k) +
                                       " argument(s), got " + std::to_string(v.size()));
        }
    };
    if (name == "lil") {
        want(1);
        return meanset::lil_rate(v[0]);
    }
    if (name == "subopt") {
        want(1);
        return meanset::suboptimal_rate(v[0]);
    }
    if (name == "compact") {
        want(2);
        return meanset::compact_space_rate(v[0], v[1]);
    }
    if (name == "median") {
        want(2);
        return meanset::median_rate(v[0], v[1]);
    }
    if (name == "mean") {
        want(3);
        return meanset::mean_rate(v[0], v[1], v[2]);
    }
    throw meanset::input_error("--rate: unknown family '" + name +
                               "' (expected lil, subopt, compact, median or mean)");
}

std::unique_ptr<meanset::MetricSpace> load_space(const std::string& matrix_path,
                                                 const std::string& points_path) {
    if (matrix_path.empty() == points_path.empty()) {
        throw meanset::input_error("exactly one of --space (distance matrix CSV) and "
                                   "--points (coordinate CSV) is required");
    }
    if (!matrix_path.empty()) {
        return std::make_unique<meanset::FiniteMatrix>(meanset::FiniteMatrix::from_csv(matrix_path));
    }
    return std::make_unique<meanset::EuclideanPoints>(meanset::EuclideanPoints::from_csv(points_path));
}

std::vector<double> load_column(const std::string& path) {
    const auto rows = meanset::read_numeric_csv(path);
    std::vector<double> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != 1) {
            throw meanset::input_error(path + ": expected a single column, row " +
                                       std::to_string(r + 1) + " has " +
                                       std::to_string(rows[r].size()) + " fields");
        }
        out.push_back(rows[r][0]);
    }
    if (out.empty()) {
        throw meanset::input_error(path + ": no data rows");
    }
    return out;
}

std::vector<meanset::PointId> load_id_column(const std::string& path, std::size_t space_size) {
    std::vector<meanset::PointId> ids;
    for (double v : load_column(path)) {
        if (v < 0 || v != std::floor(v) || v >= static_cast<double>(space_size)) {
            throw meanset::input_error(path + ": entry " + std::to_string(v) +
                                       " is not a point id in [0, " + std::to_string(space_size) +
                                       ")");
        }
        ids.push_back(static_cast<meanset::PointId>(v));
    }
    return ids;
}

std::vector<meanset::PointId> parse_id_list(const std::string& text, std::size_t space_size,
                                            const std::string& what) {
    std::vector<meanset::PointId> ids;
    for (double v : parse_real_list(text, what)) {
        if (v < 0 || v != std::floor(v) || v >= static_cast<double>(space_size)) {
            throw meanset::input_error(what + ": entry " + std::to_string(v) +
                                       " is not a point id in [0, " + std::to_string(space_size) +
                                       ")");
        }
        ids.push_back(static_cast<meanset::PointId>(v));
    }
    return ids;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw meanset::input_error("cannot open output file '" + out_path + "'");
    }
    f << content;
}

void write_json(const std::string& out_path, const json& j) {
    write_output(out_path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw meanset::input_error("cannot open config file '" + path + "'");
    }
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw meanset::input_error(path + ": " + e.what());
    }
}

// A parsed model plus ownership of any space it loaded from disk.
struct LoadedModel {
    std::unique_ptr<meanset::MetricSpace> space;
    meanset::ModelSpec spec;
};

LoadedModel parse_model(const json& j) {
    LoadedModel lm;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "two_point") {
        lm.spec = meanset::ModelSpec::of(meanset::ExampleModel::two_point(j.at("q").get<double>()));
    } else if (kind == "binary_square") {
        lm.spec = meanset::ModelSpec::of(meanset::ExampleModel::binary_square());
    } else if (kind == "arc") {
        const std::size_t grid = j.value("grid", std::size_t{2048});
        lm.spec = meanset::ModelSpec::of(meanset::ExampleModel::arc(j.at("p").get<double>(), grid));
    } else if (kind == "custom") {
        lm.space = load_space(j.value("space", ""), j.value("points", ""));
        meanset::CustomModel custom;
        custom.space = lm.space.get();
        custom.probs = j.at("probs").get<std::vector<double>>();
        if (j.contains("support")) {
            custom.support = j.at("support").get<std::vector<meanset::PointId>>();
        } else {
            custom.support.resize(custom.probs.size());
            for (std::size_t i = 0; i < custom.support.size(); ++i) custom.support[i] = i;
        }
        custom.p = j.value("p", 2.0);
        lm.spec = meanset::ModelSpec::of(std::move(custom));
    } else {
        throw meanset::input_error("model kind '" + kind +
                                   "' unknown (expected two_point, binary_square, arc or custom)");
    }
    return lm;
}

meanset::RelaxationSchedule parse_schedule(const json& j) {
    if (j.is_string()) {
        return parse_rate_spec(j.get<std::string>());
    }
    return j.get<meanset::RelaxationSchedule>();
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string space_path, points_path, data_path, candidates, rate_spec, out_path;
    double p = 2.0;
    double delta = 0.5;
    std::optional<double> epsilon;
};

int run_estimate(const EstimateArgs& args) {
    const auto space = load_space(args.space_path, args.points_path);
    const auto sample_ids = load_id_column(args.data_path, space->size());
    auto mu = meanset::EmpiricalMeasure::uniform(*space, sample_ids);

    std::vector<meanset::PointId> candidates;
    if (args.candidates.empty()) {
        candidates.resize(space->size());
        for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
    } else {
        candidates = parse_id_list(args.candidates, space->size(), "--candidates");
    }

    json out;
    if (args.epsilon.has_value() || !args.rate_spec.empty()) {
        if (args.epsilon.has_value() && !args.rate_spec.empty()) {
            throw meanset::input_error("--epsilon and --rate are mutually exclusive");
        }
        meanset::FrechetParams params;
        params.p = args.p;
        params.candidates = candidates;
        if (args.epsilon.has_value()) {
            params.epsilon = *args.epsilon;
        } else {
            const auto schedule = parse_rate_spec(args.rate_spec);
            params.epsilon = schedule.evaluate(mu.sample_size());
            out["schedule"] = schedule;
        }
        out["relaxed_mean_set"] = meanset::relaxed_mean_set(mu, params);
    } else {
        out = meanset::two_step_estimate(mu, candidates, args.p, args.delta);
    }
    write_json(args.out_path, out);
    return 0;
}

struct Median1dArgs {
    std::string data_path, sigma_mode = "exact", out_path;
    double epsilon = 0.0;
    double delta = 0.5;
    bool two_step = false;
};

int run_median1d(const Median1dArgs& args) {
    const std::vector<double> samples = load_column(args.data_path);
    json out;
    if (args.two_step) {
        meanset::Sigma1Mode mode;
        if (args.sigma_mode == "exact") {
            mode = meanset::Sigma1Mode::exact;
        } else if (args.sigma_mode == "diameter") {
            mode = meanset::Sigma1Mode::diameter_bound;
        } else {
            throw meanset::input_error("--sigma-mode must be 'exact' or 'diameter', got '" +
                                       args.sigma_mode + "'");
        }
        out = meanset::two_step_median_1d(samples, args.delta, mode);
    } else {
        out = meanset::median_interval(samples, args.epsilon);
    }
    write_json(args.out_path, out);
    return 0;
}

struct SweepArgs {
    std::string config_path, out_path, plot_path, rate_spec;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
};

int run_experiment_cmd(const SweepArgs& args) {
    const json j = read_json_file(args.config_path);
    LoadedModel lm = parse_model(j.at("model"));
    meanset::ExperimentConfig config;
    config.model = std::move(lm.spec);
    config.schedule = args.rate_spec.empty() ? parse_schedule(j.at("schedule"))
                                             : parse_rate_spec(args.rate_spec);
    config.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
    config.trials = j.at("trials").get<std::size_t>();
    config.delta_h = j.at("delta_h").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.error_mode = meanset::error_mode_from_string(j.at("error_mode").get<std::string>());
    config.threads = j.value("threads", std::size_t{0});
    if (args.seed) config.seed = *args.seed;
    if (args.threads) config.threads = *args.threads;

    const auto report = meanset::run_experiment(config);
    write_output(args.out_path, meanset::experiment_csv(report));
    if (!args.plot_path.empty()) {
        if (args.out_path.empty()) {
            throw meanset::input_error("--plot needs --out (the script references the CSV file)");
        }
        write_output(args.plot_path, meanset::experiment_plot_script(args.out_path));
    }
    return 0;
}

int run_scan_cmd(const SweepArgs& args) {
    const json j = read_json_file(args.config_path);
    LoadedModel lm = parse_model(j.at("model"));
    meanset::ScanConfig config;
    config.model = std::move(lm.spec);
    config.family = j.at("family").get<meanset::RateFamily>();
    config.c_grid = j.at("c_grid").get<std::vector<double>>();
    config.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
    config.trials = j.at("trials").get<std::size_t>();
    config.delta_h = j.at("delta_h").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.error_mode = meanset::error_mode_from_string(j.at("error_mode").get<std::string>());
    config.burn_in = j.value("burn_in", std::size_t{0});
    config.threads = j.value("threads", std::size_t{0});
    if (args.seed) config.seed = *args.seed;
    if (args.threads) config.threads = *args.threads;

    const auto result = meanset::threshold_scan(config);
    write_output(args.out_path, meanset::scan_csv(result));
    if (!args.plot_path.empty()) {
        if (args.out_path.empty()) {
            throw meanset::input_error("--plot needs --out (the script references the CSV file)");
        }
        write_output(args.plot_path, meanset::scan_plot_script(args.out_path, result.n_grid));
    }
    return 0;
}

struct DiagArgs {
    std::string space_path, points_path, radii, data_path, base, pairs, out_path;
    std::optional<double> cover_eps;
    double p = 2.0;
    std::size_t draws = 100000;
    std::uint64_t seed = 0;
};

int run_diag(const DiagArgs& args) {
    const auto space = load_space(args.space_path, args.points_path);
    json out;
    if (args.cover_eps.has_value()) {
        out["covering_number"] = meanset::covering_number(*space, *args.cover_eps);
        out["epsilon"] = *args.cover_eps;
    }
    if (!args.radii.empty()) {
        out["dudley"] = meanset::dudley_report(*space, parse_real_list(args.radii, "--radii"));
    }
    if (!args.base.empty()) {
        if (args.data_path.empty()) {
            throw meanset::input_error("--base needs --data (the sample defining the kernel)");
        }
        const auto sample_ids = load_id_column(args.data_path, space->size());
        auto mu = meanset::EmpiricalMeasure::uniform(*space, sample_ids);
        const auto base_set = parse_id_list(args.base, space->size(), "--base");
        const auto kernel = meanset::covariance_kernel(mu, base_set, args.p);

        // --pairs "i,j;k,l" restricts the sup; default is all ordered pairs.
        // Indices refer to positions in --base, not space ids.
        std::vector<std::size_t> restrict;
        if (args.pairs.empty()) {
            restrict = meanset::all_pairs(kernel);
        } else {
            for (const std::string& pair_text : split(args.pairs, ';')) {
                const auto ij = parse_real_list(pair_text, "--pairs");
                if (ij.size() != 2 || ij[0] < 0 || ij[1] < 0 ||
                    ij[0] != std::floor(ij[0]) || ij[1] != std::floor(ij[1]) ||
                    ij[0] >= static_cast<double>(base_set.size()) ||
                    ij[1] >= static_cast<double>(base_set.size())) {
                    throw meanset::input_error("--pairs: '" + pair_text +
                                               "' is not a base-index pair i,j");
                }
                restrict.push_back(kernel.pair_index(static_cast<std::size_t>(ij[0]),
                                                     static_cast<std::size_t>(ij[1])));
            }
        }
        meanset::CounterRng rng(meanset::derive_stream(args.seed, {0x67737570ULL /* gsup */}));
        out["gaussian_sup"] =
            meanset::gaussian_sup_estimate(kernel, restrict, args.draws, rng);
        out["base_set"] = kernel.base_set;
        out["seed"] = args.seed;
    }
    if (out.empty()) {
        throw meanset::input_error(
            "diag: nothing to do (pass --cover-eps, --radii, and/or --base)");
    }
    write_json(args.out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxed empirical Fréchet mean sets on finite metric spaces"};
    app.require_subcommand(1);

    EstimateArgs est;
    double est_eps = 0.0;
    auto* estimate = app.add_subcommand(
        "estimate", "two-step adaptive mean-set estimate on a finite space");
    estimate->add_option("--space", est.space_path, "distance-matrix CSV");
    estimate->add_option("--points", est.points_path, "point-coordinate CSV");
    estimate->add_option("--data", est.data_path, "sample CSV (one point id per row)")
        ->required();
    estimate->add_option("--p", est.p, "functional exponent (>= 1)");
    estimate->add_option("--delta", est.delta, "two-step safety margin");
    auto* eps_opt = estimate->add_option("--epsilon", est_eps,
                                         "solve a single relaxed set at this epsilon instead");
    estimate->add_option("--rate", est.rate_spec,
                         "solve a single relaxed set at epsilon from this schedule "
                         "(a,c,alpha,beta,gamma or lil:c, subopt:c, compact:diam,p, "
                         "median:diam,delta, mean:diam,m2,delta)");
    estimate->add_option("--candidates", est.candidates,
                         "comma-separated candidate ids (default: all points)");
    estimate->add_option("--out", est.out_path, "output JSON path (default: stdout)");

    Median1dArgs med;
    auto* median1d = app.add_subcommand("median1d", "exact relaxed median interval on the line");
    median1d->add_option("--data", med.data_path, "sample CSV (one real per row)")->required();
    median1d->add_option("--epsilon", med.epsilon, "relaxation level (default 0)");
    median1d->add_flag("--two-step", med.two_step, "run the two-step adaptive interval");
    median1d->add_option("--delta", med.delta, "two-step safety margin");
    median1d->add_option("--sigma-mode", med.sigma_mode,
                         "two-step dispersion: 'exact' or 'diameter'");
    median1d->add_option("--out", med.out_path, "output JSON path (default: stdout)");

    SweepArgs exp_args;
    std::uint64_t exp_seed = 0;
    std::size_t exp_threads = 0;
    auto* experiment =
        app.add_subcommand("experiment", "Monte Carlo error-frequency sweep over n");
    experiment->add_option("--config", exp_args.config_path, "experiment config JSON")
        ->required();
    experiment->add_option("--out", exp_args.out_path, "output CSV path (default: stdout)");
    experiment->add_option("--rate", exp_args.rate_spec, "override the config schedule");
    auto* exp_seed_opt =
        experiment->add_option("--seed", exp_seed, "override the config seed");
    auto* exp_threads_opt = experiment->add_option(
        "--threads", exp_threads, "worker threads (0 = hardware; results independent of it)");
    experiment->add_option("--plot", exp_args.plot_path,
                           "also write a gnuplot script referencing --out");

    SweepArgs scan_args;
    std::uint64_t scan_seed = 0;
    std::size_t scan_threads = 0;
    auto* scan = app.add_subcommand("scan", "error sweep over a rate family's coefficient");
    scan->add_option("--config", scan_args.config_path, "scan config JSON")->required();
    scan->add_option("--out", scan_args.out_path, "output CSV path (default: stdout)");
    auto* scan_seed_opt = scan->add_option("--seed", scan_seed, "override the config seed");
    auto* scan_threads_opt = scan->add_option(
        "--threads", scan_threads, "worker threads (0 = hardware; results independent of it)");
    scan->add_option("--plot", scan_args.plot_path,
                     "also write a gnuplot script referencing --out");

    DiagArgs diag;
    double diag_eps = 0.0;
    auto* diag_cmd = app.add_subcommand("diag", "covering/Dudley reports and Gaussian sup");
    diag_cmd->add_option("--space", diag.space_path, "distance-matrix CSV");
    diag_cmd->add_option("--points", diag.points_path, "point-coordinate CSV");
    auto* cover_opt =
        diag_cmd->add_option("--cover-eps", diag_eps, "report the covering number at this radius");
    diag_cmd->add_option("--radii", diag.radii, "comma-separated radii for the Dudley report");
    diag_cmd->add_option("--data", diag.data_path, "sample CSV for the covariance kernel");
    diag_cmd->add_option("--base", diag.base, "comma-separated base-point ids for the kernel");
    diag_cmd->add_option("--pairs", diag.pairs,
                         "semicolon-separated base-index pairs i,j restricting the sup");
    diag_cmd->add_option("--p", diag.p, "functional exponent");
    diag_cmd->add_option("--draws", diag.draws, "Gaussian Monte Carlo draws");
    diag_cmd->add_option("--seed", diag.seed, "Gaussian draw seed");
    diag_cmd->add_option("--out", diag.out_path, "output JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the error message
        return code == 0 ? 0 : 2;
    }

    try {
        if (estimate->parsed()) {
            if (eps_opt->count() > 0) est.epsilon = est_eps;
            return run_estimate(est);
        }
        if (median1d->parsed()) {
            return run_median1d(med);
        }
        if (experiment->parsed()) {
            if (exp_seed_opt->count() > 0) exp_args.seed = exp_seed;
            if (exp_threads_opt->count() > 0) exp_args.threads = exp_threads;
            return run_experiment_cmd(exp_args);
        }
        if (scan->parsed()) {
            if (scan_seed_opt->count() > 0) scan_args.seed = scan_seed;
            if (scan_threads_opt->count() > 0) scan_args.threads = scan_threads;
            return run_scan_cmd(scan_args);
        }
        if (diag_cmd->parsed()) {
            if (cover_opt->count() > 0) diag.cover_eps = diag_eps;
            return run_diag(diag);
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const meanset::input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 3;
    } catch (const meanset::resource_error& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 4;
    } catch (const meanset::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 3;
    }
}
