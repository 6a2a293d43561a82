#include "permkit/cli_driver.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <thread>

#include "permkit/io.hpp"
#include "permkit/report.hpp"

namespace permkit::cli {

namespace {

struct CommonOptions {
    std::string input;
    std::string format = "text";
    int threads = 0;  // 0: pick from hardware
    bool timings = false;
};

struct CheckOptions {
    double sweep_rmax = 1e3;
    int sweep_steps = 64;
    int series_degree = 8;
};

struct SampleOptions {
    double beta = 0.5;
    int64_t n = 1000000;
    uint64_t seed = 1;
    int alpha_grid = 20;
};

int pool_size(int requested, size_t jobs) {
    int t = requested > 0 ? requested
                          : static_cast<int>(std::min(4u, std::thread::hardware_concurrency()));
    if (t < 1) t = 1;
    return static_cast<int>(std::min<size_t>(static_cast<size_t>(t), std::max<size_t>(jobs, 1)));
}

/// Run one job per matrix in a bounded pool; results land by input index so
/// report order never depends on completion order.
template <typename Fn>
std::vector<Report> run_pool(const std::vector<MatrixEntry>& entries, int threads, Fn&& per_matrix) {
    std::vector<Report> results(entries.size());
    std::atomic<size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= entries.size()) return;
            Report entry;
            entry["label"] = entries[i].label;
            if (!entries[i].error.empty()) {
                entry["error"] = entries[i].error;
            } else {
                const Matrix& m = *entries[i].matrix;
                entry["n"] = m.dim();
                try {
                    per_matrix(i, m, entry);
                } catch (const NoConvergence& e) {
                    entry["error"] = std::string("NoConvergence: ") + e.what();
                } catch (const Error& e) {
                    entry["error"] = e.what();
                }
            }
            results[i] = std::move(entry);
        }
    };
    const int t = pool_size(threads, entries.size());
    std::vector<std::thread> pool;
    for (int i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return results;
}

void classify_one(const Matrix& m, Report& entry) {
    const Kernel k(m);
    entry["necessary"] = to_report(check_necessary(k));
    if (m.dim() == 3) {
        entry["classification"] = to_report(classify3(k));
    } else {
        // outside n = 3 the class dichotomy is not available; report the
        // individual membership flags only
        Report c;
        const auto w1 = is_class1(k);
        bool c2 = false;
        try {
            c2 = m.dim() <= 8 && is_class2(k).has_value();
        } catch (const SingularMatrix&) {
        }
        c["verdict"] = w1 && c2 ? "Both" : (w1 ? "Class1" : (c2 ? "Class2" : "Undetermined"));
        c["dichotomy_applies"] = false;
        entry["classification"] = std::move(c);
    }
    if (m.dim() <= 4) entry["independence"] = to_report(independence_report(k));
}

void check_one(const Matrix& m, const CheckOptions& opt, Report& entry) {
    const Kernel k(m);
    entry["necessary"] = to_report(check_necessary(k));
    entry["sweep"] = to_report(vere_jones_sweep(k, opt.sweep_rmax, opt.sweep_steps));
    if (opt.series_degree < 1) {
        entry["series"]["skipped"] = "series degree 0 requested";
    } else if (m.dim() > 4) {
        entry["series"]["skipped"] = "series enumeration is limited to n <= 4";
    } else {
        entry["series"] = to_report(log_det_series(k, opt.series_degree));
    }
    try {
        entry["certify"] = to_report(certify_all_beta(k, std::max(opt.series_degree, 1)));
    } catch (const DimensionError& e) {
        entry["certify"]["certified"] = false;
        entry["certify"]["failure"] = e.what();
    }
}

void sample_one(const Matrix& m, const SampleOptions& opt, size_t index, Report& entry) {
    const Kernel k(m);
    Report laplace = Report::array();
    const auto w1 = is_class1(k);
    if (!w1) {
        entry["class1"] = false;
        entry["note"] = "NotClass1: sampler requires a class-1 kernel";
        return;
    }
    entry["class1"] = true;
    // one documented stream per matrix so multi-matrix runs stay reproducible
    const uint64_t seed = opt.seed + 1000003ull * index;
    entry["seed"] = seed;
    const auto batch = sample_gaussian_squares(k, opt.beta, opt.n, seed);
    entry["moments"] = to_report(moment_report(batch));

    const int n = m.dim();
    for (int j = 0; j < opt.alpha_grid; ++j) {
        // log-spaced magnitudes cycling through the coordinate patterns
        // (all ones, then each unit direction)
        const double t = std::pow(10.0, -2.0 + 3.0 * j / std::max(opt.alpha_grid - 1, 1));
        std::vector<double> alpha(static_cast<size_t>(n), 0.0);
        const int pattern = j % (n + 1);
        if (pattern == 0) {
            std::fill(alpha.begin(), alpha.end(), t);
        } else {
            alpha[static_cast<size_t>(pattern - 1)] = t;
        }
        const auto est = empirical_laplace(batch, alpha);
        Report pt = to_report(est);
        pt["alpha"] = alpha;
        pt["z"] = (est.estimate - est.analytic) / std::max(est.std_error, 1e-300);
        laplace.push_back(std::move(pt));
    }
    entry["laplace"] = std::move(laplace);
}

void metric_one(const Matrix& m, Report& entry) {
    const Kernel k(m);
    try {
        entry["metric"] = to_report(metric_table(k));
    } catch (const NegativePairProduct& e) {
        entry["note"] = std::string("NegativePairProduct: ") + e.what();
        return;
    }
    try {
        entry["symmetrized_psd"] = symmetrized_psd_check(k);
    } catch (const Error& e) {
        entry["note"] = e.what();
    }
}

Report summarize(const std::string& command, const std::vector<Report>& matrices) {
    Report run;
    run["command"] = command;
    run["format_version"] = 1;
    run["matrices"] = matrices;
    Report summary;
    summary["count"] = matrices.size();
    Report verdicts = Report::object();
    for (const auto& m : matrices) {
        if (!m.contains("classification")) continue;
        const std::string v = m["classification"]["verdict"].get<std::string>();
        verdicts[v] = verdicts.value(v, 0) + 1;
    }
    if (!verdicts.empty()) summary["verdicts"] = std::move(verdicts);
    run["summary"] = std::move(summary);
    return run;
}

void emit(const Report& run, const CommonOptions& common, std::ostream& out) {
    if (common.format == "json")
        out << run.dump(2) << "\n";
    else
        out << render_text(run);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"analysis toolkit for permanental kernels"};
    app.require_subcommand(1);

    CommonOptions common;
    CheckOptions check_opt;
    SampleOptions sample_opt;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", common.input, "matrix file (plain text or JSON)")->required();
        cmd->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        cmd->add_option("--threads", common.threads, "worker pool size")
            ->envname("PERMKIT_THREADS");
        cmd->add_flag("--timings", common.timings, "include per-matrix timings");
    };

    CLI::App* classify = app.add_subcommand("classify", "class-1/class-2 kernel classification");
    add_common(classify);

    CLI::App* check = app.add_subcommand("check", "necessary conditions and certificates");
    add_common(check);
    check->add_option("--sweep-rmax", check_opt.sweep_rmax, "resolvent sweep upper bound")
        ->capture_default_str();
    check->add_option("--sweep-steps", check_opt.sweep_steps, "geometric grid points")
        ->capture_default_str();
    check->add_option("--series-degree", check_opt.series_degree,
                      "series truncation degree (0 skips)")
        ->capture_default_str();

    CLI::App* sample = app.add_subcommand("sample", "Monte Carlo validation of class-1 kernels");
    add_common(sample);
    sample->add_option("--beta", sample_opt.beta, "exponent, a positive half-integer")
        ->capture_default_str();
    sample->add_option("--n", sample_opt.n, "samples per matrix")->capture_default_str();
    sample->add_option("--seed", sample_opt.seed, "base RNG seed")->capture_default_str();
    sample->add_option("--alpha-grid", sample_opt.alpha_grid, "Laplace grid size")
        ->capture_default_str();

    CLI::App* metric = app.add_subcommand("metric", "distance tables and triangle slack");
    add_common(metric);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (sample->parsed()) {
        const double two_beta = 2.0 * sample_opt.beta;
        if (sample_opt.beta <= 0.0 || std::abs(two_beta - std::lround(two_beta)) > 1e-9) {
            err << "usage error: BadBeta: --beta must be a positive half-integer\n";
            return 2;
        }
    }

    MatrixFile file;
    try {
        file = parse_matrix_file(common.input);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    }

    const auto started = std::chrono::steady_clock::now();
    std::vector<Report> matrices;
    std::string command;
    if (classify->parsed()) {
        command = "classify";
        matrices = run_pool(file.entries, common.threads,
                            [&](size_t, const Matrix& m, Report& e) { classify_one(m, e); });
    } else if (check->parsed()) {
        command = "check";
        matrices = run_pool(file.entries, common.threads, [&](size_t, const Matrix& m, Report& e) {
            check_one(m, check_opt, e);
        });
    } else if (sample->parsed()) {
        command = "sample";
        // per-matrix seeds derive from the base seed and input position
        matrices = run_pool(file.entries, common.threads, [&](size_t i, const Matrix& m, Report& e) {
            sample_one(m, sample_opt, i, e);
        });
    } else {
        command = "metric";
        matrices = run_pool(file.entries, common.threads,
                            [&](size_t, const Matrix& m, Report& e) { metric_one(m, e); });
    }

    Report run = summarize(command, matrices);
    if (common.timings) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        run["elapsed_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }
    emit(run, common, out);

    for (const auto& m : matrices)
        if (m.contains("error") &&
            m["error"].get<std::string>().rfind("NoConvergence", 0) == 0)
            return 3;
    return 0;
}

}  // namespace permkit::cli
