// mpfeas: feasibility analysis and simulation of periodic task systems on
// multiprocessor platforms.
//
// Exit codes: 0 feasible / pass, 1 infeasible / fail, 2 inconclusive,
// 64 usage or input error.

#include <mpfeas/analysis.hpp>
#include <mpfeas/campaign.hpp>
#include <mpfeas/io.hpp>
#include <mpfeas/verify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace mpfeas;

namespace {

constexpr int exit_usage = 64;

struct PolicyFlags {
    std::string policy;
    std::vector<std::size_t> order;

    void add(CLI::App* cmd) {
        cmd->add_option("--policy", policy, "Override the scheduler")
            ->check(CLI::IsMember({"rm", "dm", "edf", "explicit"}));
        cmd->add_option("--order", order, "Explicit priority order, 1-based task indices, highest first")
            ->delimiter(',');
    }

    Scenario load(const std::string& path) const {
        auto s = load_scenario(path);
        if (!policy.empty()) s.policy = make_policy(policy, order);
        else if (!order.empty()) s.policy = make_policy("explicit", order);
        return s;
    }
};

int outcome_code(Outcome o) {
    switch (o) {
        case Outcome::feasible: return 0;
        case Outcome::infeasible: return 1;
        case Outcome::inconclusive: return 2;
    }
    return 2;
}

int emit_verdict(const Verdict& v, const std::string& format) {
    if (format == "json") std::cout << verdict_to_json(v).dump(2) << "\n";
    else std::cout << format_verdict_text(v);
    return outcome_code(v.outcome);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feasibility analysis of periodic task systems on multiprocessors"};
    app.require_subcommand(1);
    std::string input;
    std::string format = "text";
    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    PolicyFlags pf;

    auto* analyze = app.add_subcommand("analyze", "Run the exact feasibility test for a task system");
    analyze->add_option("input", input, "Task-system JSON file")->required();
    pf.add(analyze);
    SelectOptions select;
    analyze->add_flag("--use-x", select.windows.use_x, "Check misses only from X_1 (asynchronous constrained)");
    analyze->add_flag("--per-task-windows", select.windows.per_task_windows,
                      "Check each task only in its own window (asynchronous constrained)");
    analyze->add_option("--edf-budget", select.edf_budget, "Hyperperiods to simulate under EDF")
        ->check(CLI::PositiveNumber);
    add_format(analyze);

    auto* simulate = app.add_subcommand("simulate", "Simulate the schedule and print the trace");
    simulate->add_option("input", input, "Task-system JSON file")->required();
    pf.add(simulate);
    std::optional<Time> from, to;
    bool snapshots = false;
    std::string trace_format = "text";
    simulate->add_option("--from", from, "First instant to print (default 0)");
    simulate->add_option("--to", to, "End of the simulated window (default O_max + 2P)");
    simulate->add_flag("--snapshots", snapshots, "Record the system state at every instant");
    simulate->add_option("--trace-format", trace_format, "Trace format")->check(CLI::IsMember({"text", "json"}));

    auto* bounds = app.add_subcommand("bounds", "Print hyperperiods and the S, Shat and X recurrences");
    bounds->add_option("input", input, "Task-system JSON file")->required();
    pf.add(bounds);
    add_format(bounds);

    auto* oracle = app.add_subcommand("oracle", "Brute-force feasibility by state repetition");
    oracle->add_option("input", input, "Task-system JSON file")->required();
    pf.add(oracle);
    std::int64_t max_windows = default_oracle_windows;
    oracle->add_option("--max-windows", max_windows, "Hyperperiods to simulate")->check(CLI::PositiveNumber);
    add_format(oracle);

    auto* predict = app.add_subcommand("predictability", "Check start and finish monotonicity on a job set");
    predict->add_option("input", input, "Job-set JSON file")->required();
    std::int64_t samples = 16;
    std::uint64_t seed = 1;
    predict->add_option("--samples", samples, "Random intermediate realizations")->check(CLI::PositiveNumber);
    predict->add_option("--seed", seed, "Sampling seed");
    add_format(predict);

    auto* campaign = app.add_subcommand("campaign", "Randomized property campaign");
    CampaignConfig cfg;
    std::vector<std::string> checks;
    std::string report_path;
    campaign->add_option("--instances", cfg.instances, "Random task systems")->check(CLI::NonNegativeNumber);
    campaign->add_option("--job-sets", cfg.job_sets, "Random job sets")->check(CLI::NonNegativeNumber);
    campaign->add_option("--seed", cfg.first_seed, "First seed");
    campaign->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
    campaign->add_option("--checks", checks, "Subset of checks")->delimiter(',');
    campaign->add_option("--max-windows", cfg.oracle_windows, "Oracle budget in hyperperiods")
        ->check(CLI::PositiveNumber);
    campaign->add_option("--samples", cfg.samples, "Realizations per job set")->check(CLI::PositiveNumber);
    campaign->add_option("--report", report_path, "JSON-lines report (default stdout)");
    campaign->add_option("--counterexamples", cfg.counterexample_dir, "Directory for shrunk counterexamples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*analyze) return emit_verdict(select_test(pf.load(input), select), format);

        if (*oracle) return emit_verdict(brute_force_feasibility(pf.load(input), max_windows), format);

        if (*bounds) {
            const auto b = periodicity_bounds(pf.load(input));
            if (format == "json") std::cout << bounds_to_json(b).dump(2) << "\n";
            else std::cout << format_bounds_text(b);
            return 0;
        }

        if (*simulate) {
            const auto s = pf.load(input);
            require_valid(s.tasks, s.platform);
            const Time end = to ? *to : max_offset(s.tasks) + 2 * hyperperiod(s.tasks);
            const Time begin = from.value_or(0);
            if (begin < 0 || end <= begin) throw std::invalid_argument("need 0 <= --from < --to");
            RunOptions opts;
            opts.snapshot_every_instant = snapshots;
            const auto trace = run(s, end, opts);
            if (trace_format == "json") std::cout << trace_to_json(trace, s, begin).dump(2) << "\n";
            else std::cout << format_trace_text(trace, s, begin);
            return 0;
        }

        if (*predict) {
            const auto spec = load_job_set(input);
            const auto report = predictability_harness(spec, samples, seed);
            const auto subset = availability_subset_check(spec, samples, seed);
            const bool pass = report.pass && subset.pass;
            if (format == "json") {
                std::cout << predictability_to_json(report, subset).dump(2) << "\n";
            } else {
                std::cout << "prefix  S-  S+  F-  F+\n";
                for (const auto& p : report.prefixes)
                    std::cout << p.prefix << "       " << p.start_min << "   " << p.start_max << "   " << p.finish_min
                              << "   " << p.finish_max << "\n";
                std::cout << "skipped prefixes (J+ infeasible): " << report.skipped_prefixes << "\n";
                std::cout << "predictability: " << (report.pass ? "pass" : "fail") << "\n";
                std::cout << "availability subset: " << (subset.pass ? "pass" : "fail") << "\n";
            }
            return pass ? 0 : 1;
        }

        if (*campaign) {
            if (!checks.empty()) {
                cfg.checks.clear();
                for (const auto& name : checks) {
                    const auto c = parse_check(name);
                    if (!c) throw std::invalid_argument("unknown check \"" + name + "\"");
                    cfg.checks.push_back(*c);
                }
            }
            const auto report = run_campaign(cfg);
            if (report_path.empty()) {
                write_jsonl(report, std::cout);
            } else {
                std::ofstream out(report_path);
                if (!out) throw std::invalid_argument("cannot write " + report_path);
                write_jsonl(report, out);
            }
            for (const auto& [c, t] : report.tally)
                std::cerr << to_string(c) << ": pass " << t.pass << ", fail " << t.fail << ", skip " << t.skip << "\n";
            return report.all_pass() ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << input << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_usage;
}
