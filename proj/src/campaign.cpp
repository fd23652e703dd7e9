#include <mpfeas/campaign.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace mpfeas {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::vector<Rational> random_rate_row(std::mt19937_64& rng, std::size_t m) {
    std::vector<Rational> row(m);
    for (auto& r : row) r = Rational(uniform(rng, 0, 3));
    if (std::all_of(row.begin(), row.end(), [](const Rational& r) { return r == Rational(0); }))
        row[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(m) - 1))] = Rational(uniform(rng, 1, 3));
    return row;
}

}  // namespace

Scenario random_instance(std::uint64_t seed) {
    auto rng = seeded(seed, 1);
    Scenario s;
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 4));
    const bool synchronous = uniform(rng, 0, 2) == 0;
    const Time common = uniform(rng, 0, 1) ? 0 : uniform(rng, 0, 8);
    const auto deadlines = uniform(rng, 0, 3);  // 0 implicit, 1 constrained, else arbitrary
    const bool light = uniform(rng, 0, 1) == 0;
    for (std::size_t i = 0; i < n; ++i) {
        Task t;
        t.period = uniform(rng, 1, 6);
        t.wcet = light ? uniform(rng, 1, std::max<Time>(1, t.period / 3)) : uniform(rng, 1, t.period);
        t.deadline = deadlines == 0 ? t.period : deadlines == 1 ? uniform(rng, 1, t.period) : uniform(rng, 1, 2 * t.period);
        t.offset = synchronous ? common : uniform(rng, 0, 8);
        s.tasks.push_back(t);
    }
    const auto m = static_cast<std::size_t>(uniform(rng, 1, 3));
    switch (uniform(rng, 0, 2)) {
        case 0: s.platform = Platform::identical(n, m); break;
        case 1: {
            std::vector<Rational> speeds(m);
            for (auto& v : speeds) v = Rational(uniform(rng, 1, 3));
            s.platform = Platform::uniform(n, std::move(speeds));
            break;
        }
        default:
            s.platform.processors = m;
            for (std::size_t i = 0; i < n; ++i) s.platform.rates.push_back(random_rate_row(rng, m));
    }
    switch (uniform(rng, 0, 3)) {
        case 0: s.policy = PriorityPolicy::rm(); break;
        case 1: s.policy = PriorityPolicy::dm(); break;
        case 2: s.policy = PriorityPolicy::edf(); break;
        default: {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng);
            s.policy = PriorityPolicy::explicit_order(std::move(order));
        }
    }
    return s;
}

JobSetSpec random_job_set(std::uint64_t seed) {
    auto rng = seeded(seed, 2);
    JobSetSpec spec;
    const auto jobs = static_cast<std::size_t>(uniform(rng, 1, 5));
    spec.platform.processors = static_cast<std::size_t>(uniform(rng, 1, 3));
    const bool halves = uniform(rng, 0, 1) == 0;
    for (std::size_t i = 0; i < jobs; ++i) {
        JobSpec j;
        j.release = uniform(rng, 0, 6);
        const std::int64_t q = halves ? 2 : 1;
        const auto lo = uniform(rng, q, 4 * q);
        const auto hi = lo + uniform(rng, 0, 3 * q);
        j.min_requirement = Rational(lo, q);
        j.max_requirement = Rational(hi, q);
        j.deadline = j.release + ceil_div(hi, q) + uniform(rng, 0, 8);
        spec.jobs.push_back(j);
        spec.platform.rates.push_back(random_rate_row(rng, spec.platform.processors));
    }
    return spec;
}

const char* to_string(Check c) {
    switch (c) {
        case Check::oracle_equivalence: return "oracle_equivalence";
        case Check::window_equivalence: return "window_equivalence";
        case Check::periodicity_onset: return "periodicity_onset";
        case Check::sync_origin: return "sync_origin";
        case Check::execution_monotonicity: return "execution_monotonicity";
        case Check::state_order: return "state_order";
        case Check::replay: return "replay";
        case Check::predictability: return "predictability";
        case Check::availability_subset: return "availability_subset";
    }
    return "?";
}

std::vector<Check> all_checks() {
    return {Check::oracle_equivalence,     Check::window_equivalence, Check::periodicity_onset,
            Check::sync_origin,            Check::execution_monotonicity, Check::state_order,
            Check::replay,                 Check::predictability,     Check::availability_subset};
}

std::optional<Check> parse_check(std::string_view name) {
    for (auto c : all_checks())
        if (name == to_string(c)) return c;
    return std::nullopt;
}

bool is_job_set_check(Check c) { return c == Check::predictability || c == Check::availability_subset; }

const char* to_string(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::pass: return "pass";
        case CheckOutcome::fail: return "fail";
        case CheckOutcome::skip: return "skip";
    }
    return "?";
}

namespace {

CheckResult result(Check c, CheckOutcome o, std::string detail = {}) { return {c, o, std::move(detail)}; }

bool feasible(const Verdict& v) { return v.outcome == Outcome::feasible; }

bool constrained(const Scenario& s) { return deadline_class(s.tasks) != DeadlineClass::arbitrary; }

// First instant of the periodic regime promised for task-level policies.
Time periodic_onset(const Scenario& s) {
    const auto b = periodicity_bounds(s);
    return constrained(s) ? b.S.back() : b.Shat.back();
}

}  // namespace

CheckResult check_oracle_equivalence(const Scenario& s, const Verdict& oracle) {
    constexpr auto c = Check::oracle_equivalence;
    if (oracle.outcome == Outcome::inconclusive) return result(c, CheckOutcome::skip, "oracle inconclusive");

    std::vector<Verdict> verdicts;
    const bool sync = is_synchronous(s.tasks);
    if (sync && constrained(s)) verdicts.push_back(fp_test_sync_constrained(s));
    if (s.policy.task_level()) {
        if (sync) verdicts.push_back(fp_test_sync_arbitrary(s));
        if (constrained(s)) verdicts.push_back(fp_test_async_constrained(s));
        verdicts.push_back(fp_test_async_arbitrary(s));
    } else {
        verdicts.push_back(edf_test(s));
    }
    std::string compared;
    for (const auto& v : verdicts) {
        if (v.outcome == Outcome::inconclusive) continue;
        if (v.outcome != oracle.outcome)
            return result(c, CheckOutcome::fail,
                          std::string(to_string(v.test)) + " says " + to_string(v.outcome) + ", oracle says " +
                              to_string(oracle.outcome));
        compared += compared.empty() ? "" : ",";
        compared += to_string(v.test);
    }
    if (compared.empty()) return result(c, CheckOutcome::skip, "no conclusive exact test");
    return result(c, CheckOutcome::pass, std::string(to_string(oracle.outcome)) + " by " + compared);
}

CheckResult check_window_equivalence(const Scenario& s) {
    constexpr auto c = Check::window_equivalence;
    if (!s.policy.task_level() || !constrained(s)) return result(c, CheckOutcome::skip, "not task-level constrained");
    const auto base = fp_test_async_constrained(s).outcome;
    for (int mask = 1; mask < 4; ++mask) {
        const AsyncConstrainedOptions o{(mask & 1) != 0, (mask & 2) != 0};
        const auto v = fp_test_async_constrained(s, o).outcome;
        if (v != base)
            return result(c, CheckOutcome::fail,
                          std::string("use_x=") + (o.use_x ? "1" : "0") + " per_task=" + (o.per_task_windows ? "1" : "0") +
                              " gives " + to_string(v) + ", default gives " + to_string(base));
    }
    return result(c, CheckOutcome::pass, to_string(base));
}

CheckResult check_periodicity_onset(const Scenario& s, const Verdict& oracle) {
    constexpr auto c = Check::periodicity_onset;
    if (!s.policy.task_level()) return result(c, CheckOutcome::skip, "not task-level");
    if (!feasible(oracle)) return result(c, CheckOutcome::skip, "not known feasible");
    const Time p = hyperperiod(s.tasks);
    const Time onset = periodic_onset(s);
    RunOptions opts;
    opts.record_events = false;
    const auto trace = run(s, onset + 2 * p, opts);
    const auto check = check_schedule_periodicity(trace, onset, p);
    if (!check.periodic)
        return result(c, CheckOutcome::fail, "sigma diverges at t=" + std::to_string(*check.divergence) +
                                                 " (onset " + std::to_string(onset) + ")");
    return result(c, CheckOutcome::pass, "onset " + std::to_string(onset));
}

CheckResult check_sync_origin(const Scenario& s, const Verdict& oracle) {
    constexpr auto c = Check::sync_origin;
    if (!is_synchronous(s.tasks)) return result(c, CheckOutcome::skip, "asynchronous");
    // Origin periodicity is only promised for constrained deadlines or task-level priorities.
    if (!constrained(s) && !s.policy.task_level())
        return result(c, CheckOutcome::skip, "arbitrary deadlines under a job-level policy");
    if (!feasible(oracle)) return result(c, CheckOutcome::skip, "not known feasible");
    const Time p = hyperperiod(s.tasks);
    const Time origin = s.tasks.front().offset;
    RunOptions opts;
    opts.record_events = false;
    opts.snapshot_at = {origin, origin + p};
    const auto trace = run(s, origin + 2 * p, opts);
    if (trace.snapshots.at(origin) != trace.snapshots.at(origin + p))
        return result(c, CheckOutcome::fail, "theta(" + std::to_string(origin) + ") != theta(" +
                                                 std::to_string(origin + p) + ")");
    const auto check = check_schedule_periodicity(trace, origin, p);
    if (!check.periodic) return result(c, CheckOutcome::fail, "sigma diverges at t=" + std::to_string(*check.divergence));
    return result(c, CheckOutcome::pass);
}

namespace {

// Covers the transient up to the oracle's repeated state plus one hyperperiod.
Trace monotonicity_trace(const Scenario& s, const Verdict& oracle) {
    const Time p = hyperperiod(s.tasks);
    RunOptions opts;
    opts.record_progress = true;
    opts.snapshot_every_instant = true;
    opts.record_events = true;
    return run(s, oracle.states->second_time + p, opts);
}

}  // namespace

CheckResult check_execution_monotonicity(const Scenario& s, const Verdict& oracle) {
    constexpr auto c = Check::execution_monotonicity;
    if (!feasible(oracle)) return result(c, CheckOutcome::skip, "not known feasible");
    const auto r = execution_monotonicity_check(monotonicity_trace(s, oracle), s);
    if (!r.pass)
        return result(c, CheckOutcome::fail, "job " + job_label(*r.job) + " at t=" + std::to_string(*r.time));
    return result(c, CheckOutcome::pass, std::to_string(r.checked) + " comparisons");
}

CheckResult check_state_order(const Scenario& s, const Verdict& oracle) {
    constexpr auto c = Check::state_order;
    if (!feasible(oracle)) return result(c, CheckOutcome::skip, "not known feasible");
    const auto r = state_order_check(monotonicity_trace(s, oracle), s);
    if (!r.pass)
        return result(c, CheckOutcome::fail,
                      "task " + std::to_string(*r.task + 1) + " at t=" + std::to_string(*r.time));
    return result(c, CheckOutcome::pass, std::to_string(r.checked) + " comparisons");
}

CheckResult check_replay(const Scenario& s, std::uint64_t seed) {
    constexpr auto c = Check::replay;
    const Time end = max_offset(s.tasks) + 2 * hyperperiod(s.tasks);
    auto rng = seeded(seed, 3);
    const Time cut = uniform(rng, 0, end - 1);

    RunOptions opts;
    opts.snapshot_at = {cut, end};
    const auto first = run(s, end, opts);
    const auto second = run(s, end, opts);
    if (format_trace_text(first, s, 0) != format_trace_text(second, s, 0) ||
        trace_to_json(first, s, 0).dump() != trace_to_json(second, s, 0).dump())
        return result(c, CheckOutcome::fail, "repeated runs differ");

    RunOptions resumed_opts;
    resumed_opts.snapshot_at = {end};
    const auto resumed = run(s, cut, first.snapshots.at(cut), end, resumed_opts);
    for (Time t = cut; t < end; ++t)
        if (resumed.at(t) != first.at(t))
            return result(c, CheckOutcome::fail,
                          "resumed at " + std::to_string(cut) + ", sigma differs at t=" + std::to_string(t));
    const auto after_cut = [&](const Trace& tr) {
        std::vector<Event> out;
        for (const auto& e : tr.events)
            if (e.time > cut && e.kind != EventKind::state_snapshot) out.push_back(e);
        return out;
    };
    if (after_cut(resumed) != after_cut(first))
        return result(c, CheckOutcome::fail, "resumed at " + std::to_string(cut) + ", events differ");
    if (resumed.snapshots.at(end) != first.snapshots.at(end))
        return result(c, CheckOutcome::fail, "resumed at " + std::to_string(cut) + ", final state differs");
    return result(c, CheckOutcome::pass, "resumed at " + std::to_string(cut));
}

CheckResult check_predictability(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed) {
    constexpr auto c = Check::predictability;
    const auto r = predictability_harness(spec, samples, seed);
    if (r.prefixes.empty()) return result(c, CheckOutcome::skip, "no feasible J+ prefix");
    if (!r.pass) return result(c, CheckOutcome::fail, "prefix " + std::to_string(*r.violating_prefix));
    return result(c, CheckOutcome::pass, std::to_string(r.prefixes.size()) + " prefixes");
}

CheckResult check_availability_subset(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed) {
    constexpr auto c = Check::availability_subset;
    const auto r = availability_subset_check(spec, samples, seed);
    if (r.checked == 0) return result(c, CheckOutcome::skip, "no feasible J+ prefix");
    if (!r.pass)
        return result(c, CheckOutcome::fail,
                      "prefix " + std::to_string(*r.prefix) + " at t=" + std::to_string(*r.time));
    return result(c, CheckOutcome::pass, std::to_string(r.checked) + " instants");
}

CheckResult run_check(Check c, const Scenario& s, std::uint64_t seed, std::int64_t oracle_windows) {
    switch (c) {
        case Check::window_equivalence: return check_window_equivalence(s);
        case Check::replay: return check_replay(s, seed);
        case Check::predictability:
        case Check::availability_subset: throw std::invalid_argument("job-set check on a task system");
        default: break;
    }
    const auto oracle = brute_force_feasibility(s, oracle_windows);
    switch (c) {
        case Check::oracle_equivalence: return check_oracle_equivalence(s, oracle);
        case Check::periodicity_onset: return check_periodicity_onset(s, oracle);
        case Check::sync_origin: return check_sync_origin(s, oracle);
        case Check::execution_monotonicity: return check_execution_monotonicity(s, oracle);
        default: return check_state_order(s, oracle);
    }
}

namespace {

Scenario without_task(const Scenario& s, std::size_t i) {
    Scenario out = s;
    out.tasks.erase(out.tasks.begin() + static_cast<std::ptrdiff_t>(i));
    out.platform.rates.erase(out.platform.rates.begin() + static_cast<std::ptrdiff_t>(i));
    if (out.policy.kind == PolicyKind::explicit_order) {
        std::erase(out.policy.order, i);
        for (auto& o : out.policy.order)
            if (o > i) --o;
    }
    return out;
}

bool shrinkable(const Scenario& s) {
    try {
        require_valid(s.tasks, s.platform);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

template <typename T, typename Candidates>
T shrink_loop(T current, const std::function<bool(const T&)>& fails, Candidates candidates) {
    for (bool progress = true; progress;) {
        progress = false;
        for (auto& next : candidates(current)) {
            bool still = false;
            try {
                still = fails(next);
            } catch (const std::exception&) {
                still = false;
            }
            if (still) {
                current = std::move(next);
                progress = true;
                break;
            }
        }
    }
    return current;
}

}  // namespace

Scenario shrink(const Scenario& s, const std::function<bool(const Scenario&)>& fails) {
    return shrink_loop<Scenario>(s, fails, [](const Scenario& cur) {
        std::vector<Scenario> out;
        if (cur.tasks.size() > 1)
            for (std::size_t i = 0; i < cur.tasks.size(); ++i) out.push_back(without_task(cur, i));
        for (std::size_t i = 0; i < cur.tasks.size(); ++i) {
            auto next = cur;
            if (--next.tasks[i].wcet >= 1) out.push_back(next);
        }
        for (std::size_t i = 0; i < cur.tasks.size(); ++i) {
            auto next = cur;
            auto& t = next.tasks[i];
            if (t.period > 1) {
                --t.period;
                t.wcet = std::min(t.wcet, t.period);
                out.push_back(next);
            }
            next = cur;
            if (--next.tasks[i].deadline >= 1) out.push_back(next);
        }
        std::erase_if(out, [](const Scenario& x) { return !shrinkable(x); });
        return out;
    });
}

JobSetSpec shrink(const JobSetSpec& spec, const std::function<bool(const JobSetSpec&)>& fails) {
    return shrink_loop<JobSetSpec>(spec, fails, [](const JobSetSpec& cur) {
        std::vector<JobSetSpec> out;
        if (cur.jobs.size() > 1) {
            for (std::size_t i = 0; i < cur.jobs.size(); ++i) {
                auto next = cur;
                next.jobs.erase(next.jobs.begin() + static_cast<std::ptrdiff_t>(i));
                next.platform.rates.erase(next.platform.rates.begin() + static_cast<std::ptrdiff_t>(i));
                out.push_back(std::move(next));
            }
        }
        for (std::size_t i = 0; i < cur.jobs.size(); ++i) {
            auto next = cur;
            auto& j = next.jobs[i];
            if (j.max_requirement - 1 >= j.min_requirement) {
                j.max_requirement -= 1;
                out.push_back(next);
            }
        }
        return out;
    });
}

bool CampaignReport::all_pass() const {
    return std::none_of(records.begin(), records.end(),
                        [](const CampaignRecord& r) { return r.result.outcome == CheckOutcome::fail; });
}

CheckTally CampaignReport::tally_of(Check c) const {
    const auto it = tally.find(c);
    return it == tally.end() ? CheckTally{} : it->second;
}

namespace {

std::string counterexample_name(Check c, std::uint64_t seed) {
    return std::string("counterexample-") + to_string(c) + "-" + std::to_string(seed) + ".json";
}

std::vector<CampaignRecord> evaluate_instance(const CampaignConfig& cfg, std::uint64_t seed) {
    const auto s = random_instance(seed);
    const auto instance = scenario_to_json(s);
    std::optional<Verdict> oracle;
    const auto oracle_for = [&](const Scenario& x) { return brute_force_feasibility(x, cfg.oracle_windows); };

    std::vector<CampaignRecord> out;
    for (auto c : cfg.checks) {
        if (is_job_set_check(c)) continue;
        CampaignRecord rec{seed, instance, {}, std::nullopt};
        try {
            switch (c) {
                case Check::window_equivalence: rec.result = check_window_equivalence(s); break;
                case Check::replay: rec.result = check_replay(s, seed); break;
                default:
                    if (!oracle) oracle = oracle_for(s);
                    rec.result = c == Check::oracle_equivalence       ? check_oracle_equivalence(s, *oracle)
                                 : c == Check::periodicity_onset      ? check_periodicity_onset(s, *oracle)
                                 : c == Check::sync_origin            ? check_sync_origin(s, *oracle)
                                 : c == Check::execution_monotonicity ? check_execution_monotonicity(s, *oracle)
                                                                      : check_state_order(s, *oracle);
            }
        } catch (const std::exception& e) {
            rec.result = {c, CheckOutcome::fail, std::string("exception: ") + e.what()};
        }
        if (rec.result.outcome == CheckOutcome::fail && cfg.counterexample_dir) {
            const auto small = shrink(s, [&](const Scenario& x) {
                return run_check(c, x, seed, cfg.oracle_windows).outcome == CheckOutcome::fail;
            });
            std::filesystem::create_directories(*cfg.counterexample_dir);
            rec.counterexample = *cfg.counterexample_dir / counterexample_name(c, seed);
            save_scenario(small, *rec.counterexample);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CampaignRecord> evaluate_job_set(const CampaignConfig& cfg, std::uint64_t seed) {
    const auto spec = random_job_set(seed);
    const auto instance = Json::parse(serialize_job_set(spec));
    std::vector<CampaignRecord> out;
    for (auto c : cfg.checks) {
        if (!is_job_set_check(c)) continue;
        const auto run_one = [&](const JobSetSpec& x) {
            return c == Check::predictability ? check_predictability(x, cfg.samples, seed)
                                              : check_availability_subset(x, cfg.samples, seed);
        };
        CampaignRecord rec{seed, instance, {}, std::nullopt};
        try {
            rec.result = run_one(spec);
        } catch (const std::exception& e) {
            rec.result = {c, CheckOutcome::fail, std::string("exception: ") + e.what()};
        }
        if (rec.result.outcome == CheckOutcome::fail && cfg.counterexample_dir) {
            const auto small =
                shrink(spec, [&](const JobSetSpec& x) { return run_one(x).outcome == CheckOutcome::fail; });
            std::filesystem::create_directories(*cfg.counterexample_dir);
            rec.counterexample = *cfg.counterexample_dir / counterexample_name(c, seed);
            std::ofstream(*rec.counterexample) << serialize_job_set(small);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

template <typename F>
std::vector<std::vector<CampaignRecord>> fan_out(std::int64_t count, unsigned threads, F work) {
    std::vector<std::vector<CampaignRecord>> slots(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    std::atomic<std::int64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::int64_t k; (k = next.fetch_add(1)) < count;) slots[static_cast<std::size_t>(k)] = work(k);
        });
    }
    pool.clear();
    return slots;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());

    CampaignReport report;
    auto add = [&](std::vector<std::vector<CampaignRecord>> slots) {
        for (auto& slot : slots)
            for (auto& rec : slot) {
                auto& t = report.tally[rec.result.check];
                (rec.result.outcome == CheckOutcome::pass   ? t.pass
                 : rec.result.outcome == CheckOutcome::fail ? t.fail
                                                            : t.skip)++;
                report.records.push_back(std::move(rec));
            }
    };
    add(fan_out(cfg.instances, threads,
                [&](std::int64_t k) { return evaluate_instance(cfg, cfg.first_seed + static_cast<std::uint64_t>(k)); }));
    add(fan_out(cfg.job_sets, threads,
                [&](std::int64_t k) { return evaluate_job_set(cfg, cfg.first_seed + static_cast<std::uint64_t>(k)); }));
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

void write_jsonl(const CampaignReport& report, std::ostream& out) {
    for (const auto& r : report.records) {
        Json line;
        line["seed"] = r.seed;
        line["instance"] = r.instance;
        line["check"] = to_string(r.result.check);
        line["outcome"] = to_string(r.result.outcome);
        if (!r.result.detail.empty()) line["detail"] = r.result.detail;
        if (r.counterexample) line["counterexample"] = r.counterexample->string();
        out << line.dump() << "\n";
    }
}

}  // namespace mpfeas
