#include <mpfeas/analysis.hpp>

#include <algorithm>

namespace mpfeas {

std::vector<Time> compute_S(std::span<const Task> ordered) {
    std::vector<Time> s;
    s.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& t = ordered[i];
        if (i == 0) {
            s.push_back(t.offset);
            continue;
        }
        s.push_back(std::max(t.offset, t.offset + ceil_div(s.back() - t.offset, t.period) * t.period));
    }
    return s;
}

std::vector<Time> compute_Shat(std::span<const Task> ordered) {
    std::vector<Time> s;
    s.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& t = ordered[i];
        if (i == 0) {
            s.push_back(t.offset);
            continue;
        }
        const Time first_release = std::max(t.offset, t.offset + ceil_div(s.back() - t.offset, t.period) * t.period);
        s.push_back(first_release + hyperperiod(ordered, i + 1));
    }
    return s;
}

std::vector<Time> compute_X(std::span<const Task> ordered, Time s_n) {
    std::vector<Time> x(ordered.size());
    if (ordered.empty()) return x;
    x.back() = s_n;
    for (std::size_t i = ordered.size() - 1; i-- > 0;) {
        const auto& t = ordered[i];
        x[i] = t.offset + floor_div(x[i + 1] - t.offset, t.period) * t.period;
    }
    return x;
}

PeriodicityBounds periodicity_bounds(const Scenario& scenario) {
    PeriodicityBounds b;
    b.priority_order = task_priority_order(scenario.policy, scenario.tasks);
    std::vector<Task> ordered;
    for (auto i : b.priority_order) ordered.push_back(scenario.tasks[i]);
    b.hyperperiod = hyperperiod(ordered);
    for (std::size_t i = 1; i <= ordered.size(); ++i) b.prefix_hyperperiods.push_back(hyperperiod(ordered, i));
    b.S = compute_S(ordered);
    b.Shat = compute_Shat(ordered);
    b.X = compute_X(ordered, b.S.back());
    return b;
}

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::feasible: return "feasible";
    case Outcome::infeasible: return "infeasible";
    case Outcome::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(TestKind k) {
    switch (k) {
    case TestKind::sync_constrained: return "sync-constrained-hyperperiod";
    case TestKind::sync_arbitrary: return "sync-arbitrary-hyperperiod-state";
    case TestKind::async_constrained: return "async-constrained-fp-interval";
    case TestKind::async_arbitrary: return "async-arbitrary-fp-interval";
    case TestKind::edf_periodicity: return "edf-hyperperiod-state-repetition";
    case TestKind::brute_force: return "brute-force-state-repetition";
    }
    return "?";
}

namespace {

void require_task_level(const Scenario& s) {
    if (!s.policy.task_level()) throw AnalysisError("test requires a task-level fixed-priority policy");
}

void require_constrained(const ValidatedSystem& v) {
    if (v.deadline_class == DeadlineClass::arbitrary)
        throw AnalysisError("test requires constrained deadlines (D <= T)");
}

void require_synchronous(const ValidatedSystem& v) {
    if (!v.synchronous) throw AnalysisError("test requires a synchronous system (all offsets equal)");
}

std::optional<std::size_t> first_mismatch(const SystemState& a, const SystemState& b,
                                          std::span<const std::size_t> order) {
    for (auto i : order)
        if (a.tasks[i] != b.tasks[i]) return i;
    return std::nullopt;
}

std::vector<std::size_t> identity_order(std::size_t n) {
    std::vector<std::size_t> o(n);
    for (std::size_t i = 0; i < n; ++i) o[i] = i;
    return o;
}

// Simulates [0, end] capturing theta at the two boundaries, then applies the
// miss filter and the state comparison.
template <typename Counts>
Verdict window_test(const Scenario& scenario, TestKind kind, Interval interval, Time first_boundary,
                    Time second_boundary, Counts counts, std::span<const std::size_t> mismatch_order) {
    RunOptions opts;
    opts.record_assignments = false;
    opts.snapshot_at = {first_boundary, second_boundary};
    Simulation sim(scenario, opts);
    sim.advance_to(std::max(interval.end, second_boundary));

    Verdict v;
    v.test = kind;
    v.interval = interval;
    for (const auto& e : sim.trace().events) {
        if (e.kind == EventKind::deadline_miss && counts(e)) {
            v.outcome = Outcome::infeasible;
            v.miss = e;
            return v;
        }
    }
    const auto& snaps = sim.trace().snapshots;
    v.states = StatePair{first_boundary, snaps.at(first_boundary), second_boundary, snaps.at(second_boundary)};
    if (v.states->first == v.states->second) {
        v.outcome = Outcome::feasible;
    } else {
        v.outcome = Outcome::infeasible;
        v.mismatched_task = first_mismatch(v.states->first, v.states->second, mismatch_order);
    }
    return v;
}

bool in_window(Time d, Time begin, Time end) { return begin < d && d <= end; }

}  // namespace

Verdict fp_test_async_constrained(const Scenario& scenario, AsyncConstrainedOptions options) {
    const auto sys = require_valid(scenario.tasks, scenario.platform);
    require_task_level(scenario);
    require_constrained(sys);
    auto bounds = periodicity_bounds(scenario);
    const Time s_n = bounds.S.back();
    const Time end = s_n + bounds.hyperperiod;
    // The two refinements are alternatives; per-task windows take precedence.
    const Time begin = options.use_x && !options.per_task_windows ? bounds.X.front() : 0;

    std::vector<std::size_t> rank(scenario.tasks.size());
    for (std::size_t r = 0; r < rank.size(); ++r) rank[bounds.priority_order[r]] = r;
    auto counts = [&](const Event& e) {
        if (!in_window(e.time, begin, end)) return false;
        if (!options.per_task_windows) return true;
        const auto r = rank[e.job.task];
        return in_window(e.time, bounds.S[r], bounds.S[r] + bounds.prefix_hyperperiods[r]);
    };
    auto v = window_test(scenario, TestKind::async_constrained, {begin, end}, s_n, end, counts,
                         bounds.priority_order);
    v.bounds = std::move(bounds);
    return v;
}

Verdict fp_test_async_arbitrary(const Scenario& scenario) {
    require_valid(scenario.tasks, scenario.platform);
    require_task_level(scenario);
    auto bounds = periodicity_bounds(scenario);
    const Time s_n = bounds.Shat.back();
    const Time end = s_n + bounds.hyperperiod;
    auto v = window_test(scenario, TestKind::async_arbitrary, {0, end}, s_n, end,
                         [&](const Event& e) { return in_window(e.time, 0, end); }, bounds.priority_order);
    v.bounds = std::move(bounds);
    return v;
}

Verdict fp_test_sync_constrained(const Scenario& scenario) {
    const auto sys = require_valid(scenario.tasks, scenario.platform);
    require_synchronous(sys);
    require_constrained(sys);
    // Offsets all equal c: the schedule is the zero-offset one shifted by c.
    const Time c = sys.offset_shift;
    const Time p = hyperperiod(scenario.tasks);
    const auto order = scenario.policy.task_level() ? task_priority_order(scenario.policy, scenario.tasks)
                                                    : identity_order(scenario.tasks.size());
    auto v = window_test(scenario, TestKind::sync_constrained, {c, c + p}, c, c + p,
                         [&](const Event& e) { return in_window(e.time, c, c + p); }, order);
    // Only misses decide this test; the boundary states are reported as-is.
    if (v.outcome == Outcome::infeasible && !v.miss) {
        v.outcome = Outcome::feasible;
        v.mismatched_task.reset();
    }
    if (scenario.policy.task_level()) v.bounds = periodicity_bounds(scenario);
    return v;
}

Verdict fp_test_sync_arbitrary(const Scenario& scenario) {
    const auto sys = require_valid(scenario.tasks, scenario.platform);
    require_synchronous(sys);
    require_task_level(scenario);
    const Time c = sys.offset_shift;
    const Time p = hyperperiod(scenario.tasks);
    auto bounds = periodicity_bounds(scenario);
    auto v = window_test(scenario, TestKind::sync_arbitrary, {c, c + p}, c, c + p,
                         [&](const Event& e) { return in_window(e.time, c, c + p); }, bounds.priority_order);
    if (v.outcome == Outcome::infeasible && !v.miss) {
        // Highest-priority task still holding two or more jobs at P.
        for (auto i : bounds.priority_order) {
            if (v.states->second.tasks[i].active >= 2) {
                v.mismatched_task = i;
                break;
            }
        }
    }
    v.bounds = std::move(bounds);
    return v;
}

Verdict edf_test(const Scenario& scenario, std::int64_t hyperperiod_budget) {
    require_valid(scenario.tasks, scenario.platform);
    if (scenario.policy.kind != PolicyKind::edf) throw AnalysisError("edf_test requires the EDF policy");
    if (hyperperiod_budget < 1) throw std::invalid_argument("hyperperiod budget must be >= 1");
    const Time p = hyperperiod(scenario.tasks);
    const Time o_max = max_offset(scenario.tasks);

    RunOptions opts;
    opts.fail_fast = true;
    opts.record_assignments = false;
    Simulation sim(scenario, opts);
    Verdict v;
    v.test = TestKind::edf_periodicity;
    v.budget = hyperperiod_budget;
    v.interval = {0, o_max + p};

    auto missed = [&] {
        v.outcome = Outcome::infeasible;
        v.miss = sim.engine().first_miss();
        v.interval.end = sim.now();
        return v;
    };
    if (!sim.advance_to(o_max)) return missed();
    auto s1 = sim.engine().capture_state();
    if (!sim.advance_to(o_max + p)) return missed();
    auto s2 = sim.engine().capture_state();
    Time current = o_max + p;
    while (s1 != s2) {
        if (v.iterations >= hyperperiod_budget) {
            v.outcome = Outcome::inconclusive;
            v.interval.end = current;
            return v;
        }
        s1 = std::move(s2);
        if (!sim.advance_to(current + p)) return missed();
        current += p;
        ++v.iterations;
        s2 = sim.engine().capture_state();
    }
    v.outcome = Outcome::feasible;
    v.interval.end = current;
    v.states = StatePair{current - p, std::move(s1), current, std::move(s2)};
    return v;
}

Verdict select_test(const Scenario& scenario, const SelectOptions& options) {
    const auto sys = require_valid(scenario.tasks, scenario.platform);
    const bool constrained = sys.deadline_class != DeadlineClass::arbitrary;
    if (sys.synchronous && constrained) return fp_test_sync_constrained(scenario);
    if (scenario.policy.kind == PolicyKind::edf) return edf_test(scenario, options.edf_budget);
    if (!scenario.policy.task_level())
        throw AnalysisError("unsupported combination: no exact test for this policy and task system");
    if (sys.synchronous) return fp_test_sync_arbitrary(scenario);
    if (constrained) return fp_test_async_constrained(scenario, options.windows);
    return fp_test_async_arbitrary(scenario);
}

}  // namespace mpfeas
