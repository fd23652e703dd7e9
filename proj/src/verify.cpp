#include <mpfeas/verify.hpp>

#include <algorithm>
#include <limits>
#include <map>

namespace mpfeas {

PeriodicityCheck check_schedule_periodicity(const Trace& trace, Time start, Time period) {
    if (period < 1) throw PreconditionError("period must be >= 1");
    if (!trace.covers(start, start + 2 * period) ||
        static_cast<Time>(trace.assignments.size()) < trace.end - trace.start)
        throw PreconditionError("trace does not cover [start, start + 2 * period)");
    PeriodicityCheck out;
    for (Time t = start; t < start + period; ++t) {
        if (task_view(trace.at(t)) != task_view(trace.at(t + period))) {
            out.divergence = t;
            return out;
        }
    }
    out.periodic = true;
    return out;
}

Verdict brute_force_feasibility(const Scenario& scenario, std::int64_t max_windows) {
    require_valid(scenario.tasks, scenario.platform);
    if (max_windows < 1) throw std::invalid_argument("max_windows must be >= 1");
    const Time p = hyperperiod(scenario.tasks);
    const Time origin = max_offset(scenario.tasks);

    RunOptions opts;
    opts.fail_fast = true;
    opts.record_assignments = false;
    opts.record_events = false;
    Simulation sim(scenario, opts);
    Verdict v;
    v.test = TestKind::brute_force;
    v.budget = max_windows;

    auto missed = [&] {
        v.outcome = Outcome::infeasible;
        v.miss = sim.engine().first_miss();
        v.interval = {0, sim.now()};
        return v;
    };
    if (!sim.advance_to(origin)) return missed();
    std::vector<SystemState> seen{sim.engine().capture_state()};
    for (std::int64_t k = 1; k <= max_windows; ++k) {
        if (!sim.advance_to(origin + k * p)) return missed();
        v.iterations = k;
        auto state = sim.engine().capture_state();
        for (std::size_t j = 0; j < seen.size(); ++j) {
            if (seen[j] == state) {
                v.outcome = Outcome::feasible;
                const Time earlier = origin + static_cast<Time>(j) * p;
                v.interval = {0, sim.now()};
                v.states = StatePair{earlier, seen[j], sim.now(), std::move(state)};
                return v;
            }
        }
        seen.push_back(std::move(state));
    }
    v.outcome = Outcome::inconclusive;
    v.interval = {0, sim.now()};
    return v;
}

std::optional<StateRepetition> find_state_repetition(const Trace& trace, Time from) {
    std::map<std::string, Time> first_seen;
    for (auto it = trace.snapshots.lower_bound(from); it != trace.snapshots.end(); ++it) {
        auto [pos, inserted] = first_seen.emplace(to_string(it->second), it->first);
        if (!inserted) return StateRepetition{pos->second, it->first};
    }
    return std::nullopt;
}

namespace {

Time first_miss_time(const Trace& trace) {
    const auto miss = trace.first_miss();
    return miss ? miss->time : std::numeric_limits<Time>::max();
}

}  // namespace

MonotonicityReport execution_monotonicity_check(const Trace& trace, const Scenario& scenario) {
    if (trace.progress.empty()) throw PreconditionError("trace has no executed-amount series");
    const Time p = hyperperiod(scenario.tasks);
    if (trace.end - trace.start < p) throw PreconditionError("trace is shorter than one hyperperiod");
    const Time miss = first_miss_time(trace);

    MonotonicityReport r;
    for (const auto& [id, series] : trace.progress) {
        const auto& task = scenario.tasks.at(id.task);
        const JobId partner{id.task, id.instance + p / task.period};
        const auto it = trace.progress.find(partner);
        if (it == trace.progress.end()) continue;
        const Time arrival = job_arrival(task, id.instance);
        for (Time t = std::max(arrival, task.offset); t <= arrival + task.deadline; ++t) {
            if (t + p >= miss) break;
            const auto now = series.at(t);
            const auto later = it->second.at(t + p);
            if (!now || !later) continue;
            ++r.checked;
            if (*now < *later) {
                r.pass = false;
                r.job = id;
                r.time = t;
                return r;
            }
        }
    }
    return r;
}

StateOrderReport state_order_check(const Trace& trace, const Scenario& scenario) {
    const Time p = hyperperiod(scenario.tasks);
    const Time miss = first_miss_time(trace);
    StateOrderReport r;
    bool any_pair = false;
    for (const auto& [t, state] : trace.snapshots) {
        const auto later = trace.snapshots.find(t + p);
        if (later == trace.snapshots.end()) continue;
        any_pair = true;
        if (t + p >= miss) {
            ++r.skipped;
            continue;
        }
        for (std::size_t i = 0; i < scenario.tasks.size(); ++i) {
            if (t < scenario.tasks[i].offset) continue;
            const auto& a = state.tasks[i];
            const auto& b = later->second.tasks[i];
            ++r.checked;
            const bool ok = a.active < b.active || (a.active == b.active && a.executed >= b.executed);
            if (!ok) {
                r.pass = false;
                r.task = i;
                r.time = t;
                return r;
            }
        }
    }
    if (!any_pair) throw PreconditionError("trace has no snapshot pair one hyperperiod apart");
    return r;
}

}  // namespace mpfeas
