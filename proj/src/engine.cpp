#include <mpfeas/engine.hpp>

#include <algorithm>
#include <string>

namespace mpfeas {

std::vector<std::size_t> availability(const Assignment& assignment) {
    std::vector<std::size_t> idle;
    for (std::size_t j = 0; j < assignment.size(); ++j)
        if (!assignment[j]) idle.push_back(j);
    return idle;
}

std::vector<std::size_t> task_view(const Assignment& assignment) {
    std::vector<std::size_t> view(assignment.size(), 0);
    for (std::size_t j = 0; j < assignment.size(); ++j)
        if (assignment[j]) view[j] = assignment[j]->task + 1;
    return view;
}

Assignment dispatch(std::span<const JobId> by_priority,
                    std::span<const std::vector<std::size_t>> processor_orders,
                    std::size_t processors) {
    Assignment out(processors);
    std::size_t free_left = processors;
    for (const auto& job : by_priority) {
        if (free_left == 0) break;
        for (std::size_t proc : processor_orders[job.task]) {
            if (!out[proc]) {
                out[proc] = job;
                --free_left;
                break;
            }
        }
    }
    return out;
}

Assignment dispatch(std::span<const JobId> by_priority, const Platform& platform) {
    std::vector<std::vector<std::size_t>> orders(platform.rates.size());
    for (std::size_t i = 0; i < orders.size(); ++i) orders[i] = processor_order_for_task(platform, i);
    return dispatch(by_priority, orders, platform.processors);
}

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::completion: return "completion";
    case EventKind::deadline_miss: return "deadline_miss";
    case EventKind::arrival: return "arrival";
    case EventKind::state_snapshot: return "state_snapshot";
    }
    return "?";
}

std::optional<Rational> ProgressSeries::at(Time t) const {
    if (t < first || t - first >= static_cast<Time>(values.size())) return std::nullopt;
    return values[static_cast<std::size_t>(t - first)];
}

std::optional<Event> Trace::first_miss() const {
    for (const auto& e : events)
        if (e.kind == EventKind::deadline_miss) return e;
    return std::nullopt;
}

StepBudgetExhausted::StepBudgetExhausted(std::int64_t budget)
    : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted") {}

Engine::Engine(Scenario scenario)
    : scenario_(std::move(scenario)), priority_(scenario_.policy, scenario_.tasks) {
    const auto n = scenario_.tasks.size();
    orders_.resize(n);
    for (std::size_t i = 0; i < n; ++i) orders_[i] = processor_order_for_task(scenario_.platform, i);
    queues_.resize(n);
    next_instance_.assign(n, 1);
    release_arrivals(nullptr);
}

Engine::Engine(Scenario scenario, Time now, const SystemState& state)
    : scenario_(std::move(scenario)), priority_(scenario_.policy, scenario_.tasks), now_(now) {
    const auto n = scenario_.tasks.size();
    if (state.tasks.size() != n) throw InconsistentState("state has wrong number of tasks");
    orders_.resize(n);
    for (std::size_t i = 0; i < n; ++i) orders_[i] = processor_order_for_task(scenario_.platform, i);
    queues_.resize(n);
    next_instance_.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& task = scenario_.tasks[i];
        const auto& s = state.tasks[i];
        const std::string who = "task " + std::to_string(i + 1) + ": ";
        if (!s.released()) {
            if (task.offset - now != s.elapsed || s.elapsed <= 0)
                throw InconsistentState(who + "unreleased state does not match the offset");
            continue;
        }
        if (now < task.offset) throw InconsistentState(who + "released before its offset");
        // Arrival of the oldest active job, or of the latest job when none is active.
        const Time anchor = now - s.elapsed;
        if (anchor < task.offset || floor_mod(anchor - task.offset, task.period) != 0)
            throw InconsistentState(who + "elapsed time is not aligned with the arrival pattern");
        const std::int64_t k = (anchor - task.offset) / task.period + 1;
        if (s.active == 0) {
            if (s.elapsed >= task.period) throw InconsistentState(who + "idle task with stale elapsed time");
            next_instance_[i] = k + 1;
            continue;
        }
        for (std::int64_t a = 0; a < s.active; ++a)
            queues_[i].push_back({k + a, a == 0 ? s.executed : Rational(0)});
        next_instance_[i] = k + s.active;
        if (job_arrival(task, next_instance_[i] - 1) > now || job_arrival(task, next_instance_[i]) <= now)
            throw InconsistentState(who + "active job count does not match elapsed time");
    }
}

void Engine::release_arrivals(std::vector<Event>* events) {
    for (std::size_t i = 0; i < queues_.size(); ++i) {
        const auto& task = scenario_.tasks[i];
        while (job_arrival(task, next_instance_[i]) <= now_) {
            const auto k = next_instance_[i]++;
            queues_[i].push_back({k, Rational(0)});
            if (events) events->push_back({now_, EventKind::arrival, {i, k}});
        }
    }
}

std::vector<Job> Engine::active_jobs() const {
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < queues_.size(); ++i)
        for (const auto& a : queues_[i]) jobs.push_back(make_job(scenario_.tasks[i], i, a.instance));
    std::stable_sort(jobs.begin(), jobs.end(),
                     [&](const Job& a, const Job& b) { return priority_.higher(a, b); });
    return jobs;
}

Assignment Engine::dispatch() const {
    std::vector<Job> heads;
    for (std::size_t i = 0; i < queues_.size(); ++i)
        if (!queues_[i].empty()) heads.push_back(make_job(scenario_.tasks[i], i, queues_[i].front().instance));
    std::sort(heads.begin(), heads.end(), [&](const Job& a, const Job& b) { return priority_.higher(a, b); });
    std::vector<JobId> ids;
    ids.reserve(heads.size());
    for (const auto& j : heads) ids.push_back(j.id);
    return mpfeas::dispatch(ids, orders_, scenario_.platform.processors);
}

std::vector<Event> Engine::step(const Assignment& assignment) {
    if (assignment.size() != scenario_.platform.processors)
        throw std::invalid_argument("assignment size differs from processor count");
    for (std::size_t j = 0; j < assignment.size(); ++j) {
        if (!assignment[j]) continue;
        const auto& id = *assignment[j];
        auto& q = queues_.at(id.task);
        if (q.empty() || q.front().instance != id.instance)
            throw std::logic_error("assignment names a job that is not its task's oldest active job");
        q.front().executed += scenario_.platform.rate(id.task, j);
    }
    ++now_;
    std::vector<Event> events;
    for (std::size_t i = 0; i < queues_.size(); ++i) {
        auto& q = queues_[i];
        if (!q.empty() && q.front().executed >= scenario_.tasks[i].wcet) {
            events.push_back({now_, EventKind::completion, {i, q.front().instance}});
            q.pop_front();
        }
    }
    for (std::size_t i = 0; i < queues_.size(); ++i) {
        for (const auto& a : queues_[i]) {
            const Time d = job_arrival(scenario_.tasks[i], a.instance) + scenario_.tasks[i].deadline;
            if (d == now_) {
                events.push_back({now_, EventKind::deadline_miss, {i, a.instance}});
                if (!first_miss_) first_miss_ = events.back();
            }
            if (d >= now_) break;
        }
    }
    release_arrivals(&events);
    return events;
}

SystemState Engine::capture_state() const {
    SystemState state;
    state.tasks.reserve(queues_.size());
    for (std::size_t i = 0; i < queues_.size(); ++i) {
        const auto& task = scenario_.tasks[i];
        TaskState s;
        if (now_ < task.offset) {
            s = {-1, task.offset - now_, Rational(0)};
        } else if (!queues_[i].empty()) {
            const auto& oldest = queues_[i].front();
            s = {static_cast<std::int64_t>(queues_[i].size()), now_ - job_arrival(task, oldest.instance),
                 oldest.executed};
        } else {
            s = {0, floor_mod(now_ - task.offset, task.period), Rational(0)};
        }
        state.tasks.push_back(s);
    }
    return state;
}

std::optional<Rational> Engine::executed(const JobId& job) const {
    if (job.task >= queues_.size()) return std::nullopt;
    for (const auto& a : queues_[job.task])
        if (a.instance == job.instance) return a.executed;
    return std::nullopt;
}

SystemState capture_state(const Engine& engine) { return engine.capture_state(); }

Simulation::Simulation(Scenario scenario, RunOptions options)
    : engine_(std::move(scenario)), options_(std::move(options)) {
    trace_.start = trace_.end = engine_.now();
    trace_.processors = engine_.scenario().platform.processors;
    if (options_.record_events)
        for (const auto& job : engine_.active_jobs())
            if (job.arrival == engine_.now()) trace_.events.push_back({job.arrival, EventKind::arrival, job.id});
    observe_instant();
}

Simulation::Simulation(Scenario scenario, Time start, const SystemState& state, RunOptions options)
    : engine_(std::move(scenario), start, state), options_(std::move(options)) {
    trace_.start = trace_.end = engine_.now();
    trace_.processors = engine_.scenario().platform.processors;
    if (options_.record_events)
        for (const auto& job : engine_.active_jobs())
            if (job.arrival == engine_.now()) trace_.events.push_back({job.arrival, EventKind::arrival, job.id});
    observe_instant();
}

bool Simulation::advance_to(Time end) {
    while (!stopped_ && engine_.now() < end) {
        const auto assignment = engine_.dispatch();
        if (options_.record_assignments) trace_.assignments.push_back(assignment);
        const auto events = engine_.step(assignment);
        trace_.end = engine_.now();
        bool missed = false;
        for (const auto& e : events) missed = missed || e.kind == EventKind::deadline_miss;
        if (options_.record_events) trace_.events.insert(trace_.events.end(), events.begin(), events.end());
        observe_instant();
        if (missed && options_.fail_fast) stopped_ = true;
    }
    return !stopped_;
}

SystemState Simulation::snapshot() {
    auto state = engine_.capture_state();
    if (!trace_.snapshots.contains(engine_.now())) {
        trace_.snapshots.emplace(engine_.now(), state);
        if (options_.record_events) trace_.events.push_back({engine_.now(), EventKind::state_snapshot, {}});
    }
    return state;
}

void Simulation::observe_instant() {
    const Time t = engine_.now();
    if (options_.snapshot_every_instant ||
        std::find(options_.snapshot_at.begin(), options_.snapshot_at.end(), t) != options_.snapshot_at.end())
        snapshot();
    if (!options_.record_progress) return;
    for (const auto& job : engine_.active_jobs()) {
        if (job.arrival != t) continue;
        tracked_.push_back(job);
        trace_.progress[job.id].first = t;
    }
    std::erase_if(tracked_, [&](const Job& job) {
        const auto done = engine_.executed(job.id);
        trace_.progress[job.id].values.push_back(done ? *done : job.requirement);
        return t >= job.deadline;
    });
}

Trace run(const Scenario& scenario, Time end, const RunOptions& options) {
    Simulation sim(scenario, options);
    sim.advance_to(end);
    return sim.take_trace();
}

Trace run(const Scenario& scenario, Time start, const SystemState& state, Time end, const RunOptions& options) {
    Simulation sim(scenario, start, state, options);
    sim.advance_to(end);
    return sim.take_trace();
}

Trace run_until(const Scenario& scenario, const std::function<bool(const Engine&)>& stop,
                std::int64_t step_budget, const RunOptions& options) {
    Simulation sim(scenario, options);
    std::int64_t steps = 0;
    while (!stop(sim.engine())) {
        if (steps++ >= step_budget) throw StepBudgetExhausted(step_budget);
        if (!sim.advance_to(sim.now() + 1)) break;
    }
    return sim.take_trace();
}

}  // namespace mpfeas
