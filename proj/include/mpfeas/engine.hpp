#pragma once

// Discrete-time global scheduler simulation on unrelated processors.
//
// At every integer instant the active jobs are ranked by the policy and
// dispatched greedily: the highest priority job takes its fastest free
// eligible processor, then the next job, and so on. Only the oldest active job
// of a task is offered, so a task never runs on two processors at once. A job
// accrues `rate` units of work per unit of time and completes at the first
// instant its executed amount reaches its requirement (surplus discarded).
// Jobs that miss their deadline stay active until they complete.

#include <mpfeas/model.hpp>
#include <mpfeas/policy.hpp>

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpfeas {

struct Scenario {
    std::vector<Task> tasks;
    Platform platform;
    PriorityPolicy policy;

    bool operator==(const Scenario&) const = default;
};

// sigma(t): entry j is the job running on processor j, or empty when idle.
using Assignment = std::vector<std::optional<JobId>>;

// Indices of idle processors (0-based).
std::vector<std::size_t> availability(const Assignment& assignment);

// Task-level view of an assignment: 0 for idle, otherwise 1-based task index.
std::vector<std::size_t> task_view(const Assignment& assignment);

// Greedy work-conserving assignment of `by_priority` (highest first).
// `processor_orders[job.task]` lists the processors eligible for that job,
// fastest first. Jobs left without a free eligible processor stay unassigned.
Assignment dispatch(std::span<const JobId> by_priority,
                    std::span<const std::vector<std::size_t>> processor_orders,
                    std::size_t processors);
Assignment dispatch(std::span<const JobId> by_priority, const Platform& platform);

enum class EventKind { completion, deadline_miss, arrival, state_snapshot };

const char* to_string(EventKind k);

struct Event {
    Time time = 0;
    EventKind kind = EventKind::arrival;
    JobId job;  // unused for state_snapshot

    bool operator==(const Event&) const = default;
};

// Executed amount of one job sampled at every instant from its arrival.
struct ProgressSeries {
    Time first = 0;
    std::vector<Rational> values;

    std::optional<Rational> at(Time t) const;
};

struct Trace {
    Time start = 0;
    Time end = 0;
    std::size_t processors = 0;
    std::vector<Assignment> assignments;  // assignments[t - start] = sigma(t)
    std::vector<Event> events;
    std::map<Time, SystemState> snapshots;
    std::map<JobId, ProgressSeries> progress;

    bool covers(Time from, Time to) const { return start <= from && to <= end; }
    const Assignment& at(Time t) const { return assignments.at(static_cast<std::size_t>(t - start)); }
    std::optional<Event> first_miss() const;
};

class StepBudgetExhausted : public std::runtime_error {
public:
    explicit StepBudgetExhausted(std::int64_t budget);
};

class InconsistentState : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Engine {
public:
    // Starts at instant 0 with the jobs released at 0 already active.
    explicit Engine(Scenario scenario);
    // Rebuilds the job queues from a state captured at instant `now`.
    Engine(Scenario scenario, Time now, const SystemState& state);

    Time now() const { return now_; }
    const Scenario& scenario() const { return scenario_; }

    // Active jobs in priority order, oldest first within a task.
    std::vector<Job> active_jobs() const;
    Assignment dispatch() const;
    // Advances to now+1 and returns the events observed there: completions,
    // deadline misses, then arrivals.
    std::vector<Event> step(const Assignment& assignment);
    std::vector<Event> step() { return step(dispatch()); }

    SystemState capture_state() const;

    // Work done on an active job; nullopt if it is not active.
    std::optional<Rational> executed(const JobId& job) const;
    std::int64_t released_jobs(std::size_t task) const { return next_instance_[task] - 1; }
    const std::optional<Event>& first_miss() const { return first_miss_; }

private:
    struct ActiveJob {
        std::int64_t instance;
        Rational executed;
    };

    void release_arrivals(std::vector<Event>* events);

    Scenario scenario_;
    JobPriority priority_;
    std::vector<std::vector<std::size_t>> orders_;
    std::vector<std::deque<ActiveJob>> queues_;
    std::vector<std::int64_t> next_instance_;
    Time now_ = 0;
    std::optional<Event> first_miss_;
};

SystemState capture_state(const Engine& engine);

struct RunOptions {
    bool fail_fast = false;
    bool record_assignments = true;
    bool record_events = true;
    bool record_progress = false;
    bool snapshot_every_instant = false;
    std::vector<Time> snapshot_at;
};

// Engine plus trace recorder; the unit the analysis layer drives.
class Simulation {
public:
    Simulation(Scenario scenario, RunOptions options);
    Simulation(Scenario scenario, Time start, const SystemState& state, RunOptions options);

    // Steps until now() == end. Returns false if it stopped early on a
    // deadline miss in fail-fast mode.
    bool advance_to(Time end);
    // Captures theta(now) and records it in the trace.
    SystemState snapshot();

    const Engine& engine() const { return engine_; }
    Time now() const { return engine_.now(); }
    bool stopped() const { return stopped_; }
    const Trace& trace() const { return trace_; }
    Trace take_trace() { return std::move(trace_); }

private:
    void observe_instant();

    Engine engine_;
    RunOptions options_;
    Trace trace_;
    bool stopped_ = false;
    std::vector<Job> tracked_;  // jobs whose progress series is still open
};

// Runs [0, end).
Trace run(const Scenario& scenario, Time end, const RunOptions& options = {});
// Runs [start, end) from a captured state.
Trace run(const Scenario& scenario, Time start, const SystemState& state, Time end,
          const RunOptions& options = {});
// Runs from 0 until `stop` holds (checked at every instant, including 0).
// Throws StepBudgetExhausted after `step_budget` steps.
Trace run_until(const Scenario& scenario, const std::function<bool(const Engine&)>& stop,
                std::int64_t step_budget, const RunOptions& options = {});

}  // namespace mpfeas
