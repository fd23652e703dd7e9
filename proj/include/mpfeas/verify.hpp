#pragma once

// Executable checks of schedule properties, the brute-force feasibility
// oracle, and the job-set predictability harness.

#include <mpfeas/analysis.hpp>
#include <mpfeas/engine.hpp>
#include <mpfeas/model.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mpfeas {

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PeriodicityCheck {
    bool periodic = false;
    std::optional<Time> divergence;  // first t with sigma(t) != sigma(t + period)
};

// Compares the task-level schedule sigma(t) with sigma(t + period) for t in
// [start, start + period). Throws PreconditionError unless the trace covers
// [start, start + 2 period).
PeriodicityCheck check_schedule_periodicity(const Trace& trace, Time start, Time period);

// Simulates from 0 and captures theta at O_max + kP, k = 0, 1, ...
// Infeasible on the first deadline miss; feasible as soon as a captured state
// equals an earlier one; inconclusive after `max_windows` hyperperiods.
Verdict brute_force_feasibility(const Scenario& scenario, std::int64_t max_windows);

struct StateRepetition {
    Time first = 0;
    Time second = 0;
};

// First pair t1 < t2 in [from, trace.end] with equal snapshots. Requires a
// trace recorded with snapshot_every_instant.
std::optional<StateRepetition> find_state_repetition(const Trace& trace, Time from);

struct MonotonicityReport {
    bool pass = true;
    std::int64_t checked = 0;
    std::optional<JobId> job;
    std::optional<Time> time;
};

// For every job k of task i and every t >= O_i with R <= t <= R + D such that
// t + P is inside the trace and no deadline was missed up to t + P, checks
// eps_i^k(t) >= eps_i^{k + P/T_i}(t + P). Throws PreconditionError if the
// trace carries no progress series or is shorter than one hyperperiod.
MonotonicityReport execution_monotonicity_check(const Trace& trace, const Scenario& scenario);

struct StateOrderReport {
    bool pass = true;
    std::int64_t checked = 0;
    std::int64_t skipped = 0;  // instants whose t + P lies at or after a deadline miss
    std::optional<std::size_t> task;
    std::optional<Time> time;
};

// For each task i and t >= O_i with t + P inside the trace and no miss up to
// t + P: active(t) < active(t + P), or equal counts and
// executed(t) >= executed(t + P). Requires per-instant snapshots.
StateOrderReport state_order_check(const Trace& trace, const Scenario& scenario);

// ---------------------------------------------------------------------------
// Job sets with execution-time intervals.

struct JobSpec {
    Time release = 0;
    Rational min_requirement{1};
    Rational max_requirement{1};
    Time deadline = 1;  // absolute
};

// Jobs in decreasing priority order. platform.rates has one row per job.
struct JobSetSpec {
    std::vector<JobSpec> jobs;
    Platform platform;
};

// Throws std::invalid_argument on malformed specs.
void validate_job_set(const JobSetSpec& spec);

struct JobSetSchedule {
    std::vector<Assignment> assignments;  // from instant 0 until every job completed
    std::vector<Time> start;
    std::vector<Time> finish;

    bool meets_deadlines(const JobSetSpec& spec) const;
};

// Greedy work-conserving schedule of the first `prefix` jobs with the given
// requirements.
JobSetSchedule schedule_job_set(const JobSetSpec& spec, std::span<const Rational> requirements,
                                std::size_t prefix);

std::vector<Rational> minimum_realization(const JobSetSpec& spec);
std::vector<Rational> maximum_realization(const JobSetSpec& spec);
// Uniform over the grid of multiples of 1/q inside each interval, q being the
// lcm of the endpoint denominators.
template <typename Rng>
std::vector<Rational> sample_realization(const JobSetSpec& spec, Rng& rng);

struct PrefixTimes {
    std::size_t prefix = 0;   // number of jobs, 1-based
    bool plus_feasible = false;
    Time start_min = 0, start_max = 0;
    Time finish_min = 0, finish_max = 0;
    std::vector<Time> start_sampled;
    std::vector<Time> finish_sampled;
};

struct PredictabilityReport {
    bool pass = true;
    std::vector<PrefixTimes> prefixes;
    std::int64_t skipped_prefixes = 0;  // J+ prefix infeasible
    std::optional<std::size_t> violating_prefix;
};

PredictabilityReport predictability_harness(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed);

struct SubsetReport {
    bool pass = true;
    std::int64_t checked = 0;
    std::int64_t skipped_prefixes = 0;
    std::optional<std::size_t> prefix;
    std::optional<Time> time;
};

// Idle processors of every J+ prefix schedule are idle in the matching
// schedule of the minimum realization and of each sampled realization.
SubsetReport availability_subset_check(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed);

}  // namespace mpfeas

#include <mpfeas/detail/sample_realization.hpp>
