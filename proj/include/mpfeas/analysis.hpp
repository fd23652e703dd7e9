#pragma once

// Exact feasibility tests for periodic systems under global job-level
// fixed-priority scheduling.
//
// Every test simulates the schedule from instant 0, checks deadlines inside a
// window and compares system states at the window's boundaries. A deadline
// miss counts toward a window [a, b) when its deadline instant d satisfies
// a < d <= b, i.e. the job's deadline falls in the window as observed by a
// simulation that stops at b.

#include <mpfeas/engine.hpp>
#include <mpfeas/model.hpp>
#include <mpfeas/policy.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpfeas {

// S_1 = O_1, S_i = max(O_i, O_i + ceil((S_{i-1} - O_i) / T_i) T_i).
// `ordered` is sorted by decreasing priority.
std::vector<Time> compute_S(std::span<const Task> ordered);
// Same recurrence plus the prefix hyperperiod P_i for i > 1.
std::vector<Time> compute_Shat(std::span<const Task> ordered);
// X_n = S_n, X_i = O_i + floor((X_{i+1} - O_i) / T_i) T_i.
std::vector<Time> compute_X(std::span<const Task> ordered, Time s_n);

struct PeriodicityBounds {
    std::vector<std::size_t> priority_order;  // original positions, highest first
    Time hyperperiod = 1;
    // All per-rank: entry r belongs to task priority_order[r].
    std::vector<Time> prefix_hyperperiods;
    std::vector<Time> S;
    std::vector<Time> Shat;
    std::vector<Time> X;
};

// Throws std::invalid_argument for policies without a task-level order.
PeriodicityBounds periodicity_bounds(const Scenario& scenario);

enum class Outcome { feasible, infeasible, inconclusive };

const char* to_string(Outcome o);

enum class TestKind {
    sync_constrained,      // misses in [0, P)
    sync_arbitrary,        // misses in [0, P) and theta(0) = theta(P)
    async_constrained,     // misses in [0, S_n + P) and theta(S_n) = theta(S_n + P)
    async_arbitrary,       // misses in [0, Shat_n + P) and theta(Shat_n) = theta(Shat_n + P)
    edf_periodicity,       // simulate hyperperiod by hyperperiod until states repeat
    brute_force,           // state-repetition oracle
};

const char* to_string(TestKind k);

struct Interval {
    Time begin = 0;
    Time end = 0;
};

struct StatePair {
    Time first_time = 0;
    SystemState first;
    Time second_time = 0;
    SystemState second;
};

struct Verdict {
    Outcome outcome = Outcome::inconclusive;
    TestKind test = TestKind::brute_force;
    Interval interval;
    std::optional<Event> miss;                      // first counted deadline miss
    std::optional<std::size_t> mismatched_task;     // 0-based; state-mismatch witness
    std::optional<StatePair> states;
    std::optional<PeriodicityBounds> bounds;
    std::int64_t iterations = 0;                    // hyperperiods simulated past the first boundary
    std::int64_t budget = 0;
};

class AnalysisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AsyncConstrainedOptions {
    bool use_x = false;             // check misses only in [X_1, S_n + P)
    bool per_task_windows = false;  // check task i only in [S_i, S_i + P_i); overrides use_x
};

Verdict fp_test_async_constrained(const Scenario& scenario, AsyncConstrainedOptions options = {});
Verdict fp_test_async_arbitrary(const Scenario& scenario);
Verdict fp_test_sync_constrained(const Scenario& scenario);
Verdict fp_test_sync_arbitrary(const Scenario& scenario);

inline constexpr std::int64_t default_edf_budget = 64;

Verdict edf_test(const Scenario& scenario, std::int64_t hyperperiod_budget = default_edf_budget);

struct SelectOptions {
    AsyncConstrainedOptions windows;
    std::int64_t edf_budget = default_edf_budget;
};

// Routes to the strongest applicable exact test.
Verdict select_test(const Scenario& scenario, const SelectOptions& options = {});

}  // namespace mpfeas
