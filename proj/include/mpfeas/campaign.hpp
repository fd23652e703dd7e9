#pragma once

// Seeded random instances, property checks against the simulator, shrinking
// and a parallel campaign runner.

#include <mpfeas/analysis.hpp>
#include <mpfeas/engine.hpp>
#include <mpfeas/io.hpp>
#include <mpfeas/verify.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mpfeas {

// n in 1..4, T in 1..6, O in 0..8, C in 1..T, D in 1..2T, m in 1..3,
// rates in {0,1,2,3} with at least one eligible processor per task.
Scenario random_instance(std::uint64_t seed);

// 1..5 jobs, releases in 0..6, integer or half-integer requirement bounds,
// m in 1..3, rates in {0,1,2,3}.
JobSetSpec random_job_set(std::uint64_t seed);

enum class Check {
    oracle_equivalence,      // every applicable exact test agrees with the oracle
    window_equivalence,      // async constrained verdict independent of window options
    periodicity_onset,       // sigma periodic from S_n (constrained) or Shat_n
    sync_origin,             // synchronous: theta(0) = theta(P), sigma periodic from 0
    execution_monotonicity,
    state_order,
    replay,                  // identical reruns; resuming from theta(t) reproduces the suffix
    predictability,          // job sets
    availability_subset,     // job sets
};

const char* to_string(Check c);
std::optional<Check> parse_check(std::string_view name);
std::vector<Check> all_checks();
bool is_job_set_check(Check c);

enum class CheckOutcome { pass, fail, skip };

const char* to_string(CheckOutcome o);

struct CheckResult {
    Check check = Check::oracle_equivalence;
    CheckOutcome outcome = CheckOutcome::skip;
    std::string detail;
};

inline constexpr std::int64_t default_oracle_windows = 64;

// Checks on task systems. `oracle` is brute_force_feasibility's verdict for
// the same scenario; checks whose hypotheses need a feasible system skip
// unless it is conclusively feasible.
CheckResult check_oracle_equivalence(const Scenario& s, const Verdict& oracle);
CheckResult check_window_equivalence(const Scenario& s);
CheckResult check_periodicity_onset(const Scenario& s, const Verdict& oracle);
CheckResult check_sync_origin(const Scenario& s, const Verdict& oracle);
CheckResult check_execution_monotonicity(const Scenario& s, const Verdict& oracle);
CheckResult check_state_order(const Scenario& s, const Verdict& oracle);
CheckResult check_replay(const Scenario& s, std::uint64_t seed);

CheckResult check_predictability(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed);
CheckResult check_availability_subset(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed);

// Runs one task-system check, computing the oracle verdict as needed.
CheckResult run_check(Check c, const Scenario& s, std::uint64_t seed,
                      std::int64_t oracle_windows = default_oracle_windows);

// Greedy shrinking while `fails` keeps holding: drop tasks (jobs), then lower
// C (e+), then lower T and D towards 1.
Scenario shrink(const Scenario& s, const std::function<bool(const Scenario&)>& fails);
JobSetSpec shrink(const JobSetSpec& spec, const std::function<bool(const JobSetSpec&)>& fails);

struct CampaignConfig {
    std::uint64_t first_seed = 1;
    std::int64_t instances = 1000;  // task systems, seeds first_seed, first_seed + 1, ...
    std::int64_t job_sets = 0;      // job sets, same seed sequence
    std::vector<Check> checks = all_checks();
    std::int64_t oracle_windows = default_oracle_windows;
    std::int64_t samples = 8;       // realizations per job set
    unsigned threads = 0;           // 0: hardware concurrency
    std::optional<std::filesystem::path> counterexample_dir;
};

struct CampaignRecord {
    std::uint64_t seed = 0;
    Json instance;
    CheckResult result;
    std::optional<std::filesystem::path> counterexample;
};

struct CheckTally {
    std::int64_t pass = 0;
    std::int64_t fail = 0;
    std::int64_t skip = 0;
};

struct CampaignReport {
    // Task systems in seed order (checks in config order), then job sets.
    std::vector<CampaignRecord> records;
    std::map<Check, CheckTally> tally;
    double seconds = 0;

    bool all_pass() const;
    CheckTally tally_of(Check c) const;
};

CampaignReport run_campaign(const CampaignConfig& config);

// One JSON object per line: {"seed", "instance", "check", "outcome", ...}.
void write_jsonl(const CampaignReport& report, std::ostream& out);

}  // namespace mpfeas
