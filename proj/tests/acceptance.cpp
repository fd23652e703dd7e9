// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <mpfeas/analysis.hpp>
#include <mpfeas/campaign.hpp>
#include <mpfeas/io.hpp>
#include <mpfeas/verify.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

using namespace mpfeas;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string tally_text(const CheckTally& t) {
    return std::to_string(t.pass) + " pass, " + std::to_string(t.fail) + " fail, " + std::to_string(t.skip) + " skip";
}

std::string first_failure(const CampaignReport& r, Check c) {
    for (const auto& rec : r.records)
        if (rec.result.check == c && rec.result.outcome == CheckOutcome::fail)
            return "; seed " + std::to_string(rec.seed) + ": " + rec.result.detail;
    return "";
}

bool clean(const CampaignReport& r, Check c, std::int64_t min_pass = 1) {
    const auto t = r.tally_of(c);
    return t.fail == 0 && t.pass >= min_pass;
}

Scenario dhall(PriorityPolicy policy) {
    Scenario s;
    s.tasks = {{0, 5, 5, 1}, {0, 5, 5, 1}, {0, 7, 7, 7}};
    s.platform = Platform::identical(3, 2);
    s.policy = std::move(policy);
    return s;
}

}  // namespace

int main() {
    constexpr std::int64_t instances = 1000;
    constexpr std::int64_t job_sets = 500;

    CampaignConfig cfg;
    cfg.instances = instances;
    cfg.job_sets = job_sets;
    const auto campaign = run_campaign(cfg);

    {
        const auto t = campaign.tally_of(Check::oracle_equivalence);
        const bool fast = campaign.seconds < 60.0;
        std::ostringstream d;
        d << instances << " instances, " << tally_text(t) << ", campaign " << campaign.seconds << " s"
          << first_failure(campaign, Check::oracle_equivalence);
        report(1, "oracle equivalence", clean(campaign, Check::oracle_equivalence, instances / 2) && fast, d.str());
    }
    report(2, "periodicity onset", clean(campaign, Check::periodicity_onset),
           tally_text(campaign.tally_of(Check::periodicity_onset)) + first_failure(campaign, Check::periodicity_onset));
    report(3, "synchronous origin periodicity", clean(campaign, Check::sync_origin),
           tally_text(campaign.tally_of(Check::sync_origin)) + first_failure(campaign, Check::sync_origin));
    {
        const auto p = campaign.tally_of(Check::predictability);
        const auto a = campaign.tally_of(Check::availability_subset);
        report(4, "predictability",
               clean(campaign, Check::predictability) && clean(campaign, Check::availability_subset) &&
                   p.pass + p.skip == job_sets,
               "chains: " + tally_text(p) + "; subset: " + tally_text(a) +
                   first_failure(campaign, Check::predictability) + first_failure(campaign, Check::availability_subset));
    }
    report(5, "monotonicity lemmas",
           clean(campaign, Check::execution_monotonicity) && clean(campaign, Check::state_order),
           "execution: " + tally_text(campaign.tally_of(Check::execution_monotonicity)) +
               "; state order: " + tally_text(campaign.tally_of(Check::state_order)) +
               first_failure(campaign, Check::execution_monotonicity) + first_failure(campaign, Check::state_order));

    {
        const auto started = std::chrono::steady_clock::now();
        const auto edf = select_test(dhall(PriorityPolicy::edf()));
        const auto rm = select_test(dhall(PriorityPolicy::rm()));
        const auto ex = select_test(dhall(PriorityPolicy::explicit_order({2, 0, 1})));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const auto miss_at_7 = [](const Verdict& v) {
            return v.outcome == Outcome::infeasible && v.miss && v.miss->time == 7;
        };
        // independent confirmation
        const auto bf_edf = brute_force_feasibility(dhall(PriorityPolicy::edf()), 4);
        const auto bf_ex = brute_force_feasibility(dhall(PriorityPolicy::explicit_order({2, 0, 1})), 4);
        const bool pass = miss_at_7(edf) && miss_at_7(rm) && ex.outcome == Outcome::feasible && miss_at_7(bf_edf) &&
                          bf_ex.outcome == Outcome::feasible && secs < 1.0;
        std::ostringstream d;
        d << "EDF " << to_string(edf.outcome) << (edf.miss ? " at t=" + std::to_string(edf.miss->time) : "") << ", RM "
          << to_string(rm.outcome) << (rm.miss ? " at t=" + std::to_string(rm.miss->time) : "") << ", order (3,1,2) "
          << to_string(ex.outcome) << ", " << secs * 1000 << " ms";
        report(6, "Dhall-style anomaly", pass, d.str());
    }

    report(7, "window-tightening equivalence", clean(campaign, Check::window_equivalence),
           tally_text(campaign.tally_of(Check::window_equivalence)) + first_failure(campaign, Check::window_equivalence));

    {
        // replay runs in the campaign on every instance; here also on a fresh block of 100
        CampaignConfig r;
        r.first_seed = 100001;
        r.instances = 100;
        r.checks = {Check::replay};
        const auto replay = run_campaign(r);
        bool identical = true;
        for (std::uint64_t seed = 1; seed <= 100 && identical; ++seed) {
            const auto s = random_instance(seed);
            const Time end = max_offset(s.tasks) + 2 * hyperperiod(s.tasks);
            identical = format_trace_text(run(s, end), s, 0) == format_trace_text(run(s, end), s, 0) &&
                        trace_to_json(run(s, end), s, 0).dump() == trace_to_json(run(s, end), s, 0).dump();
        }
        report(8, "determinism and replay",
               identical && clean(replay, Check::replay, 100) && clean(campaign, Check::replay, instances),
               std::string("byte-identical traces: ") + (identical ? "yes" : "no") + "; replay " +
                   tally_text(replay.tally_of(Check::replay)) + first_failure(replay, Check::replay));
    }

    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
