#pragma once

// File formats.
//
// Task-system file:
//   {"tasks":    [{"O":0,"T":5,"D":5,"C":1}, ...],
//    "platform": {"m":2, "rates":[[1,1], ...]},      one row per task
//    "scheduler":{"policy":"rm"|"dm"|"edf"|"explicit", "order":[3,1,2]}}
// Rationals are JSON integers or "p/q" strings in lowest terms. "rates" may be
// replaced by "speeds":[...] (uniform) or omitted (identical unit-rate).
// A missing scheduler means "rm". Task and order indices in files are 1-based.
//
// Job-set file (predictability harness), jobs in decreasing priority:
//   {"m":2, "jobs":[{"r":0,"e":[1,2],"d":3,"rates":[1,2]}, ...]}

#include <mpfeas/analysis.hpp>
#include <mpfeas/engine.hpp>
#include <mpfeas/verify.hpp>

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mpfeas {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

Rational parse_rational(const Json& value);
Json rational_to_json(const Rational& r);

// `order` is 1-based, as in files and on the command line.
PriorityPolicy make_policy(std::string_view name, const std::vector<std::size_t>& order = {});
std::string job_label(const JobId& id);

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
Json scenario_to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

JobSetSpec parse_job_set(std::string_view text);
JobSetSpec load_job_set(const std::filesystem::path& path);
std::string serialize_job_set(const JobSetSpec& spec);

Json state_to_json(const SystemState& state);
Json bounds_to_json(const PeriodicityBounds& bounds);
std::string format_bounds_text(const PeriodicityBounds& bounds);

// {"outcome", "theorem", "interval":[a,b], "witness", "bounds", "states", ...}
Json verdict_to_json(const Verdict& verdict);
std::string format_verdict_text(const Verdict& verdict);

// One line per instant:  "t | p1:1.1 p2:- | arrival 3.1, completion 1.1"
// preceded by '#' header lines. Events at the final instant go on a trailing
// "# at <end>:" line.
std::string format_trace_text(const Trace& trace, const Scenario& scenario, Time from);
Json trace_to_json(const Trace& trace, const Scenario& scenario, Time from);

Json predictability_to_json(const PredictabilityReport& report, const SubsetReport& subset);

}  // namespace mpfeas
