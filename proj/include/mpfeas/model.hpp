#pragma once

// Task, job, platform and system-state types shared by every other module.
//
// Time and task parameters are integers. Work (executed amounts and
// execution rates) is an exact rational so state comparison is exact.

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpfeas {

using Time = std::int64_t;
using Rational = boost::rational<std::int64_t>;

// Formats as "p" or "p/q".
std::string to_string(const Rational& r);

struct Task {
    Time offset = 0;    // O
    Time period = 1;    // T
    Time deadline = 1;  // D, relative
    Time wcet = 1;      // C

    bool operator==(const Task&) const = default;
};

enum class DeadlineClass { implicit, constrained, arbitrary };

const char* to_string(DeadlineClass c);

DeadlineClass deadline_class(const Task& task);
// Weakest class over all tasks.
DeadlineClass deadline_class(std::span<const Task> tasks);

// True iff every offset is equal; such systems are analysed as if the common
// offset were zero.
bool is_synchronous(std::span<const Task> tasks);

// Identity of the k-th job (k >= 1) of a task. `task` is a 0-based position
// in the task system; text formats print it 1-based.
struct JobId {
    std::size_t task = 0;
    std::int64_t instance = 1;

    auto operator<=>(const JobId&) const = default;
};

struct Job {
    JobId id;
    Time arrival = 0;
    Time deadline = 0;  // absolute
    Rational requirement{1};
};

// O + (k-1)T. Throws std::invalid_argument when k < 1.
Time job_arrival(const Task& task, std::int64_t k);

Job make_job(const Task& task, std::size_t task_index, std::int64_t k);

// lcm of the first `prefix` periods. Throws std::overflow_error when the
// result does not fit in Time.
Time hyperperiod(std::span<const Task> tasks, std::size_t prefix);
Time hyperperiod(std::span<const Task> tasks);

Time max_offset(std::span<const Task> tasks);

enum class PlatformKind { identical, uniform, unrelated };

const char* to_string(PlatformKind k);

// rates[i][j] is the execution rate of task i on processor j.
struct Platform {
    std::size_t processors = 1;
    std::vector<std::vector<Rational>> rates;

    static Platform identical(std::size_t tasks, std::size_t processors);
    static Platform uniform(std::size_t tasks, std::vector<Rational> speeds);

    const Rational& rate(std::size_t task, std::size_t processor) const {
        return rates[task][processor];
    }

    PlatformKind kind() const;

    bool operator==(const Platform&) const = default;
};

// Eligible processors of a task, fastest first; equal rates keep ascending
// processor index.
std::vector<std::size_t> processor_order_for_task(const Platform& platform, std::size_t task);

// Per-task component of theta(t). The triple is (-1, time to first release, 0)
// before the first release, otherwise (active jobs, elapsed, executed):
//   elapsed  = t - arrival of the oldest active job, or (t - O) mod T when
//              no job is active;
//   executed = work done on the oldest active job, 0 when none is active.
struct TaskState {
    std::int64_t active = -1;
    Time elapsed = 0;
    Rational executed{0};

    bool released() const { return active >= 0; }
    bool operator==(const TaskState&) const = default;
};

struct SystemState {
    std::vector<TaskState> tasks;

    bool operator==(const SystemState&) const = default;
};

std::string to_string(const TaskState& s);
std::string to_string(const SystemState& s);

// Bounds from the state definition; valid for states captured before any
// deadline miss.
bool within_state_bounds(const TaskState& s, const Task& task);

enum class ValidationCode {
    empty_system,
    non_positive_period,
    non_positive_wcet,
    non_positive_deadline,
    negative_offset,
    bad_platform_shape,
    negative_rate,
    no_eligible_processor,
};

struct ValidationError {
    ValidationCode code;
    std::optional<std::size_t> task;  // 0-based
    std::string message;
};

struct ValidatedSystem {
    std::vector<Task> tasks;  // offsets normalized to 0 when synchronous
    Time offset_shift = 0;    // common offset removed by normalization
    DeadlineClass deadline_class = DeadlineClass::implicit;
    bool synchronous = true;
    PlatformKind platform_kind = PlatformKind::identical;
};

struct ValidationResult {
    std::optional<ValidatedSystem> system;
    std::vector<ValidationError> errors;

    bool ok() const { return system.has_value(); }
};

ValidationResult validate_task_system(std::span<const Task> tasks, const Platform& platform);

class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(std::vector<ValidationError> errors);

    const std::vector<ValidationError>& errors() const { return errors_; }

private:
    std::vector<ValidationError> errors_;
};

// Throws InvalidInput when validation fails.
ValidatedSystem require_valid(std::span<const Task> tasks, const Platform& platform);

Time floor_div(Time a, Time b);
Time ceil_div(Time a, Time b);
Time floor_mod(Time a, Time b);

}  // namespace mpfeas
