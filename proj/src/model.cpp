#include <mpfeas/model.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mpfeas {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

const char* to_string(DeadlineClass c) {
    switch (c) {
    case DeadlineClass::implicit: return "implicit";
    case DeadlineClass::constrained: return "constrained";
    case DeadlineClass::arbitrary: return "arbitrary";
    }
    return "?";
}

DeadlineClass deadline_class(const Task& task) {
    if (task.deadline == task.period) return DeadlineClass::implicit;
    if (task.deadline < task.period) return DeadlineClass::constrained;
    return DeadlineClass::arbitrary;
}

DeadlineClass deadline_class(std::span<const Task> tasks) {
    auto result = DeadlineClass::implicit;
    for (const auto& t : tasks) result = std::max(result, deadline_class(t));
    return result;
}

bool is_synchronous(std::span<const Task> tasks) {
    return std::all_of(tasks.begin(), tasks.end(),
                       [&](const Task& t) { return t.offset == tasks.front().offset; });
}

Time job_arrival(const Task& task, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("job instance index must be >= 1");
    return task.offset + (k - 1) * task.period;
}

Job make_job(const Task& task, std::size_t task_index, std::int64_t k) {
    Job job;
    job.id = {task_index, k};
    job.arrival = job_arrival(task, k);
    job.deadline = job.arrival + task.deadline;
    job.requirement = Rational(task.wcet);
    return job;
}

Time hyperperiod(std::span<const Task> tasks, std::size_t prefix) {
    if (prefix < 1 || prefix > tasks.size())
        throw std::invalid_argument("hyperperiod prefix out of range");
    Time p = 1;
    for (std::size_t i = 0; i < prefix; ++i) {
        const Time g = std::gcd(p, tasks[i].period);
        Time next = 0;
        if (__builtin_mul_overflow(p / g, tasks[i].period, &next))
            throw std::overflow_error("hyperperiod overflows 64-bit time");
        p = next;
    }
    return p;
}

Time hyperperiod(std::span<const Task> tasks) { return hyperperiod(tasks, tasks.size()); }

Time max_offset(std::span<const Task> tasks) {
    Time o = 0;
    for (const auto& t : tasks) o = std::max(o, t.offset);
    return o;
}

const char* to_string(PlatformKind k) {
    switch (k) {
    case PlatformKind::identical: return "identical";
    case PlatformKind::uniform: return "uniform";
    case PlatformKind::unrelated: return "unrelated";
    }
    return "?";
}

Platform Platform::identical(std::size_t tasks, std::size_t processors) {
    Platform p;
    p.processors = processors;
    p.rates.assign(tasks, std::vector<Rational>(processors, Rational(1)));
    return p;
}

Platform Platform::uniform(std::size_t tasks, std::vector<Rational> speeds) {
    Platform p;
    p.processors = speeds.size();
    p.rates.assign(tasks, speeds);
    return p;
}

PlatformKind Platform::kind() const {
    if (rates.empty()) return PlatformKind::identical;
    const bool rows_equal = std::all_of(rates.begin(), rates.end(),
                                        [&](const auto& row) { return row == rates.front(); });
    if (!rows_equal) return PlatformKind::unrelated;
    const bool all_one = std::all_of(rates.front().begin(), rates.front().end(),
                                     [](const Rational& r) { return r == Rational(1); });
    return all_one ? PlatformKind::identical : PlatformKind::uniform;
}

std::vector<std::size_t> processor_order_for_task(const Platform& platform, std::size_t task) {
    const auto& row = platform.rates.at(task);
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] > 0) order.push_back(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    return order;
}

std::string to_string(const TaskState& s) {
    std::ostringstream out;
    out << '(' << s.active << ',' << s.elapsed << ',' << to_string(s.executed) << ')';
    return out.str();
}

std::string to_string(const SystemState& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
        if (i) out += ' ';
        out += to_string(s.tasks[i]);
    }
    return out + "]";
}

bool within_state_bounds(const TaskState& s, const Task& task) {
    if (!s.released())
        return s.active == -1 && s.elapsed > 0 && s.elapsed <= task.offset && s.executed == Rational(0);
    const std::int64_t max_active = ceil_div(task.deadline, task.period);
    if (s.active > max_active) return false;
    if (s.elapsed < 0 || s.elapsed >= task.period * max_active) return false;
    if (s.executed < 0 || s.executed >= task.wcet) return false;
    if (s.active == 0 && s.executed != Rational(0)) return false;
    return true;
}

namespace {

std::string task_label(std::size_t i) { return "task " + std::to_string(i + 1); }

std::string describe(const std::vector<ValidationError>& errors) {
    std::string out = "invalid task system:";
    for (const auto& e : errors) out += " " + e.message + ";";
    return out;
}

}  // namespace

ValidationResult validate_task_system(std::span<const Task> tasks, const Platform& platform) {
    ValidationResult result;
    auto& errs = result.errors;
    if (tasks.empty()) {
        errs.push_back({ValidationCode::empty_system, std::nullopt, "empty task system"});
        return result;
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        if (t.period < 1)
            errs.push_back({ValidationCode::non_positive_period, i, task_label(i) + ": period must be >= 1"});
        if (t.wcet < 1)
            errs.push_back({ValidationCode::non_positive_wcet, i, task_label(i) + ": wcet must be >= 1"});
        if (t.deadline < 1)
            errs.push_back({ValidationCode::non_positive_deadline, i, task_label(i) + ": deadline must be >= 1"});
        if (t.offset < 0)
            errs.push_back({ValidationCode::negative_offset, i, task_label(i) + ": offset must be >= 0"});
    }
    if (platform.processors < 1 || platform.rates.size() != tasks.size()) {
        errs.push_back({ValidationCode::bad_platform_shape, std::nullopt,
                        "platform needs >= 1 processor and one rate row per task"});
        return result;
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& row = platform.rates[i];
        if (row.size() != platform.processors) {
            errs.push_back({ValidationCode::bad_platform_shape, i,
                            task_label(i) + ": rate row length differs from processor count"});
            continue;
        }
        if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return r < 0; }))
            errs.push_back({ValidationCode::negative_rate, i, task_label(i) + ": negative execution rate"});
        if (std::none_of(row.begin(), row.end(), [](const Rational& r) { return r > 0; }))
            errs.push_back({ValidationCode::no_eligible_processor, i, task_label(i) + ": no eligible processor"});
    }
    if (!errs.empty()) return result;

    ValidatedSystem sys;
    sys.tasks.assign(tasks.begin(), tasks.end());
    sys.synchronous = is_synchronous(tasks);
    if (sys.synchronous) {
        sys.offset_shift = tasks.front().offset;
        for (auto& t : sys.tasks) t.offset = 0;
    }
    sys.deadline_class = deadline_class(tasks);
    sys.platform_kind = platform.kind();
    result.system = std::move(sys);
    return result;
}

InvalidInput::InvalidInput(std::vector<ValidationError> errors)
    : std::invalid_argument(describe(errors)), errors_(std::move(errors)) {}

ValidatedSystem require_valid(std::span<const Task> tasks, const Platform& platform) {
    auto r = validate_task_system(tasks, platform);
    if (!r.ok()) throw InvalidInput(std::move(r.errors));
    return std::move(*r.system);
}

Time floor_div(Time a, Time b) {
    Time q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Time ceil_div(Time a, Time b) { return -floor_div(-a, b); }

Time floor_mod(Time a, Time b) { return a - floor_div(a, b) * b; }

}  // namespace mpfeas
