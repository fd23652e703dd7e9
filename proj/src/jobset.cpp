#include <mpfeas/verify.hpp>

#include <algorithm>
#include <random>

namespace mpfeas {

void validate_job_set(const JobSetSpec& spec) {
    if (spec.jobs.empty()) throw std::invalid_argument("job set is empty");
    if (spec.platform.processors < 1) throw std::invalid_argument("job set needs at least one processor");
    if (spec.platform.rates.size() != spec.jobs.size())
        throw std::invalid_argument("job set needs one rate row per job");
    for (std::size_t i = 0; i < spec.jobs.size(); ++i) {
        const auto& j = spec.jobs[i];
        const auto& row = spec.platform.rates[i];
        const std::string who = "job " + std::to_string(i + 1) + ": ";
        if (row.size() != spec.platform.processors) throw std::invalid_argument(who + "rate row length");
        if (std::any_of(row.begin(), row.end(), [](const Rational& r) { return r < 0; }))
            throw std::invalid_argument(who + "negative rate");
        if (std::none_of(row.begin(), row.end(), [](const Rational& r) { return r > 0; }))
            throw std::invalid_argument(who + "no eligible processor");
        if (j.min_requirement <= 0 || j.min_requirement > j.max_requirement)
            throw std::invalid_argument(who + "requirement interval must satisfy 0 < min <= max");
        if (j.release < 0 || j.deadline <= j.release)
            throw std::invalid_argument(who + "needs 0 <= release < deadline");
    }
}

bool JobSetSchedule::meets_deadlines(const JobSetSpec& spec) const {
    for (std::size_t i = 0; i < finish.size(); ++i)
        if (finish[i] > spec.jobs[i].deadline) return false;
    return true;
}

JobSetSchedule schedule_job_set(const JobSetSpec& spec, std::span<const Rational> requirements,
                                std::size_t prefix) {
    if (prefix > spec.jobs.size() || requirements.size() < prefix)
        throw std::invalid_argument("job prefix out of range");
    std::vector<std::vector<std::size_t>> orders(prefix);
    Time horizon = 1;
    for (std::size_t i = 0; i < prefix; ++i) {
        orders[i] = processor_order_for_task(spec.platform, i);
        const Rational slowest = spec.platform.rate(i, orders[i].back());
        const Rational steps = requirements[i] / slowest;
        horizon = std::max(horizon, spec.jobs[i].release) + steps.numerator() / steps.denominator() + 1;
    }

    JobSetSchedule s;
    s.start.assign(prefix, -1);
    s.finish.assign(prefix, -1);
    std::vector<Rational> executed(prefix, Rational(0));
    std::size_t done = 0;
    for (Time t = 0; done < prefix; ++t) {
        if (t > horizon) throw std::logic_error("job-set schedule did not terminate");
        std::vector<JobId> ranked;
        for (std::size_t i = 0; i < prefix; ++i)
            if (spec.jobs[i].release <= t && s.finish[i] < 0) ranked.push_back({i, 1});
        auto a = dispatch(ranked, orders, spec.platform.processors);
        for (std::size_t p = 0; p < a.size(); ++p) {
            if (!a[p]) continue;
            const auto i = a[p]->task;
            if (s.start[i] < 0) s.start[i] = t;
            executed[i] += spec.platform.rate(i, p);
            if (executed[i] >= requirements[i]) {
                s.finish[i] = t + 1;
                ++done;
            }
        }
        s.assignments.push_back(std::move(a));
    }
    return s;
}

std::vector<Rational> minimum_realization(const JobSetSpec& spec) {
    std::vector<Rational> r;
    for (const auto& j : spec.jobs) r.push_back(j.min_requirement);
    return r;
}

std::vector<Rational> maximum_realization(const JobSetSpec& spec) {
    std::vector<Rational> r;
    for (const auto& j : spec.jobs) r.push_back(j.max_requirement);
    return r;
}

namespace {

std::vector<std::vector<Rational>> draw_samples(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> out;
    for (std::int64_t s = 0; s < samples; ++s) out.push_back(sample_realization(spec, rng));
    return out;
}

}  // namespace

PredictabilityReport predictability_harness(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed) {
    validate_job_set(spec);
    const auto lo = minimum_realization(spec);
    const auto hi = maximum_realization(spec);
    const auto drawn = draw_samples(spec, samples, seed);

    PredictabilityReport report;
    for (std::size_t i = 1; i <= spec.jobs.size(); ++i) {
        const auto plus = schedule_job_set(spec, hi, i);
        if (!plus.meets_deadlines(spec)) {
            ++report.skipped_prefixes;
            continue;
        }
        const auto minus = schedule_job_set(spec, lo, i);
        PrefixTimes pt;
        pt.prefix = i;
        pt.plus_feasible = true;
        pt.start_min = minus.start.back();
        pt.finish_min = minus.finish.back();
        pt.start_max = plus.start.back();
        pt.finish_max = plus.finish.back();
        bool ok = pt.start_min <= pt.start_max && pt.finish_min <= pt.finish_max;
        for (const auto& r : drawn) {
            const auto mid = schedule_job_set(spec, r, i);
            pt.start_sampled.push_back(mid.start.back());
            pt.finish_sampled.push_back(mid.finish.back());
            ok = ok && pt.start_min <= mid.start.back() && mid.start.back() <= pt.start_max &&
                 pt.finish_min <= mid.finish.back() && mid.finish.back() <= pt.finish_max;
        }
        report.prefixes.push_back(std::move(pt));
        if (!ok && report.pass) {
            report.pass = false;
            report.violating_prefix = i;
        }
    }
    return report;
}

SubsetReport availability_subset_check(const JobSetSpec& spec, std::int64_t samples, std::uint64_t seed) {
    validate_job_set(spec);
    const auto hi = maximum_realization(spec);
    auto realizations = draw_samples(spec, samples, seed);
    realizations.insert(realizations.begin(), minimum_realization(spec));

    SubsetReport report;
    const auto idle_at = [&](const JobSetSchedule& s, Time t) {
        if (t < static_cast<Time>(s.assignments.size())) return availability(s.assignments[t]);
        std::vector<std::size_t> all(spec.platform.processors);
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
        return all;
    };
    for (std::size_t i = 1; i <= spec.jobs.size(); ++i) {
        const auto plus = schedule_job_set(spec, hi, i);
        if (!plus.meets_deadlines(spec)) {
            ++report.skipped_prefixes;
            continue;
        }
        for (const auto& r : realizations) {
            const auto sched = schedule_job_set(spec, r, i);
            const auto horizon = static_cast<Time>(std::max(plus.assignments.size(), sched.assignments.size()));
            for (Time t = 0; t < horizon; ++t) {
                const auto a_plus = idle_at(plus, t);
                const auto a = idle_at(sched, t);
                ++report.checked;
                if (!std::includes(a.begin(), a.end(), a_plus.begin(), a_plus.end())) {
                    report.pass = false;
                    report.prefix = i;
                    report.time = t;
                    return report;
                }
            }
        }
    }
    return report;
}

}  // namespace mpfeas
