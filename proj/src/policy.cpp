#include <mpfeas/policy.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace mpfeas {

const char* to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::explicit_order: return "explicit";
    case PolicyKind::rate_monotonic: return "rm";
    case PolicyKind::deadline_monotonic: return "dm";
    case PolicyKind::edf: return "edf";
    }
    return "?";
}

std::vector<std::size_t> task_priority_order(const PriorityPolicy& policy, std::span<const Task> tasks) {
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    switch (policy.kind) {
    case PolicyKind::edf:
        throw std::invalid_argument("EDF has no task-level priority order");
    case PolicyKind::explicit_order: {
        auto sorted = policy.order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != order)
            throw std::invalid_argument("explicit priority order is not a permutation of the tasks");
        return policy.order;
    }
    case PolicyKind::rate_monotonic:
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return tasks[a].period < tasks[b].period; });
        return order;
    case PolicyKind::deadline_monotonic:
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return tasks[a].deadline < tasks[b].deadline; });
        return order;
    }
    return order;
}

JobPriority::JobPriority(const PriorityPolicy& policy, std::span<const Task> tasks) : policy_(policy) {
    rank_.resize(tasks.size());
    if (policy.task_level()) {
        const auto order = task_priority_order(policy, tasks);
        for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
    } else {
        std::iota(rank_.begin(), rank_.end(), std::size_t{0});
    }
}

bool JobPriority::higher(const Job& a, const Job& b) const {
    if (policy_.kind == PolicyKind::edf)
        return std::tie(a.deadline, rank_[a.id.task], a.arrival) <
               std::tie(b.deadline, rank_[b.id.task], b.arrival);
    return std::tie(rank_[a.id.task], a.id.instance) < std::tie(rank_[b.id.task], b.id.instance);
}

JobOrder compare_jobs(const PriorityPolicy& policy, std::span<const Task> tasks, const Job& a, const Job& b) {
    return JobPriority(policy, tasks).higher(a, b) ? JobOrder::first_higher : JobOrder::second_higher;
}

}  // namespace mpfeas
