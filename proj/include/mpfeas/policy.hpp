#pragma once

#include <mpfeas/model.hpp>

#include <span>
#include <string>
#include <vector>

namespace mpfeas {

enum class PolicyKind { explicit_order, rate_monotonic, deadline_monotonic, edf };

// Every shipped policy is deterministic, memoryless, job-level fixed-priority
// and request-dependent; only the task-level flag varies.
struct PriorityPolicy {
    PolicyKind kind = PolicyKind::rate_monotonic;
    std::vector<std::size_t> order;  // explicit_order only: 0-based task positions, highest first

    static PriorityPolicy rm() { return {PolicyKind::rate_monotonic, {}}; }
    static PriorityPolicy dm() { return {PolicyKind::deadline_monotonic, {}}; }
    static PriorityPolicy edf() { return {PolicyKind::edf, {}}; }
    static PriorityPolicy explicit_order(std::vector<std::size_t> order) {
        return {PolicyKind::explicit_order, std::move(order)};
    }

    bool task_level() const { return kind != PolicyKind::edf; }
    bool job_level_fixed() const { return true; }
    bool request_dependent() const { return true; }
    bool memoryless() const { return true; }
    bool deterministic() const { return true; }

    bool operator==(const PriorityPolicy&) const = default;
};

const char* to_string(PolicyKind k);

// Task positions from highest to lowest priority. RM sorts by period, DM by
// relative deadline, ties by ascending index. Throws std::invalid_argument
// for EDF or for an explicit order that is not a permutation.
std::vector<std::size_t> task_priority_order(const PriorityPolicy& policy, std::span<const Task> tasks);

enum class JobOrder { first_higher, second_higher };

// Strict total order over jobs, independent of the query instant.
//   task-level: task rank, then instance (FIFO within a task);
//   EDF:        absolute deadline, then task index, then arrival.
class JobPriority {
public:
    JobPriority(const PriorityPolicy& policy, std::span<const Task> tasks);

    bool higher(const Job& a, const Job& b) const;

    const PriorityPolicy& policy() const { return policy_; }

private:
    PriorityPolicy policy_;
    std::vector<std::size_t> rank_;  // rank_[task] = 0 for the highest priority task
};

JobOrder compare_jobs(const PriorityPolicy& policy, std::span<const Task> tasks, const Job& a, const Job& b);

}  // namespace mpfeas
