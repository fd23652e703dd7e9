#include "helpers.hpp"

#include <mpfeas/campaign.hpp>
#include <mpfeas/policy.hpp>

#include <doctest.h>

#include <random>

using namespace testing;

TEST_SUITE("policy") {

TEST_CASE("task priority orders") {
    CHECK(task_priority_order(PriorityPolicy::rm(), tasks({{0, 10, 10, 1}, {0, 5, 5, 1}, {0, 10, 10, 1}})) ==
          std::vector<std::size_t>{1, 0, 2});
    CHECK(task_priority_order(PriorityPolicy::dm(), tasks({{0, 9, 7, 1}, {0, 8, 7, 1}})) ==
          std::vector<std::size_t>{0, 1});
    CHECK(task_priority_order(PriorityPolicy::dm(), tasks({{0, 9, 7, 1}, {0, 8, 3, 1}})) ==
          std::vector<std::size_t>{1, 0});
    const auto three = tasks({{0, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 1, 1}});
    CHECK(task_priority_order(PriorityPolicy::explicit_order({2, 0, 1}), three) ==
          std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("invalid orders") {
    const auto two = tasks({{0, 1, 1, 1}, {0, 1, 1, 1}});
    CHECK_THROWS_AS(task_priority_order(PriorityPolicy::edf(), two), std::invalid_argument);
    CHECK_THROWS_AS(task_priority_order(PriorityPolicy::explicit_order({0, 0}), two), std::invalid_argument);
    CHECK_THROWS_AS(task_priority_order(PriorityPolicy::explicit_order({0}), two), std::invalid_argument);
    CHECK_THROWS_AS(task_priority_order(PriorityPolicy::explicit_order({0, 2}), two), std::invalid_argument);
}

TEST_CASE("job comparisons") {
    const auto ts = tasks({{0, 10, 10, 1}, {0, 10, 10, 1}, {0, 10, 10, 1}});
    const auto job = [&](std::size_t task, Time deadline) { return Job{{task, 1}, deadline - 10, deadline, R(1)}; };
    CHECK(compare_jobs(PriorityPolicy::edf(), ts, job(0, 5), job(2, 7)) == JobOrder::first_higher);
    CHECK(compare_jobs(PriorityPolicy::edf(), ts, job(1, 5), job(0, 5)) == JobOrder::second_higher);

    const auto fp = tasks({{0, 2, 2, 1}, {0, 3, 3, 1}});
    const auto a = make_job(fp[0], 0, 9);
    const auto b = make_job(fp[1], 1, 1);
    CHECK(compare_jobs(PriorityPolicy::rm(), fp, a, b) == JobOrder::first_higher);
    CHECK(compare_jobs(PriorityPolicy::rm(), fp, b, a) == JobOrder::second_higher);
}

TEST_CASE("policy properties") {
    for (auto p : {PriorityPolicy::rm(), PriorityPolicy::dm(), PriorityPolicy::explicit_order({0})}) {
        CHECK(p.task_level());
        CHECK(p.job_level_fixed());
    }
    CHECK_FALSE(PriorityPolicy::edf().task_level());
    CHECK(PriorityPolicy::edf().job_level_fixed());
    CHECK(PriorityPolicy::edf().request_dependent());
    CHECK(std::string(to_string(PolicyKind::explicit_order)) == "explicit");
}

namespace {

Job random_job(std::mt19937_64& rng, std::span<const Task> ts) {
    const auto i = static_cast<std::size_t>(rng() % ts.size());
    return make_job(ts[i], i, std::int64_t(rng() % 6 + 1));
}

}  // namespace

TEST_CASE("job priority is a strict total order and request-dependent") {
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const auto s = random_instance(seed);
        const JobPriority pr(s.policy, s.tasks);
        std::mt19937_64 rng(seed);
        const Time p = hyperperiod(s.tasks);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = random_job(rng, s.tasks);
            const auto b = random_job(rng, s.tasks);
            const auto c = random_job(rng, s.tasks);
            CHECK_FALSE(pr.higher(a, a));
            if (a.id != b.id) CHECK(pr.higher(a, b) != pr.higher(b, a));
            if (pr.higher(a, b) && pr.higher(b, c)) CHECK(pr.higher(a, c));

            const auto shift = [&](const Job& j) {
                const auto& t = s.tasks[j.id.task];
                return make_job(t, j.id.task, j.id.instance + p / t.period);
            };
            CHECK(pr.higher(a, b) == pr.higher(shift(a), shift(b)));
        }
    }
}

}
