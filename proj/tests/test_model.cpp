#include "helpers.hpp"

#include <mpfeas/campaign.hpp>
#include <mpfeas/model.hpp>

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace testing;

TEST_SUITE("model") {

TEST_CASE("job arrivals") {
    CHECK(job_arrival({0, 2, 2, 1}, 1) == 0);
    CHECK(job_arrival({5, 10, 10, 1}, 3) == 25);
    CHECK(job_arrival({7, 5, 5, 1}, 2) == 12);
    CHECK_THROWS_AS(job_arrival({0, 2, 2, 1}, 0), std::invalid_argument);

    const auto j = make_job({3, 4, 6, 2}, 1, 2);
    CHECK(j.id == JobId{1, 2});
    CHECK(j.arrival == 7);
    CHECK(j.deadline == 13);
    CHECK(j.requirement == R(2));
}

TEST_CASE("arrivals step by the period") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Task t{std::int64_t(rng() % 9), std::int64_t(rng() % 6 + 1), 1, 1};
        for (std::int64_t k = 1; k < 20; ++k) CHECK(job_arrival(t, k + 1) - job_arrival(t, k) == t.period);
    }
}

TEST_CASE("hyperperiods") {
    const auto a = tasks({{0, 2, 2, 1}, {0, 3, 3, 1}});
    CHECK(hyperperiod(a, 2) == 6);
    CHECK(hyperperiod(tasks({{0, 4, 4, 1}}), 1) == 4);
    const auto b = tasks({{0, 6, 6, 1}, {0, 10, 10, 1}, {0, 15, 15, 1}});
    CHECK(hyperperiod(b) == 30);
    CHECK(hyperperiod(b, 1) == 6);
    CHECK_THROWS_AS(hyperperiod(b, 0), std::invalid_argument);

    std::vector<Task> huge;
    for (Time p : {1000003, 1000033, 1000037, 1000039}) huge.push_back({0, p, p, 1});
    CHECK_THROWS_AS(hyperperiod(huge), std::overflow_error);
}

TEST_CASE("prefix hyperperiods divide each other") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Task> ts;
        for (int i = 0; i < 5; ++i) ts.push_back({0, std::int64_t(rng() % 12 + 1), 1, 1});
        for (std::size_t i = 1; i < ts.size(); ++i) CHECK(hyperperiod(ts, i + 1) % hyperperiod(ts, i) == 0);
    }
}

TEST_CASE("deadline classes and synchrony") {
    CHECK(deadline_class(Task{0, 2, 2, 1}) == DeadlineClass::implicit);
    CHECK(deadline_class(Task{0, 2, 1, 1}) == DeadlineClass::constrained);
    CHECK(deadline_class(Task{0, 2, 3, 1}) == DeadlineClass::arbitrary);
    CHECK(deadline_class(tasks({{0, 2, 2, 1}, {0, 4, 3, 1}})) == DeadlineClass::constrained);
    CHECK(deadline_class(tasks({{0, 2, 2, 1}, {0, 4, 9, 1}})) == DeadlineClass::arbitrary);
    CHECK(is_synchronous(tasks({{3, 2, 2, 1}, {3, 4, 4, 1}})));
    CHECK_FALSE(is_synchronous(tasks({{0, 2, 2, 1}, {1, 4, 4, 1}})));
}

TEST_CASE("validation") {
    SUBCASE("implicit synchronous system") {
        const auto ts = tasks({{0, 2, 2, 1}});
        const auto r = validate_task_system(ts, Platform::identical(1, 1));
        REQUIRE(r.ok());
        CHECK(r.system->deadline_class == DeadlineClass::implicit);
        CHECK(r.system->synchronous);
    }
    SUBCASE("arbitrary deadline") {
        const auto ts = tasks({{0, 2, 3, 1}});
        const auto r = validate_task_system(ts, Platform::identical(1, 1));
        REQUIRE(r.ok());
        CHECK(r.system->deadline_class == DeadlineClass::arbitrary);
    }
    SUBCASE("common offset is normalized away") {
        const auto ts = tasks({{4, 2, 2, 1}, {4, 3, 3, 1}});
        const auto r = validate_task_system(ts, Platform::identical(2, 1));
        REQUIRE(r.ok());
        CHECK(r.system->offset_shift == 4);
        CHECK(r.system->tasks[0].offset == 0);
        CHECK(r.system->tasks[1].offset == 0);
    }
    SUBCASE("no eligible processor") {
        const auto ts = tasks({{0, 2, 2, 1}});
        Platform p;
        p.processors = 2;
        p.rates = {{R(0), R(0)}};
        const auto r = validate_task_system(ts, p);
        REQUIRE_FALSE(r.ok());
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].code == ValidationCode::no_eligible_processor);
        CHECK(r.errors[0].message.find("no eligible processor") != std::string::npos);
        CHECK_THROWS_AS(require_valid(ts, p), InvalidInput);
    }
    SUBCASE("every parameter error is reported") {
        const auto ts = tasks({{-1, 0, 0, 0}});
        const auto r = validate_task_system(ts, Platform::identical(1, 1));
        REQUIRE_FALSE(r.ok());
        std::vector<ValidationCode> codes;
        for (const auto& e : r.errors) codes.push_back(e.code);
        for (auto c : {ValidationCode::negative_offset, ValidationCode::non_positive_period,
                       ValidationCode::non_positive_deadline, ValidationCode::non_positive_wcet})
            CHECK(std::find(codes.begin(), codes.end(), c) != codes.end());
    }
    SUBCASE("empty system and malformed platforms") {
        CHECK(validate_task_system({}, Platform::identical(0, 1)).errors.at(0).code == ValidationCode::empty_system);
        const auto ts = tasks({{0, 2, 2, 1}});
        Platform short_row;
        short_row.processors = 2;
        short_row.rates = {{R(1)}};
        CHECK(validate_task_system(ts, short_row).errors.at(0).code == ValidationCode::bad_platform_shape);
        Platform negative;
        negative.processors = 1;
        negative.rates = {{R(-1)}};
        CHECK(validate_task_system(ts, negative).errors.at(0).code == ValidationCode::negative_rate);
    }
}

TEST_CASE("platform kinds") {
    CHECK(Platform::identical(2, 3).kind() == PlatformKind::identical);
    CHECK(Platform::uniform(2, {R(1), R(2)}).kind() == PlatformKind::uniform);
    Platform p;
    p.processors = 2;
    p.rates = {{R(1), R(2)}, {R(2), R(1)}};
    CHECK(p.kind() == PlatformKind::unrelated);
}

TEST_CASE("processor order per task") {
    Platform p;
    p.processors = 3;
    p.rates = {{R(1), R(2), R(0)}, {R(3, 2), R(3, 2), R(2)}};
    CHECK(processor_order_for_task(p, 0) == std::vector<std::size_t>{1, 0});
    CHECK(processor_order_for_task(p, 1) == std::vector<std::size_t>{2, 0, 1});
    CHECK(processor_order_for_task(Platform::identical(1, 2), 0) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("processor order is a deterministic permutation of the eligible processors") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const auto s = random_instance(seed);
        for (std::size_t i = 0; i < s.tasks.size(); ++i) {
            const auto order = processor_order_for_task(s.platform, i);
            CHECK(order == processor_order_for_task(s.platform, i));
            std::vector<std::size_t> eligible;
            for (std::size_t j = 0; j < s.platform.processors; ++j)
                if (s.platform.rate(i, j) > Rational(0)) eligible.push_back(j);
            auto sorted = order;
            std::sort(sorted.begin(), sorted.end());
            CHECK(sorted == eligible);
            for (std::size_t a = 1; a < order.size(); ++a) {
                const auto prev = s.platform.rate(i, order[a - 1]);
                const auto cur = s.platform.rate(i, order[a]);
                CHECK((prev > cur || (prev == cur && order[a - 1] < order[a])));
            }
        }
    }
}

TEST_CASE("integer division helpers round towards the right infinity") {
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(ceil_div(7, 2) == 4);
    CHECK(ceil_div(-5, 10) == 0);
    CHECK(ceil_div(-7, 2) == -3);
    CHECK(floor_mod(-1, 4) == 3);
    CHECK(floor_mod(9, 4) == 1);
}

TEST_CASE("rational formatting") {
    CHECK(to_string(R(3)) == "3");
    CHECK(to_string(R(6, 4)) == "3/2");
    CHECK(to_string(R(-1, 3)) == "-1/3");
}

}
