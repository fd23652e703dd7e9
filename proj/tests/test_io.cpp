#include "helpers.hpp"

#include <mpfeas/campaign.hpp>
#include <mpfeas/io.hpp>

#include <doctest.h>

using namespace testing;

TEST_SUITE("io") {

TEST_CASE("rationals") {
    CHECK(parse_rational(Json(3)) == R(3));
    CHECK(parse_rational(Json("3/2")) == R(3, 2));
    CHECK(parse_rational(Json("-1/4")) == R(-1, 4));
    CHECK(parse_rational(Json("7")) == R(7));
    CHECK_THROWS_AS(parse_rational(Json("6/4")), ParseError);
    CHECK_THROWS_AS(parse_rational(Json("1/0")), ParseError);
    CHECK_THROWS_AS(parse_rational(Json("1/-2")), ParseError);
    CHECK_THROWS_AS(parse_rational(Json("x")), ParseError);
    CHECK_THROWS_AS(parse_rational(Json(1.5)), ParseError);
    CHECK(rational_to_json(R(2)) == Json(2));
    CHECK(rational_to_json(R(2, 3)) == Json("2/3"));
}

TEST_CASE("task-system files") {
    const auto s = parse_scenario(R"({
        "tasks": [{"O": 0, "T": 5, "D": 5, "C": 1}, {"O": 2, "T": 7, "C": 3}],
        "platform": {"m": 2, "rates": [[1, "1/2"], [0, 2]]},
        "scheduler": {"policy": "explicit", "order": [2, 1]}
    })");
    REQUIRE(s.tasks.size() == 2);
    CHECK(s.tasks[1] == Task{2, 7, 7, 3});
    CHECK(s.platform.rate(0, 1) == R(1, 2));
    CHECK(s.policy == PriorityPolicy::explicit_order({1, 0}));

    const auto defaults = parse_scenario(R"({"tasks": [{"T": 4, "C": 1}]})");
    CHECK(defaults.platform == Platform::identical(1, 1));
    CHECK(defaults.policy == PriorityPolicy::rm());

    const auto speeds = parse_scenario(R"({"tasks": [{"T": 4, "C": 1}, {"T": 2, "C": 1}], "platform": {"speeds": [1, "3/2"]}})");
    CHECK(speeds.platform.kind() == PlatformKind::uniform);
    CHECK(speeds.platform.rate(1, 1) == R(3, 2));
}

TEST_CASE("round trip is exact") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        auto s = random_instance(seed);
        if (seed % 3 == 0) s.platform.rates[0][0] = R(5, 3);
        const auto text = serialize_scenario(s);
        const auto back = parse_scenario(text);
        CHECK(back == s);
        CHECK(serialize_scenario(back) == text);
    }
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto spec = random_job_set(seed);
        const auto text = serialize_job_set(spec);
        const auto back = parse_job_set(text);
        CHECK(serialize_job_set(back) == text);
        CHECK(back.platform == spec.platform);
        REQUIRE(back.jobs.size() == spec.jobs.size());
        for (std::size_t i = 0; i < spec.jobs.size(); ++i) {
            CHECK(back.jobs[i].min_requirement == spec.jobs[i].min_requirement);
            CHECK(back.jobs[i].max_requirement == spec.jobs[i].max_requirement);
        }
    }
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_scenario("{\n  \"tasks\": [\n    {\"T\": 4,, \"C\": 1}\n  ]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 1);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario(R"({"tasks": [{"C": 1}]})"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"tasks": [{"T": 1.5, "C": 1}]})"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"tasks": [{"T": 2, "C": 1}], "scheduler": {"policy": "lifo"}})"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"tasks": [{"T": 2, "C": 1}], "scheduler": {"policy": "explicit", "order": [0]}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_scenario(R"([1, 2])"), ParseError);
}

TEST_CASE("verdict documents") {
    const auto v = select_test(dhall(PriorityPolicy::edf()));
    const auto j = verdict_to_json(v);
    CHECK(j["outcome"] == "infeasible");
    CHECK(j["theorem"] == "sync-constrained-hyperperiod");
    CHECK(j["interval"] == Json::array({0, 35}));
    CHECK(j["witness"]["kind"] == "deadline_miss");
    CHECK(j["witness"]["task"] == 3);
    CHECK(j["witness"]["job"] == 1);
    CHECK(j["witness"]["time"] == 7);
    CHECK(format_verdict_text(v).find("job 3.1 missed its deadline at t=7") != std::string::npos);

    const auto rm = verdict_to_json(select_test(dhall(PriorityPolicy::explicit_order({2, 0, 1}))));
    CHECK(rm["outcome"] == "feasible");
    CHECK(rm["bounds"]["priority"] == Json::array({3, 1, 2}));
    CHECK(rm["states"]["first"]["theta"] == rm["states"]["second"]["theta"]);

    const auto mismatch = verdict_to_json(fp_test_sync_arbitrary(scenario(tasks({{0, 2, 6, 3}}), 2, PriorityPolicy::rm())));
    CHECK(mismatch["witness"]["kind"] == "state_mismatch");
    CHECK(mismatch["witness"]["task"] == 1);
}

TEST_CASE("bounds documents") {
    const auto b = periodicity_bounds(scenario(tasks({{0, 2, 2, 1}, {0, 3, 3, 1}}), 1, PriorityPolicy::rm()));
    const auto j = bounds_to_json(b);
    CHECK(j["P"] == 6);
    CHECK(j["Shat"] == Json::array({0, 6}));
    CHECK(j["S"] == Json::array({0, 0}));
    CHECK(format_bounds_text(b).rfind("P = 6\n", 0) == 0);
}

TEST_CASE("text traces") {
    const auto s = scenario(tasks({{0, 2, 2, 1}}), 1, PriorityPolicy::rm());
    const auto text = format_trace_text(run(s, 4), s, 0);
    CHECK(text ==
          "# processors 1\n"
          "# priority rm 1\n"
          "# window [0,4)\n"
          "0 | p1:1.1 | arrival 1.1\n"
          "1 | p1:- | completion 1.1\n"
          "2 | p1:1.2 | arrival 1.2\n"
          "3 | p1:- | completion 1.2\n"
          "# at 4: arrival 1.3\n");

    const auto d = dhall(PriorityPolicy::edf());
    const auto dt = format_trace_text(run(d, 8), d, 5);
    CHECK(dt.find("7 | p1:3.1 p2:- | completion 2.2, deadline_miss 3.1, arrival 3.2") != std::string::npos);
    CHECK(dt.find("# window [5,8)") != std::string::npos);
    CHECK(dt.find("\n4 |") == std::string::npos);
    CHECK(dt.find("# at 8: completion 3.1") != std::string::npos);

    const auto ex = dhall(PriorityPolicy::explicit_order({2, 0, 1}));
    CHECK(format_trace_text(run(ex, 1), ex, 0).find("# priority explicit 3 1 2") != std::string::npos);
}

TEST_CASE("JSON traces") {
    const auto d = dhall(PriorityPolicy::edf());
    RunOptions opts;
    opts.snapshot_at = {7};
    const auto j = trace_to_json(run(d, 8, opts), d, 0);
    CHECK(j["instants"].size() == 8);
    CHECK(j["instants"][7]["sigma"] == Json::array({"3.1", nullptr}));
    bool saw_miss = false;
    for (const auto& e : j["events"])
        if (e["kind"] == "deadline_miss") saw_miss = e["t"] == 7 && e["job"] == "3.1";
    CHECK(saw_miss);
    CHECK(j["snapshots"][0]["theta"][2] == Json::array({2, 7, 6}));
}

TEST_CASE("job-set files") {
    const auto spec = parse_job_set(R"({"m": 1, "jobs": [{"r": 0, "e": [1, 2], "d": 3}, {"r": 0, "e": 2, "d": 4}]})");
    REQUIRE(spec.jobs.size() == 2);
    CHECK(spec.jobs[0].max_requirement == R(2));
    CHECK(spec.jobs[1].min_requirement == R(2));
    CHECK(spec.platform.rates[1] == std::vector<Rational>{R(1)});
    CHECK_THROWS_AS(parse_job_set(R"({"m": 1, "jobs": [{"r": 0, "e": [1], "d": 3}]})"), ParseError);
}

TEST_CASE("policy names") {
    CHECK(make_policy("dm") == PriorityPolicy::dm());
    CHECK(make_policy("explicit", {3, 1, 2}) == PriorityPolicy::explicit_order({2, 0, 1}));
    CHECK_THROWS_AS(make_policy("fifo"), ParseError);
    CHECK(job_label({2, 5}) == "3.5");
}

}
