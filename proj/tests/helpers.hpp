#pragma once

#include <mpfeas/engine.hpp>

#include <initializer_list>
#include <random>

namespace testing {

using namespace mpfeas;

// Tasks given as {O, T, D, C}.
inline std::vector<Task> tasks(std::initializer_list<Task> list) { return list; }

inline Scenario scenario(std::vector<Task> ts, std::size_t m, PriorityPolicy policy) {
    Scenario s;
    s.platform = Platform::identical(ts.size(), m);
    s.tasks = std::move(ts);
    s.policy = std::move(policy);
    return s;
}

inline Scenario dhall(PriorityPolicy policy) {
    return scenario(tasks({{0, 5, 5, 1}, {0, 5, 5, 1}, {0, 7, 7, 7}}), 2, std::move(policy));
}

inline Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

}  // namespace testing
