#pragma once

#include <boost/integer/common_factor_rt.hpp>

#include <random>

namespace mpfeas {

template <typename Rng>
std::vector<Rational> sample_realization(const JobSetSpec& spec, Rng& rng) {
    std::vector<Rational> out;
    out.reserve(spec.jobs.size());
    for (const auto& j : spec.jobs) {
        const auto q = boost::integer::lcm(j.min_requirement.denominator(), j.max_requirement.denominator());
        const auto lo = j.min_requirement.numerator() * (q / j.min_requirement.denominator());
        const auto hi = j.max_requirement.numerator() * (q / j.max_requirement.denominator());
        std::uniform_int_distribution<std::int64_t> pick(lo, hi);
        out.emplace_back(pick(rng), q);
    }
    return out;
}

}  // namespace mpfeas
