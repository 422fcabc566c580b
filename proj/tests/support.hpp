#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "xamm/curve.hpp"

namespace xamm::testing {

/// Seeded generator with portable real mapping.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    Curve volatile_curve() { return Curve::volatile_curve(log_uniform(0.1, 10.0)); }
    Curve stable_curve() {
        const double xs = log_uniform(10.0, 1e5);
        return Curve::stable(log_uniform(0.1, 10.0), xs, xs * log_uniform(0.01, 2.0));
    }
    Curve any_curve() { return unit() < 0.5 ? volatile_curve() : stable_curve(); }

private:
    std::mt19937_64 gen_;
};

/// |a - b| <= rel * max(|a|, |b|, floor)
inline bool rel_close(double a, double b, double rel, double floor = 0.0) {
    return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), floor});
}

}  // namespace xamm::testing
