#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace friable {

// Euler's constant. exp(EULER_GAMMA) is derived from it wherever e^gamma is
// needed so the two stay consistent.
inline constexpr double EULER_GAMMA = 0.57721566490153286;

// Thrown when a computation would exceed a hard memory or size cap.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier-compensated accumulator. Used for every floating-point reduction
// whose result must be independent of chunking (counts, tails, sandwich sums).
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    // Merging another accumulator keeps determinism only if merges happen in a
    // fixed order; callers combine per-window partials in window order.
    void merge(const CompensatedSum& o) {
        add(o.sum);
        add(o.comp);
    }

    double value() const { return sum + comp; }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

}  // namespace friable
