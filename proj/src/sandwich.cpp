#include "friable/sandwich.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "friable/util.hpp"

namespace friable {

namespace {

double kernel_threshold(double n, double theta, double alpha) {
    return std::pow(n, theta) * std::pow(std::log(n), alpha);
}

bool near(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

}  // namespace

double SandwichSchedule::x_at(int k) const {
    return x * std::exp(-double(k) * epsilon);
}

double SandwichSchedule::y_at(int k) const {
    const double xk = x_at(k);
    if (kind == ScheduleKind::friable) return std::pow(xk, 1.0 / u);
    return kernel_threshold(xk, theta, alpha);
}

SandwichSchedule default_schedule_friable(double x, double u) {
    require(x >= 16.0, "default_schedule_friable: need x >= 16");
    require(u >= 1.0, "default_schedule_friable: need u >= 1");
    SandwichSchedule s;
    s.kind = ScheduleKind::friable;
    s.x = x;
    s.u = u;
    const double lx = std::log(x);
    s.epsilon = 1.0 / std::sqrt(lx * std::log(2.0 * u));
    const int K = int(std::ceil(2.0 * std::log(lx) / s.epsilon));
    int kmax = int(std::floor(std::log(x / 2.0) / s.epsilon));  // x_K >= 2
    if (kmax < 1) kmax = 1;
    s.K = std::min(K, kmax);
    s.capped = s.K < K;
    return s;
}

SandwichSchedule default_schedule_kernel(double x, double theta, double alpha) {
    require(x >= 16.0, "default_schedule_kernel: need x >= 16");
    require(theta > 0.0 && theta < 1.0,
            "default_schedule_kernel: theta must lie in (0, 1)");
    const double lx = std::log(x);
    const double v = (1.0 - theta) * lx - alpha * std::log(lx);
    require(v >= 4.0, "default_schedule_kernel: need log(x/y) >= 4");

    SandwichSchedule s;
    s.kind = ScheduleKind::kernel;
    s.x = x;
    s.theta = theta;
    s.alpha = alpha;
    s.epsilon = std::sqrt(std::log(v) / v);
    const int K = int(std::floor(2.0 * std::log(v) / (s.epsilon * theta)));

    // Smallest X >= 2 past the threshold's dip with T(X) >= max(1, T(2)):
    // above it the bracket argument is airtight (see the header note).
    const double target = std::max(1.0, kernel_threshold(2.0, theta, alpha));
    const double dip = (alpha < 0.0) ? std::exp(-alpha / theta) : 1.0;
    double cutoff = std::max(2.0, dip);
    if (kernel_threshold(cutoff, theta, alpha) < target) {
        double hi = cutoff;
        while (kernel_threshold(hi, theta, alpha) < target && hi < x) hi *= 2.0;
        double lo = hi * 0.5;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (kernel_threshold(mid, theta, alpha) < target ? lo : hi) = mid;
        }
        cutoff = hi;
    }

    const int cap_sqrt = int(std::floor(lx / (2.0 * s.epsilon)));
    const int cap_tail = int(std::floor(std::log(x / cutoff) / s.epsilon));
    int kmax = std::min(cap_sqrt, cap_tail);
    if (kmax < 1) kmax = 1;
    s.K = std::min(K, kmax);
    if (s.K < 1) s.K = 1;
    s.capped = s.K < K;
    return s;
}

namespace {

SandwichResult run_sandwich(const TwoVarEvaluator& eval,
                            const SandwichSchedule& s,
                            std::vector<SandwichTraceRow>* trace) {
    require(s.K >= 1 && s.epsilon > 0.0, "sandwich: schedule not initialized");
    const auto call = [&](double xa, double ya, int k) {
        try {
            return eval.fn(xa, ya);
        } catch (const std::exception& e) {
            throw std::runtime_error("sandwich step k=" + std::to_string(k) +
                                     ": " + e.what());
        }
    };
    CompensatedSum lower, upper;
    if (trace) trace->clear();
    for (int k = 0; k < s.K; ++k) {
        const double xk = s.x_at(k), xk1 = s.x_at(k + 1);
        const double yk = s.y_at(k), yk1 = s.y_at(k + 1);
        lower.add(call(xk, yk1, k));
        lower.add(-call(xk1, yk1, k));
        upper.add(call(xk, yk, k));
        upper.add(-call(xk1, yk, k));
        if (trace)
            trace->push_back({k, xk, yk, lower.value(), upper.value()});
    }
    const double xK = s.x_at(s.K), yK = s.y_at(s.K);
    upper.add(call(xK, yK, s.K));
    if (trace)
        trace->push_back({s.K, xK, yK, lower.value(), upper.value()});
    return {lower.value(), upper.value()};
}

}  // namespace

SandwichResult sandwich_d(const TwoVarEvaluator& eval, double x, double u,
                          const SandwichSchedule& sched,
                          std::vector<SandwichTraceRow>* trace) {
    require(sched.kind == ScheduleKind::friable,
            "sandwich_d: schedule kind mismatch");
    require(near(sched.x, x) && near(sched.u, u),
            "sandwich_d: schedule was built for a different query");
    return run_sandwich(eval, sched, trace);
}

SandwichResult sandwich_s(const TwoVarEvaluator& eval, double x, double theta,
                          double alpha, const SandwichSchedule& sched,
                          std::vector<SandwichTraceRow>* trace) {
    require(sched.kind == ScheduleKind::kernel,
            "sandwich_s: schedule kind mismatch");
    require(near(sched.x, x) && near(sched.theta, theta) &&
                near(sched.alpha, alpha),
            "sandwich_s: schedule was built for a different query");
    return run_sandwich(eval, sched, trace);
}

}  // namespace friable
