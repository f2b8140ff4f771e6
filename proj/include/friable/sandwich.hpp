#pragma once

#include <functional>
#include <vector>

namespace friable {

// Discretization ladder x_k = x e^{-k eps} with per-rung thresholds
// y_k = x_k^{1/u} (friable) or y_k = x_k^theta (log x_k)^alpha (kernel).
// Bracketing a count whose threshold depends on n between telescoping sums of
// fixed-threshold counts is exact only while the threshold is monotone over
// every rung, so the kernel ladder is additionally cut off at min_tail_x (see
// default_schedule_kernel).
enum class ScheduleKind { friable, kernel };

struct SandwichSchedule {
    ScheduleKind kind = ScheduleKind::friable;
    double x = 0.0;
    double u = 0.0;      // friable
    double theta = 0.0;  // kernel
    double alpha = 0.0;  // kernel
    double epsilon = 0.0;
    int K = 0;
    bool capped = false;  // K reduced below the formula value

    double x_at(int k) const;
    double y_at(int k) const;
};

// eps = 1/sqrt((log x) log 2u), K = ceil(2 log log x / eps), K capped so
// x_K >= 2.  Requires x >= 16, u >= 1.
SandwichSchedule default_schedule_friable(double x, double u);

// eps = sqrt(log v / v) with v = log(x/y), K = floor(2 log v/(eps theta)),
// capped so that (a) K eps <= (log x)/2, and (b) x_K stays above the point
// where the threshold n^theta (log n)^alpha is increasing and at least
// max(1, threshold(2)) — below that the upper bound could miss members with
// n <= x_K and the bracket would not be exact.  Requires v >= 4.
SandwichSchedule default_schedule_kernel(double x, double theta, double alpha);

// Any two-variable count or estimate f(x, y).  The exact flag is a label for
// callers (exact evaluators make the bracket a true inequality).
struct TwoVarEvaluator {
    std::function<double(double, double)> fn;
    bool exact = false;
};

struct SandwichResult {
    double lower = 0.0;
    double upper = 0.0;
};

struct SandwichTraceRow {
    int k = 0;
    double xk = 0.0;
    double yk = 0.0;
    double lower_partial = 0.0;
    double upper_partial = 0.0;
};

// lower = sum_{k<K} f(x_k, y_{k+1}) - f(x_{k+1}, y_{k+1});
// upper = sum_{k<K} f(x_k, y_k) - f(x_{k+1}, y_k), plus f(x_K, y_K).
// Fixed ascending-k compensated summation: identical inputs give identical
// bits.  Evaluator exceptions are rethrown with the step index attached.
SandwichResult sandwich_d(const TwoVarEvaluator& eval, double x, double u,
                          const SandwichSchedule& sched,
                          std::vector<SandwichTraceRow>* trace = nullptr);

SandwichResult sandwich_s(const TwoVarEvaluator& eval, double x, double theta,
                          double alpha, const SandwichSchedule& sched,
                          std::vector<SandwichTraceRow>* trace = nullptr);

}  // namespace friable
