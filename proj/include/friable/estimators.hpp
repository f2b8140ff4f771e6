#pragma once

#include <string>

#include "friable/kernel_saddle.hpp"
#include "friable/sieves.hpp"
#include "friable/special_functions.hpp"

namespace friable {

// One asymptotic evaluation with its decomposition and the theoretical error
// magnitude (O-term without constant).  For additive forms
// value = main_term + correction_term; for multiplicative forms
// value = main_term * (1 + correction_term).
struct EstimateReport {
    double value = 0.0;
    double main_term = 0.0;
    double correction_term = 0.0;
    double error_scale = 0.0;
    bool multiplicative = false;
    bool in_range = true;  // advisory: hypotheses of the underlying estimate
    std::string notes;
};

// Range gate e^{(log log x)^b} < y <= x/(log x)^c (strict lower, inclusive
// upper).  Defaults follow the friable second-order estimate's hypotheses;
// c is just above 10 with no claim of sharpness.
struct HRange {
    double b = 1.7;
    double c = 10.001;
};

bool hrange_contains(const HRange& h, double x, double y);

// Error scales for the friable-count difference D vs Psi, with u = log x/log y:
// basic: sqrt(log 2u) / (sqrt(u) (log y)^{3/2});
// refined adds (log 2u)^2/(log y)^2 (what the two-term expansion carries).
double d_error_scale(double x, double y);
double d_error_scale_refined(double x, double y);

// Saddle form: Psi(x,y) ~ x rho(u) Z(beta), beta = 1 - r(u)/log y;
// error scale x rho(u) Z(beta) u/(log x)^2.
EstimateReport psi_saddle(const RhoTable& rt, double x, double y);

// Two-term expansion: Psi(x,y) ~ x rho(u) + (gamma-1) x rho'(u)/log y;
// error scale x rho(u) (log 2u)^2/(log y)^2.
EstimateReport psi_two_term(const RhoTable& rt, double x, double y);

enum class DForm {
    saddle_factor,  // psi_saddle * (1 - r(u)/log y), multiplicative
    two_term,       // x rho(u) + gamma x rho'(u)/log y, additive
};

// Estimates for the count of n <= x with P+(n) <= n^(1/u), at y = x^(1/u).
EstimateReport d_estimate(const RhoTable& rt, double x, double u,
                          DForm form = DForm::two_term);

// Two-term value of sum_{1<n<=x} (log n or log x)/log P+(n):
// log_n: e^g x - g e^g x/log x;  log_x: e^g x + (1-g) e^g x/log x  (g = gamma);
// error scale x/(log x)^{3/2}.
EstimateReport dickman_sum_estimate(double x, SumNumerator which);

// N(x,y) ~ y F(v), v = log(x/y); error scale y F(v) y^{-eta},
// eta = sqrt(2/((log x) log log x)).
EstimateReport n_estimate(const SaddleContext& ctx, double x, double y);

// S(x; theta, alpha) ~ (y F(v) sigma_v/theta)(1 - sigma_v/theta) at
// y = x^theta (log x)^alpha; error scale y F(v) sigma_v/theta *
// (sigma_v^2/theta^2 + sqrt(log v / v)).
EstimateReport s_estimate(const SaddleContext& ctx, double x, double theta,
                          double alpha);

std::string report_json(const EstimateReport& r);

}  // namespace friable
