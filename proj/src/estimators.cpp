#include "friable/estimators.hpp"

#include <cmath>
#include <cstdio>

#include "friable/util.hpp"

namespace friable {

namespace {

const ZetaEvaluator kZeta{};

std::string fnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

bool hrange_contains(const HRange& h, double x, double y) {
    if (!(x >= 3.0)) return false;
    const double llx = std::log(std::log(x));
    const double lower = std::exp(std::pow(llx, h.b));
    const double upper = x / std::pow(std::log(x), h.c);
    return y > lower && y <= upper;
}

double d_error_scale(double x, double y) {
    require(x >= y && y >= 2.0, "d_error_scale: need x >= y >= 2");
    const double u = std::log(x) / std::log(y);
    const double ly = std::log(y);
    return std::sqrt(std::log(2.0 * u)) / (std::sqrt(u) * ly * std::sqrt(ly));
}

double d_error_scale_refined(double x, double y) {
    require(x >= y && y >= 2.0, "d_error_scale_refined: need x >= y >= 2");
    const double l2u = std::log(2.0 * std::log(x) / std::log(y));
    const double ly = std::log(y);
    return d_error_scale(x, y) + l2u * l2u / (ly * ly);
}

EstimateReport psi_saddle(const RhoTable& rt, double x, double y) {
    require(x >= y && y >= 3.0, "psi_saddle: need x >= y >= 3");
    const double u = std::log(x) / std::log(y);
    require(u > 1.0, "psi_saddle: need y < x (u > 1)");
    const double r = dickman_r(rt, u);
    const double beta = 1.0 - r / std::log(y);
    require(beta > 0.0, "psi_saddle: saddle point left the zeta domain");
    const double z = big_z(kZeta, beta);
    EstimateReport rep;
    rep.main_term = x * std::exp(log_rho(rt, u)) * z;
    rep.correction_term = 0.0;
    rep.value = rep.main_term;
    rep.error_scale = rep.main_term * u / (std::log(x) * std::log(x));
    rep.multiplicative = false;
    rep.in_range = hrange_contains(HRange{}, x, y);
    rep.notes = "saddle form: u=" + fnum(u) + " beta=" + fnum(beta) +
                " Z=" + fnum(z);
    return rep;
}

EstimateReport psi_two_term(const RhoTable& rt, double x, double y) {
    require(x >= y && y >= 3.0, "psi_two_term: need x >= y >= 3");
    const double u = std::log(x) / std::log(y);
    require(u > 1.0, "psi_two_term: need y < x (u > 1)");
    const double ly = std::log(y);
    EstimateReport rep;
    rep.main_term = x * std::exp(log_rho(rt, u));
    rep.correction_term =
        (EULER_GAMMA - 1.0) * x * rho_prime(rt, u) / ly;
    rep.value = rep.main_term + rep.correction_term;
    const double l2u = std::log(2.0 * u);
    rep.error_scale = rep.main_term * l2u * l2u / (ly * ly);
    rep.multiplicative = false;
    rep.in_range = hrange_contains(HRange{}, x, y);
    rep.notes = "two-term form: u=" + fnum(u);
    return rep;
}

EstimateReport d_estimate(const RhoTable& rt, double x, double u, DForm form) {
    require(u > 1.0, "d_estimate: need u > 1");
    require(x >= 3.0, "d_estimate: need x >= 3");
    const double y = std::pow(x, 1.0 / u);
    require(y >= 2.0, "d_estimate: x^(1/u) must be >= 2");
    EstimateReport rep;
    if (form == DForm::saddle_factor) {
        const EstimateReport base = psi_saddle(rt, x, y);
        const double factor = -dickman_r(rt, u) / std::log(y);
        rep.main_term = base.value;
        rep.correction_term = factor;
        rep.value = base.value * (1.0 + factor);
        rep.error_scale = base.value * d_error_scale(x, y);
        rep.multiplicative = true;
        rep.notes = "saddle-factor form: u=" + fnum(u);
    } else {
        rep.main_term = x * std::exp(log_rho(rt, u));
        rep.correction_term = EULER_GAMMA * x * rho_prime(rt, u) / std::log(y);
        rep.value = rep.main_term + rep.correction_term;
        rep.error_scale = rep.main_term * d_error_scale_refined(x, y);
        rep.multiplicative = false;
        rep.notes = "two-term form: u=" + fnum(u);
    }
    rep.in_range = hrange_contains(HRange{}, x, y);
    return rep;
}

EstimateReport dickman_sum_estimate(double x, SumNumerator which) {
    require(x >= 3.0, "dickman_sum_estimate: need x >= 3");
    const double eg = std::exp(EULER_GAMMA);
    const double lx = std::log(x);
    EstimateReport rep;
    rep.main_term = eg * x;
    rep.correction_term = (which == SumNumerator::log_n)
                              ? -EULER_GAMMA * eg * x / lx
                              : (1.0 - EULER_GAMMA) * eg * x / lx;
    rep.value = rep.main_term + rep.correction_term;
    rep.error_scale = x / (lx * std::sqrt(lx));
    rep.multiplicative = false;
    rep.in_range = true;
    rep.notes = (which == SumNumerator::log_n) ? "numerator log n"
                                               : "numerator log x";
    return rep;
}

EstimateReport n_estimate(const SaddleContext& ctx, double x, double y) {
    require(x >= 3.0, "n_estimate: need x >= 3");
    require(y >= 1.0 && y < x, "n_estimate: need 1 <= y < x");
    const double v = std::log(x / y);
    const KernelF f = kernel_f(ctx, v);
    const double lx = std::log(x);
    const double eta = std::sqrt(2.0 / (lx * std::log(lx)));
    EstimateReport rep;
    rep.main_term = y * f.value;
    rep.correction_term = 0.0;
    rep.value = rep.main_term;
    rep.error_scale = rep.main_term * std::pow(y, -eta);
    rep.multiplicative = false;
    rep.in_range = (v >= 2.0) && (y > std::exp(std::pow(lx, 0.6)));
    rep.notes = "v=" + fnum(v) + " F=" + fnum(f.value) + " eta=" + fnum(eta) +
                (f.reduced_accuracy ? " (F tail extrapolated)" : "");
    return rep;
}

EstimateReport s_estimate(const SaddleContext& ctx, double x, double theta,
                          double alpha) {
    require(x >= 3.0, "s_estimate: need x >= 3");
    require(theta > 0.0 && theta < 1.0, "s_estimate: theta must lie in (0,1)");
    const double lx = std::log(x);
    const double v = (1.0 - theta) * lx - alpha * std::log(lx);
    require(v >= 1.0, "s_estimate: need log(x/y) >= 1");
    const double sv = sigma_solve(ctx, v);
    const double f = kernel_f(ctx, v).value;
    const double y = std::exp(theta * lx + alpha * std::log(lx));
    const double ratio = sv / theta;
    EstimateReport rep;
    rep.main_term = y * f * ratio;
    rep.correction_term = -ratio;
    rep.value = rep.main_term * (1.0 - ratio);
    rep.error_scale =
        rep.main_term * (ratio * ratio + std::sqrt(std::log(v) / v));
    rep.multiplicative = true;
    // The underlying window pins theta away from 0 and 1 on a scale set by
    // log log x; report how deep into the window this query sits.
    const double implied_c =
        std::max(std::log(1.0 / theta), std::log(1.0 / (1.0 - theta))) /
        std::log(lx);
    rep.in_range = implied_c < 0.5 && v >= 4.0;
    rep.notes = "v=" + fnum(v) + " sigma_v=" + fnum(sv) +
                " window_depth=" + fnum(implied_c);
    return rep;
}

std::string report_json(const EstimateReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"value\": %.17g, \"main_term\": %.17g, "
                  "\"correction_term\": %.17g, \"error_scale\": %.17g, "
                  "\"multiplicative\": %s, \"in_range\": %s, \"notes\": \"%s\"}",
                  r.value, r.main_term, r.correction_term, r.error_scale,
                  r.multiplicative ? "true" : "false",
                  r.in_range ? "true" : "false", r.notes.c_str());
    return buf;
}

}  // namespace friable
