#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "friable/special_functions.hpp"
#include "friable/util.hpp"

using namespace friable;

namespace {

// Independent high-accuracy evaluation of the delay-equation solution by
// piecewise Taylor continuation: one degree-47 series per unit piece,
// centered at m+0.5 so the whole piece sits well inside the convergence
// radius.  The construction shares nothing with the table builder: the
// recurrence a(k+1)c_{k+1} + k c_k = -p_k comes straight from
// v f'(v) = -f(v-1), and only the constant term needs the join condition.
struct SeriesOracle {
    static constexpr int kDeg = 48;
    std::vector<std::array<double, kDeg>> c;  // c[m] about m + 0.5

    explicit SeriesOracle(int max_piece) {
        c.resize(size_t(max_piece) + 1);
        c[1][0] = 1.0 - std::log(1.5);  // piece [1,2]: 1 - log v
        for (int k = 1; k < kDeg; ++k)
            c[1][k] = ((k % 2) ? -1.0 : 1.0) / (k * std::pow(1.5, k));
        for (int m = 2; m <= max_piece; ++m) {
            const auto& p = c[m - 1];
            auto& q = c[m];
            const double a = m + 0.5;
            for (int k = 0; k + 1 < kDeg; ++k)
                q[k + 1] = -(p[k] + k * q[k]) / (a * (k + 1));
            // join at v = m: previous series at t=+1/2, new one at t=-1/2
            double prev = 0.0, part = 0.0;
            for (int k = kDeg - 1; k >= 1; --k) {
                prev = prev * 0.5 + p[k];
                part = part * -0.5 + q[k];
            }
            prev = prev * 0.5 + p[0];
            part *= -0.5;
            q[0] = prev - part;
        }
    }

    double operator()(double v) const {
        if (v <= 1.0) return v < 0.0 ? 0.0 : 1.0;
        // piece index; integer v sits on both pieces and either series works
        int m = std::min(int(std::floor(v)), int(c.size()) - 1);
        const double t = v - (m + 0.5);
        double acc = 0.0;
        for (int k = kDeg - 1; k >= 0; --k) acc = acc * t + c[size_t(m)][k];
        return acc;
    }

    // integral over [0, b] for integer b >= 1 via per-piece antiderivatives
    double integral(int b) const {
        CompensatedSum s;
        s.add(1.0);  // [0,1]
        for (int m = 1; m < b && m < int(c.size()); ++m)
            for (int k = 0; k < kDeg; k += 2)
                s.add(2.0 * c[size_t(m)][k] * std::pow(0.5, k + 1) / (k + 1));
        return s.value();
    }
};

// Root of e^x = 1 + vx by 200 plain bisections; independent of the Newton
// path under test.
double xi_bisect(double v) {
    const auto f = [v](double x) { return std::expm1(x) - v * x; };
    double lo, hi;
    if (v > 1.0) {
        lo = std::log(v);
        hi = std::max(1.0, 2.0 * std::log(v));
        while (f(hi) <= 0.0) hi *= 2.0;
    } else {
        lo = -1.0 / v;
        hi = -std::min(1e-8, 0.5 * (1.0 - v));
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) < 0.0) == (f(lo) < 0.0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Frozen references from tools/gen_rho_reference.py (60-digit arithmetic).
// The double-precision SeriesOracle above is mechanism-independent but loses
// a factor rho(m)/rho(m+1) of relative accuracy per piece, so past v ~ 8 the
// deep checks need these instead.
struct RefPair {
    double v;
    double val;
};
constexpr RefPair kRhoRef[] = {
    {2.0, 0.3068528194400546905828},
    {3.0, 0.04860838829113156690718},
    {4.0, 0.004910925647760832352739},
    {5.0, 0.0003547247004560397298339},
    {8.5, 5.840569562936228038435e-9},
    {10.0, 2.770171837725958988758e-11},
    {10.25, 1.102766459188722181818e-11},
    {12.5, 1.99346333303211796847e-15},
    {14.75, 2.153279273856019958211e-19},
    {16.5, 1.308275369555692769133e-22},
    {18.25, 6.300680754024010809816e-26},
    {20.0, 2.461782828764918055892e-29},
    {1.1, 0.904689820195675139956},
    {2.3, 0.1857994615938655360962},
    {2.718281828, 0.08628725400224103839151},
    {3.9999, 0.004912141000524322994427},
    {4.0001, 0.004909710581088268288858},
    {7.77, 7.005913882834496348831e-8},
    {6.77, 0.000001820689218955612951296},
    {11.123, 4.165363460318103359444e-13},
    {12.123, 8.780247854754253367436e-15},
    {14.5, 6.076509609510111035e-19},
    {15.5, 9.284061405897605475618e-21},
    {19.25, 7.285101930888370433737e-28},
    {2.9999, 0.04861861772228955427399},
    {3.0001, 0.04859816086756005017232},
};
constexpr RefPair kIntRef[] = {
    {1.0, 1.0},
    {2.0, 1.613705638880109381166},
    {3.7, 1.777001600565476435347},
    {6.25, 1.781069474252784958072},
    {11.5, 1.781072417990172565665},
    {20.0, 1.781072417990197985237},
};

double frozen_rho(double v) {
    if (v <= 1.0) return 1.0;
    if (v <= 2.0) return 1.0 - std::log(v);
    for (const auto& p : kRhoRef)  // tolerant: keys may arrive as v - 1.0
        if (std::abs(p.v - v) < 1e-9) return p.val;
    REQUIRE_MESSAGE(false, "no frozen reference at this v");
    return 0.0;
}

// eta(s) by direct alternating summation with tail averaging; error is
// O(s N^{-s-1}), good to ~1e-12 at N = 1e6 for s >= 0.3.
double zeta_direct(double s, int64_t n_terms) {
    CompensatedSum sum;
    double sign = 1.0;
    for (int64_t k = 1; k <= n_terms; ++k) {
        sum.add(sign * std::pow(double(k), -s));
        sign = -sign;
    }
    const double s_n = sum.value();
    sum.add(sign * std::pow(double(n_terms + 1), -s));
    const double eta = 0.5 * (s_n + sum.value());
    return eta / -std::expm1((1.0 - s) * std::log(2.0));
}

}  // namespace

TEST_CASE("table nodes match the series oracle up to v = 7") {
    // the double-precision oracle is only trustworthy to ~1e-11 this deep
    const SeriesOracle oracle(8);
    const RhoTable t = build_rho_table(20.0, 256);
    double worst = 0.0;
    for (size_t i = 0; i <= size_t(7 * t.steps_per_unit); ++i) {
        const double v = double(i) * t.grid_step;
        const double ref = oracle(v);
        worst = std::max(worst,
                         std::abs(std::exp(t.log_values[i]) - ref) / ref);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("deep table nodes match the frozen high-precision references") {
    const RhoTable t = build_rho_table(20.0, 256);
    for (double v : {8.5, 10.0, 10.25, 12.5, 14.75, 16.5, 18.25, 20.0}) {
        const size_t i = size_t(v * t.steps_per_unit);  // all exact nodes
        const double got = std::exp(t.log_values[i]);
        const double ref = frozen_rho(v);
        CHECK(std::abs(got - ref) <= 1e-12 * ref);
    }
}

TEST_CASE("closed form on [1,2] and flat part") {
    const RhoTable t = build_rho_table(4.0, 256);
    CHECK(rho(t, 0.0) == 1.0);
    CHECK(rho(t, 0.73) == 1.0);
    CHECK(rho(t, 1.0) == 1.0);
    for (double v : {1.25, 1.5, 1.00390625, 1.9999, 2.0})
        CHECK(rho(t, v) == doctest::Approx(1.0 - std::log(v)).epsilon(1e-11));
    CHECK(rho(t, 2.0) ==
          doctest::Approx(0.30685281944005469).epsilon(1e-12));
}

TEST_CASE("interpolated values and derivatives against frozen references") {
    const RhoTable t = build_rho_table(20.0, 256);
    for (double v : {1.1, 2.3, 2.718281828, 3.9999, 4.0001, 7.77, 12.123,
                     15.5, 19.25}) {
        const double ref = frozen_rho(v);
        const double prev = frozen_rho(v - 1.0);
        CHECK(std::abs(rho(t, v) - ref) <= 1e-10 * ref);
        // rho'(v) = -rho(v-1)/v transfers the reference to the derivative
        const double dref = -prev / v;
        CHECK(std::abs(rho_prime(t, v) - dref) <= 1e-9 * std::abs(dref));
        const double rref = prev / (v * ref);
        CHECK(std::abs(dickman_r(t, v) - rref) <= 1e-9 * rref);
    }
}

TEST_CASE("series oracle sanity against frozen references") {
    const SeriesOracle oracle(8);
    CHECK(std::abs(oracle(3.0) - frozen_rho(3.0)) <= 1e-12 * frozen_rho(3.0));
    CHECK(std::abs(oracle(4.0) - frozen_rho(4.0)) <= 1e-12 * frozen_rho(4.0));
    CHECK(std::abs(oracle(5.0) - frozen_rho(5.0)) <= 1e-11 * frozen_rho(5.0));
}

TEST_CASE("derivative conventions at the kink") {
    const RhoTable t = build_rho_table(4.0, 256);
    CHECK(rho_prime(t, 0.5) == 0.0);
    CHECK(rho_prime(t, 1.0) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("step halving") {
    const RhoTable a = build_rho_table(8.0, 64);
    const RhoTable b = build_rho_table(8.0, 128);
    double worst = 0.0;
    for (size_t i = 0; i < a.log_values.size(); ++i)
        worst = std::max(worst, std::abs(std::expm1(a.log_values[i] -
                                                    b.log_values[2 * i])));
    CHECK(worst <= 1e-9);
}

TEST_CASE("integral against the per-piece antiderivatives") {
    // garbage deep-piece oracle coefficients are ~1e-18 absolute, invisible
    // in an integral dominated by the first pieces, so depth 20 is fine here
    const SeriesOracle oracle(25);
    const RhoTable t = build_rho_table(20.0, 256);
    for (int b : {1, 2, 3, 5, 10, 20})
        CHECK(rho_integral(t, double(b)) ==
              doctest::Approx(oracle.integral(b)).epsilon(1e-11));
    // the full integral is e^gamma; the tail above 20 is ~1e-29
    CHECK(rho_integral(t, 20.0) ==
          doctest::Approx(std::exp(EULER_GAMMA)).epsilon(1e-12));
}

TEST_CASE("fractional integrals match frozen references") {
    const RhoTable t = build_rho_table(20.0, 256);
    for (const auto& p : kIntRef)
        CHECK(std::abs(rho_integral(t, p.v) - p.val) <= 1e-12 * p.val);
}

TEST_CASE("delay equation holds between nodes") {
    const RhoTable t = build_rho_table(12.0, 256);
    // v rho(v) = integral of rho over [v-1, v].  The right side differences
    // two O(1) integrals, so its noise floor is absolute (~1e-15); past
    // v ~ 8 the identity is only checkable to that floor, not relatively.
    for (double v : {2.0, 3.7, 6.25, 11.5}) {
        const double lhs = v * rho(t, v);
        const double rhs = rho_integral(t, v) - rho_integral(t, v - 1.0);
        CHECK(std::abs(lhs - rhs) <= std::max(1e-9 * lhs, 5e-14));
    }
}

TEST_CASE("log-density ratio drifts near one but stays in a loose band") {
    const RhoTable t = build_rho_table(20.0, 256);
    for (double v = 10.0; v <= 20.0; v += 1.0) {
        const double ratio = log_rho(t, v) / (-v * std::log(v));
        CHECK(ratio > 0.85);
        CHECK(ratio < 1.15);
    }
}

TEST_CASE("table parameter validation") {
    CHECK_THROWS_AS(build_rho_table(20.0, 100), std::domain_error);  // not 2^k
    CHECK_THROWS_AS(build_rho_table(20.0, 8), std::domain_error);
    CHECK_THROWS_AS(build_rho_table(1.0, 256), std::domain_error);
    CHECK_THROWS_AS(build_rho_table(2001.0, 256), std::domain_error);
    const RhoTable t = build_rho_table(4.0, 256);
    CHECK(t.covers(4.0));
    CHECK(!t.covers(4.5));
    CHECK_THROWS_AS(rho(t, 5.0), std::domain_error);
    CHECK_THROWS_AS(rho(t, -0.1), std::domain_error);
}

TEST_CASE("xi against bisection") {
    for (double v : {0.1, 0.5, 0.9, 0.999, 1.001, 1.5, std::exp(1.0) - 1.0,
                     2.0, 5.0, 10.0, 50.0, 100.0, 500.0}) {
        const double got = xi(v);
        const double ref = xi_bisect(v);
        CHECK(std::abs(got - ref) <= 1e-11 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("xi special values and residual") {
    CHECK(xi(1.0) == 0.0);
    CHECK(xi(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(xi(10.0) == doctest::Approx(3.615).epsilon(1e-3));
    for (double v : {0.2, 0.8, 1.0 + 1e-9, 3.0, 30.0, 300.0}) {
        const double x = xi(v);
        CHECK(std::abs(std::expm1(x) - v * x) <=
              1e-12 * (1.0 + v * std::abs(x)));
    }
    // near v=1 the root behaves like 2(v-1)
    CHECK(std::abs(xi(1.0 + 1e-10) - 2e-10) <= 1e-6 * 2e-10);
    CHECK(std::abs(xi(1.0 - 1e-10) + 2e-10) <= 1e-6 * 2e-10);
    CHECK_THROWS_AS(xi(0.0), std::domain_error);
    CHECK_THROWS_AS(xi(-1.0), std::domain_error);
}

TEST_CASE("xi derivative") {
    CHECK(xi_prime(1.0) == doctest::Approx(2.0).epsilon(1e-9));
    for (double v : {0.5, 2.0, 10.0, 100.0}) {
        const double h = 1e-6 * std::max(1.0, v);
        const double num = (xi(v + h) - xi(v - h)) / (2.0 * h);
        CHECK(xi_prime(v) == doctest::Approx(num).epsilon(1e-4));
    }
}

TEST_CASE("zeta against direct alternating summation") {
    const ZetaEvaluator ev;
    for (double s : {0.3, 0.5, 0.9, 1.1, 2.0, 3.0})
        CHECK(zeta_real(ev, s) ==
              doctest::Approx(zeta_direct(s, 1'000'000)).epsilon(1e-9));
    const double pi = 3.14159265358979323846;
    CHECK(zeta_real(ev, 2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-13));
    CHECK_THROWS_AS(zeta_real(ev, 1.0), std::domain_error);
    CHECK_THROWS_AS(zeta_real(ev, 0.0), std::domain_error);
    // doubling the work must not move the answer
    ZetaEvaluator big;
    big.direct_terms = 128;
    big.acceleration_terms = 96;
    for (double s : {0.4, 1.5})
        CHECK(zeta_real(ev, s) == doctest::Approx(zeta_real(big, s)).epsilon(1e-13));
}

TEST_CASE("Z is smooth through s = 1") {
    const ZetaEvaluator ev;
    const double pi = 3.14159265358979323846;
    CHECK(big_z(ev, 2.0) == doctest::Approx(pi * pi / 12.0).epsilon(1e-13));
    CHECK(big_z(ev, 1.0) == 1.0);
    CHECK(big_z(ev, 1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(big_z(ev, 1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
    // series patch and generic branch agree at the 1e-6 boundary once the
    // linear drift Z'(1) = gamma - 1 over the 2e-8 gap is taken out
    const double a = big_z(ev, 1.0 + 0.99e-6);
    const double b = big_z(ev, 1.0 + 1.01e-6);
    CHECK(std::abs((b - a) - (EULER_GAMMA - 1.0) * 2e-8) <= 1e-10);
    CHECK(big_z(ev, 0.9) == doctest::Approx(1.0478).epsilon(1e-3));
}
