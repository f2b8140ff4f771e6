#include "friable/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>

#include "friable/container.hpp"
#include "friable/estimators.hpp"
#include "friable/kernel_saddle.hpp"
#include "friable/sandwich.hpp"
#include "friable/sieves.hpp"
#include "friable/special_functions.hpp"
#include "friable/tolerances.hpp"
#include "friable/util.hpp"

namespace friable {

namespace {

std::string fnum(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

// ---- independent naive counters for the equivalence criterion ----
// Trial division per integer; shares nothing with the sieve tables except the
// boundary-comparison convention, which is part of the counters' contract.

struct NaiveFactors {
    uint64_t lpf = 1;
    uint64_t radical = 1;
};

NaiveFactors naive_factor(uint64_t n) {
    NaiveFactors f;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        f.lpf = p;
        f.radical *= p;
        do n /= p; while (n % p == 0);
    }
    if (n > 1) {
        f.lpf = n;
        f.radical *= n;
    }
    return f;
}

bool le_guarded(double c, double T) {
    return c <= T + 1e-12 * (1.0 + std::abs(T));
}

uint64_t floor_guarded(double y) {
    if (y < 0.0) return 0;
    return uint64_t(y * (1.0 + 1e-12) + 1e-12);
}

uint64_t naive_count(const CountQuery& q) {
    const uint64_t X = floor_guarded(q.x);
    uint64_t count = 0;
    for (uint64_t n = 1; n <= X; ++n) {
        const NaiveFactors f = naive_factor(n);
        bool in = false;
        switch (q.kind) {
            case CountQuery::Kind::psi:
                in = f.lpf <= floor_guarded(q.y);
                break;
            case CountQuery::Kind::d:
                if (n == 1 || q.u <= 1.0) {
                    in = true;
                } else if (std::abs(q.u - std::round(q.u)) < 1e-12 &&
                           std::round(q.u) <= 64.0) {
                    const int e = int(std::round(q.u));
                    uint64_t acc = 1;
                    bool le = true;
                    for (int i = 0; i < e; ++i) {
                        if (acc > n / f.lpf) { le = false; break; }
                        acc *= f.lpf;
                    }
                    in = le && acc <= n;
                } else {
                    in = le_guarded(q.u * std::log(double(f.lpf)),
                                    std::log(double(n)));
                }
                break;
            case CountQuery::Kind::n:
                in = f.radical <= floor_guarded(q.y);
                break;
            case CountQuery::Kind::s:
                if (n == 1) {
                    in = true;
                } else {
                    const double ln = std::log(double(n));
                    in = le_guarded(std::log(double(f.radical)),
                                    q.theta * ln + q.alpha * std::log(ln));
                }
                break;
        }
        count += in;
    }
    return count;
}

// ---- shared heavyweight resources ----

struct Resources {
    SelftestConfig cfg;
    RhoTable rho_fine;    // [0,20] at 1/256
    RhoTable rho_half;    // [0,20] at 1/512
    RhoTable rho_wide;    // [0,101] at 1/256
    FactorTables big;     // limit = cfg.big_x
    FactorTables small;   // limit = 1e4
    SaddleContext ctx;    // primes to 1e7
};

void log_line(const SelftestConfig& cfg, const std::string& msg) {
    if (cfg.progress) *cfg.progress << msg << "\n" << std::flush;
}

Resources build_resources(const SelftestConfig& cfg) {
    namespace fs = std::filesystem;
    Resources r;
    r.cfg = cfg;

    log_line(cfg, "# building rho tables");
    r.rho_fine = build_rho_table(20.0, 256);
    r.rho_half = build_rho_table(20.0, 512);
    r.rho_wide = build_rho_table(101.0, 256);

    const uint64_t ctx_limit = 10'000'000;
    const fs::path dir = cfg.cache_dir;
    bool have_ctx = false, have_big = false;
    if (!cfg.cache_dir.empty()) {
        fs::create_directories(dir);
        if (auto primes = read_primes(
                dir / ("primes_" + std::to_string(ctx_limit) + ".bin"),
                ctx_limit)) {
            log_line(cfg, "# prime cache hit");
            r.ctx = build_saddle_context(ctx_limit, std::move(*primes));
            have_ctx = true;
        }
        if (auto t = read_factor_tables(
                dir / ("factors_" + std::to_string(cfg.big_x) + ".bin"),
                cfg.big_x)) {
            log_line(cfg, "# factor-table cache hit");
            r.big = std::move(*t);
            have_big = true;
        }
    }
    if (!have_ctx) {
        log_line(cfg, "# sieving primes to 1e7");
        r.ctx = build_saddle_context(ctx_limit);
        if (!cfg.cache_dir.empty())
            write_primes(dir / ("primes_" + std::to_string(ctx_limit) + ".bin"),
                         ctx_limit, r.ctx.primes);
    }
    if (!have_big) {
        log_line(cfg, "# building factor tables to " +
                          std::to_string(cfg.big_x));
        r.big = build_tables(cfg.big_x);
        if (!cfg.cache_dir.empty())
            write_factor_tables(
                dir / ("factors_" + std::to_string(cfg.big_x) + ".bin"), r.big);
    }
    r.small = build_tables(10'000);
    return r;
}

// ---- criteria ----

CriterionResult crit_rho_table(const Resources& R) {
    CriterionResult c{"rho-table"};
    const auto& A = R.rho_fine;
    const auto& B = R.rho_half;
    double closed = 0.0;
    for (int i = A.steps_per_unit; i <= 2 * A.steps_per_unit; ++i) {
        const double v = double(i) * A.grid_step;
        closed = std::max(closed,
                          std::abs(std::exp(A.log_values[i]) -
                                   (1.0 - std::log(v))));
    }
    double halving = 0.0;
    for (size_t i = 0; i < A.log_values.size(); ++i)
        halving = std::max(halving, std::abs(std::expm1(
                                        A.log_values[i] - B.log_values[2 * i])));
    c.passed = closed <= tol::rho_closed_form && halving <= tol::rho_step_halving;
    c.detail = "closed-form err " + fnum(closed) + " (<= " +
               fnum(tol::rho_closed_form) + "), halving rel err " +
               fnum(halving) + " (<= " + fnum(tol::rho_step_halving) + ")";
    return c;
}

CriterionResult crit_rho_integral(const Resources& R) {
    CriterionResult c{"rho-integral"};
    const double got = rho_integral(R.rho_wide, 40.0);
    const double want = std::exp(EULER_GAMMA);
    const double err = std::abs(got - want);
    c.passed = err <= tol::rho_integral;
    c.detail = "|integral - e^gamma| = " + fnum(err) + " (<= " +
               fnum(tol::rho_integral) + ")";
    return c;
}

CriterionResult crit_xi_decay(const Resources& R) {
    CriterionResult c{"xi-and-decay-rate"};
    double worst_resid = 0.0, m1 = 0.0, m2 = 0.0;
    for (double v = 5.0; v <= 100.0; v += 0.5) {
        const double xv = xi(v);
        const double resid =
            std::abs(std::expm1(xv) - v * xv) / (1.0 + v * std::abs(xv));
        worst_resid = std::max(worst_resid, resid);
        const double r = dickman_r(R.rho_wide, v);
        m1 = std::max(m1, v * std::abs(r - xv));
        const double h = tol::r_central_diff_step;
        const double rp = (dickman_r(R.rho_wide, v + h) -
                           dickman_r(R.rho_wide, v - h)) /
                          (2.0 * h);
        m2 = std::max(m2, v * v * std::abs(rp - xi_prime(v)));
    }
    c.passed = worst_resid <= tol::xi_residual && m1 <= tol::r_vs_xi &&
               m2 <= tol::rprime_vs_xiprime;
    c.detail = "xi resid " + fnum(worst_resid) + " (<= " +
               fnum(tol::xi_residual) + "), max v|r-xi| = " + fnum(m1) +
               " (<= " + fnum(tol::r_vs_xi) + "), max v^2|r'-xi'| = " +
               fnum(m2) + " (<= " + fnum(tol::rprime_vs_xiprime) + ")";
    return c;
}

CriterionResult crit_euler_product(const Resources& R) {
    CriterionResult c{"kernel-distribution-euler-product"};
    const double six_pi2 = 6.0 / (std::numbers::pi * std::numbers::pi);
    const PsiPartialSums s = psi_partial_sums(1'000'000, &R.big);
    const double ep = six_pi2 * s.inv_npsi;
    const bool part1 = ep >= 1.0 - tol::euler_product_gap && ep < 1.0;

    bool increasing = true;
    double prev = 0.0, f15 = 0.0;
    for (int t = 1; t <= 15; ++t) {
        const double f = kernel_f_saturating(R.ctx, double(t), &R.big).value;
        if (f <= prev) increasing = false;
        prev = f;
        if (t == 15) f15 = f;
    }
    const bool part2 = increasing && f15 >= tol::f15_low && f15 < 1.0;
    c.passed = part1 && part2;
    c.detail = "partial product " + fnum(ep) + " (in [1-" +
               fnum(tol::euler_product_gap) + ",1)), Fhat " +
               (increasing ? "increasing" : "NOT increasing") + ", Fhat(15) = " +
               fnum(f15) + " (in [" + fnum(tol::f15_low) + ",1))";
    return c;
}

CriterionResult crit_saddle_solver(const Resources& R) {
    CriterionResult c{"saddle-point-solver"};
    double worst = 0.0;
    for (double t : {2.0, 10.0, 100.0, 1000.0}) {
        const double s = sigma_solve(R.ctx, t);
        worst = std::max(worst, std::abs(g_prime(R.ctx, s) + t) / t);
    }
    bool shrinking = true;
    double prev_dev = 0.0;
    std::string devs;
    for (int i = 0; i < 3; ++i) {
        const double t = std::pow(10.0, 2 + i);
        const double s = sigma_solve(R.ctx, t);
        const double dev = std::abs(s - sigma_asymptotic(t, 2)) / s;
        if (i > 0 && dev >= prev_dev) shrinking = false;
        prev_dev = dev;
        devs += (i ? "," : "") + fnum(dev);
    }
    c.passed = worst <= tol::saddle_residual && shrinking;
    c.detail = "max rel residual " + fnum(worst) + " (<= " +
               fnum(tol::saddle_residual) + "), asymptotic devs [" + devs +
               "] " + (shrinking ? "decreasing" : "NOT decreasing");
    return c;
}

CriterionResult crit_sandwich(const Resources& R) {
    CriterionResult c{"sandwich-exactness"};
    const double x = double(std::min<uint64_t>(R.cfg.big_x, 1'000'000));
    std::mt19937_64 rng(20240823);
    std::uniform_real_distribution<double> du(1.5, 4.0);
    std::uniform_real_distribution<double> dtheta(0.3, 0.7);
    std::uniform_real_distribution<double> dalpha(-1.0, 1.0);

    const TwoVarEvaluator psi_eval{
        [&](double xa, double ya) { return double(psi_exact(R.big, xa, ya)); },
        true};
    const TwoVarEvaluator n_eval{
        [&](double xa, double ya) { return double(n_exact(R.big, xa, ya)); },
        true};

    int violations = 0;
    double min_gap = 1e300;
    for (int i = 0; i < R.cfg.sandwich_queries; ++i) {
        const double u = du(rng);
        const auto sched = default_schedule_friable(x, u);
        const auto res = sandwich_d(psi_eval, x, u, sched);
        const double mid = double(d_exact(R.big, x, u));
        if (!(res.lower <= mid && mid <= res.upper)) ++violations;
        min_gap = std::min({min_gap, mid - res.lower, res.upper - mid});
    }
    for (int i = 0; i < R.cfg.sandwich_queries; ++i) {
        double theta, alpha, v;
        do {  // the ladder needs log(x/y) >= 4; redraw until admissible
            theta = dtheta(rng);
            alpha = dalpha(rng);
            v = (1.0 - theta) * std::log(x) -
                alpha * std::log(std::log(x));
        } while (v < 4.0);
        const auto sched = default_schedule_kernel(x, theta, alpha);
        const auto res = sandwich_s(n_eval, x, theta, alpha, sched);
        const double mid = double(s_exact(R.big, x, theta, alpha));
        if (!(res.lower <= mid && mid <= res.upper)) ++violations;
        min_gap = std::min({min_gap, mid - res.lower, res.upper - mid});
    }
    c.passed = violations == 0;
    c.detail = std::to_string(2 * R.cfg.sandwich_queries) + " queries at x=" +
               fnum(x) + ", violations " + std::to_string(violations) +
               ", tightest slack " + fnum(min_gap);
    return c;
}

CriterionResult crit_friable_two_term(const Resources& R) {
    CriterionResult c{"friable-two-term"};
    const double x = double(R.cfg.big_x);
    int closer = 0;
    bool within = true;
    std::string parts;
    for (double u : {2.0, 2.5, 3.0}) {
        const double y = std::pow(x, 1.0 / u);
        const double exact = double(d_exact(R.big, x, u));
        const double two = d_estimate(R.rho_wide, x, u, DForm::two_term).value;
        const double one = x * std::exp(log_rho(R.rho_wide, u));
        const double bound = tol::d_two_term_factor * x *
                             std::exp(log_rho(R.rho_wide, u)) *
                             d_error_scale_refined(x, y);
        const double err2 = std::abs(exact - two);
        if (err2 > bound) within = false;
        if (err2 < std::abs(exact - one)) ++closer;
        parts += (parts.empty() ? "" : "; ") + ("u=" + fnum(u)) + ": |err| " +
                 fnum(err2) + " vs bound " + fnum(bound);
    }
    c.passed = within && closer >= 2;
    c.detail = parts + "; two-term closer in " + std::to_string(closer) + "/3";
    return c;
}

CriterionResult crit_logsum_two_term(const Resources& R) {
    CriterionResult c{"logsum-two-term"};
    const double x = double(R.cfg.big_x);
    const double bound =
        tol::logsum_factor * x / std::pow(std::log(x), 1.5);

    const double exact_n = dickman_sum_exact(R.big, x, SumNumerator::log_n);
    const auto est_n = dickman_sum_estimate(x, SumNumerator::log_n);
    const double err_n = std::abs(exact_n - est_n.value);
    const double err_n_one = std::abs(exact_n - est_n.main_term);

    const double exact_x = dickman_sum_exact(R.big, x, SumNumerator::log_x);
    const auto est_x = dickman_sum_estimate(x, SumNumerator::log_x);
    const double err_x = std::abs(exact_x - est_x.value);

    const double ident = integral_identity_check(R.big, x);

    c.passed = err_n <= bound && err_x <= bound && err_n < err_n_one &&
               ident <= tol::integral_identity;
    c.detail = "log n err " + fnum(err_n) + ", log x err " + fnum(err_x) +
               " (<= " + fnum(bound) + "), one-term err " + fnum(err_n_one) +
               ", identity gap " + fnum(ident) + " (<= " +
               fnum(tol::integral_identity) + ")";
    return c;
}

CriterionResult crit_kernel_counts(const Resources& R) {
    CriterionResult c{"kernel-count-estimates"};
    const double x = double(R.cfg.big_x);
    bool ok = true;
    std::string parts;
    for (double theta : {0.3, 0.5, 0.7}) {
        const double y = std::pow(x, theta);
        const double exact = double(n_exact(R.big, x, y));
        const double est = n_estimate(R.ctx, x, y).value;
        const double rel = std::abs(exact - est) / exact;
        if (rel > tol::kernel_count_rel) ok = false;
        parts += (parts.empty() ? "" : ", ") + ("theta=" + fnum(theta)) +
                 " rel " + fnum(rel);
    }

    bool ratio_ok = true, approaching = true;
    double prev_gap = 0.0;
    std::string ratios;
    for (int i = 2; i >= 0; --i) {
        const double xs = x / std::pow(10.0, i);
        const double exact = double(s_exact(R.big, xs, 0.5, 0.0));
        const double est = s_estimate(R.ctx, xs, 0.5, 0.0).value;
        const double ratio = exact / est;
        if (!(ratio >= tol::s_ratio_low && ratio <= tol::s_ratio_high))
            ratio_ok = false;
        const double gap = std::abs(ratio - 1.0);
        if (i < 2 && gap > prev_gap) approaching = false;
        prev_gap = gap;
        ratios += (ratios.empty() ? "" : ",") + fnum(ratio);
    }
    c.passed = ok && ratio_ok && approaching;
    c.detail = parts + " (<= " + fnum(tol::kernel_count_rel) + "); s ratios [" +
               ratios + "] " +
               (ratio_ok ? (approaching ? "in band, approaching 1"
                                        : "in band, NOT approaching 1")
                         : "OUT of band");
    return c;
}

CriterionResult crit_counter_equivalence(const Resources& R) {
    CriterionResult c{"exact-counter-equivalence"};
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> dx(2.0, 10'000.0);
    std::uniform_real_distribution<double> dfrac(0.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        CountQuery q;
        q.x = dx(rng);
        switch (i % 4) {
            case 0:
                q.kind = CountQuery::Kind::psi;
                q.y = 1.0 + dfrac(rng) * (q.x - 1.0);
                break;
            case 1:
                q.kind = CountQuery::Kind::d;
                // alternate fractional and integer exponents
                q.u = (i % 8 == 1) ? 1.0 + 4.0 * dfrac(rng)
                                   : double(1 + int(4.0 * dfrac(rng)));
                break;
            case 2:
                q.kind = CountQuery::Kind::n;
                q.y = 1.0 + dfrac(rng) * (q.x - 1.0);
                break;
            case 3:
                q.kind = CountQuery::Kind::s;
                q.theta = 0.05 + 0.95 * dfrac(rng);
                q.alpha = -2.0 + 4.0 * dfrac(rng);
                break;
        }
        if (run_count(R.small, q) != naive_count(q)) ++mismatches;
    }
    c.passed = mismatches == 0;
    c.detail = "200 random queries at x <= 1e4, mismatches " +
               std::to_string(mismatches);
    return c;
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestConfig& cfg) {
    require(cfg.big_x >= 100'000, "selftest: big_x must be >= 1e5");
    require(cfg.sandwich_queries >= 1, "selftest: need at least one query");
    Timer setup;
    const Resources R = build_resources(cfg);
    log_line(cfg, "# shared tables ready in " + fnum(setup.elapsed()) + "s");

    std::vector<CriterionResult> out;
    const auto run = [&](const char* name,
                         CriterionResult (*fn)(const Resources&)) {
        Timer t;
        CriterionResult r;
        try {
            r = fn(R);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.name = name;
        r.seconds = t.elapsed();
        log_line(cfg, std::string(r.passed ? "PASS " : "FAIL ") + r.name +
                          " (" + r.detail + ")");
        out.push_back(std::move(r));
    };
    run("rho-table", crit_rho_table);
    run("rho-integral", crit_rho_integral);
    run("xi-and-decay-rate", crit_xi_decay);
    run("kernel-distribution-euler-product", crit_euler_product);
    run("saddle-point-solver", crit_saddle_solver);
    run("sandwich-exactness", crit_sandwich);
    run("friable-two-term", crit_friable_two_term);
    run("logsum-two-term", crit_logsum_two_term);
    run("kernel-count-estimates", crit_kernel_counts);
    run("exact-counter-equivalence", crit_counter_equivalence);
    return out;
}

bool all_passed(const std::vector<CriterionResult>& rs) {
    for (const auto& r : rs)
        if (!r.passed) return false;
    return !rs.empty();
}

void print_results(std::ostream& os, const std::vector<CriterionResult>& rs) {
    int passed = 0;
    for (const auto& r : rs) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
        os << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail
           << ") [" << buf << "s]\n";
        passed += r.passed;
    }
    os << passed << "/" << rs.size() << " acceptance criteria passed\n";
}

}  // namespace friable
