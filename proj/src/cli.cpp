#include "friable/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "friable/container.hpp"
#include "friable/estimators.hpp"
#include "friable/kernel_saddle.hpp"
#include "friable/sandwich.hpp"
#include "friable/selftest.hpp"
#include "friable/sieves.hpp"
#include "friable/special_functions.hpp"
#include "friable/util.hpp"

namespace friable {

namespace {

void print_value(double v) { std::printf("%.17g\n", v); }

std::string csv_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RhoTable rho_table_for(double max_v) {
    return build_rho_table(std::min(std::max(max_v, 2.0), 2000.0), 256);
}

FactorTables tables_for(double x, uint64_t table_limit, int threads) {
    uint64_t limit = table_limit;
    if (limit == 0) limit = uint64_t(std::ceil(x));
    if (limit < 2) limit = 2;
    return build_tables(limit, threads);
}

// ---- subcommand option bags ----

struct RhoArgs {
    double v = 0.0;
    std::string quantity = "rho";
};

struct XiArgs {
    double v = 0.0;
    bool prime = false;
};

struct SigmaArgs {
    double t = 0.0;
    std::string method = "solve";
    int order = 2;
    uint64_t prime_limit = 10'000'000;
};

struct BigfArgs {
    double t = 0.0;
    bool saturating = false;
    uint64_t prime_limit = 1'000'000;
};

struct ZetaArgs {
    double s = 0.0;
    std::string quantity = "zeta";
};

struct CountArgs {
    std::string kind;
    double x = 0.0, y = 0.0, u = 0.0, theta = 0.5, alpha = 0.0;
    uint64_t table_limit = 0;
    int threads = 0;
};

struct EstimateArgs {
    std::string kind;
    double x = 0.0, y = 0.0, u = 0.0, theta = 0.5, alpha = 0.0;
    uint64_t prime_limit = 10'000'000;
    std::string format = "json";
};

struct SandwichArgs {
    std::string target = "d";
    double x = 0.0, u = 0.0, theta = 0.5, alpha = 0.0;
    std::string evaluator = "exact";
    bool trace = false;
    uint64_t table_limit = 0;
    int threads = 0;
};

struct CompareArgs {
    std::string kind;
    std::vector<double> xs, ys, us, thetas, alphas;
    std::string form = "two-term";
    uint64_t prime_limit = 10'000'000;
    int threads = 0;
};

struct SelftestArgs {
    bool quick = false;
    bool full = false;
    std::string cache_dir;
};

int do_rho(const RhoArgs& a) {
    require(a.v >= 0.0, "rho: v must be >= 0");
    const RhoTable t = rho_table_for(std::ceil(a.v) + 2.0);
    if (a.quantity == "rho")
        print_value(rho(t, a.v));
    else if (a.quantity == "log-rho")
        print_value(log_rho(t, a.v));
    else if (a.quantity == "rho-prime")
        print_value(rho_prime(t, a.v));
    else if (a.quantity == "r")
        print_value(dickman_r(t, a.v));
    else
        throw std::domain_error("rho: unknown quantity " + a.quantity);
    return 0;
}

int do_xi(const XiArgs& a) {
    print_value(a.prime ? xi_prime(a.v) : xi(a.v));
    return 0;
}

int do_sigma(const SigmaArgs& a) {
    if (a.method == "solve") {
        const SaddleContext ctx = build_saddle_context(a.prime_limit);
        print_value(sigma_solve(ctx, a.t));
    } else if (a.method == "asymptotic") {
        print_value(sigma_asymptotic(a.t, a.order));
    } else {
        throw std::domain_error("sigma: unknown method " + a.method);
    }
    return 0;
}

int do_bigf(const BigfArgs& a) {
    const SaddleContext ctx = build_saddle_context(a.prime_limit);
    const KernelF f = a.saturating ? kernel_f_saturating(ctx, a.t)
                                   : kernel_f(ctx, a.t);
    if (f.reduced_accuracy)
        std::cerr << "note: tail extrapolated beyond " << f.terms
                  << " direct terms\n";
    print_value(f.value);
    return 0;
}

int do_zeta(const ZetaArgs& a) {
    const ZetaEvaluator ev;
    if (a.quantity == "zeta")
        print_value(zeta_real(ev, a.s));
    else if (a.quantity == "z")
        print_value(big_z(ev, a.s));
    else
        throw std::domain_error("zeta: unknown quantity " + a.quantity);
    return 0;
}

int do_count(const CountArgs& a) {
    CountQuery q;
    q.x = a.x;
    q.y = a.y;
    q.u = a.u;
    q.theta = a.theta;
    q.alpha = a.alpha;
    if (a.kind == "psi")
        q.kind = CountQuery::Kind::psi;
    else if (a.kind == "d")
        q.kind = CountQuery::Kind::d;
    else if (a.kind == "n")
        q.kind = CountQuery::Kind::n;
    else if (a.kind == "s")
        q.kind = CountQuery::Kind::s;
    else
        throw std::domain_error("count: unknown kind " + a.kind);
    const FactorTables t = tables_for(a.x, a.table_limit, a.threads);
    std::printf("%llu\n", (unsigned long long)run_count(t, q));
    return 0;
}

int do_estimate(const EstimateArgs& a) {
    EstimateReport rep;
    if (a.kind == "psi-saddle" || a.kind == "psi-two-term") {
        require(a.y > 1.0, "estimate: --y required");
        const RhoTable t =
            rho_table_for(std::ceil(std::log(a.x) / std::log(a.y)) + 2.0);
        rep = (a.kind == "psi-saddle") ? psi_saddle(t, a.x, a.y)
                                       : psi_two_term(t, a.x, a.y);
    } else if (a.kind == "d" || a.kind == "d-saddle-factor") {
        require(a.u > 1.0, "estimate: --u required (> 1)");
        const RhoTable t = rho_table_for(std::ceil(a.u) + 2.0);
        rep = d_estimate(t, a.x, a.u,
                         a.kind == "d" ? DForm::two_term
                                       : DForm::saddle_factor);
    } else if (a.kind == "dickman-sum") {
        rep = dickman_sum_estimate(a.x, SumNumerator::log_n);
    } else if (a.kind == "dickman-sum-logx") {
        rep = dickman_sum_estimate(a.x, SumNumerator::log_x);
    } else if (a.kind == "n") {
        require(a.y >= 1.0, "estimate: --y required");
        const SaddleContext ctx = build_saddle_context(a.prime_limit);
        rep = n_estimate(ctx, a.x, a.y);
    } else if (a.kind == "s") {
        const SaddleContext ctx = build_saddle_context(a.prime_limit);
        rep = s_estimate(ctx, a.x, a.theta, a.alpha);
    } else {
        throw std::domain_error("estimate: unknown kind " + a.kind);
    }
    if (a.format == "json")
        std::printf("%s\n", report_json(rep).c_str());
    else if (a.format == "plain")
        print_value(rep.value);
    else
        throw std::domain_error("estimate: unknown format " + a.format);
    return 0;
}

int do_sandwich(const SandwichArgs& a) {
    std::vector<SandwichTraceRow> trace;
    std::vector<SandwichTraceRow>* tp = a.trace ? &trace : nullptr;
    SandwichResult res;
    if (a.target == "d") {
        const auto sched = default_schedule_friable(a.x, a.u);
        TwoVarEvaluator eval;
        std::optional<FactorTables> tables;
        std::optional<RhoTable> rho_t;
        if (a.evaluator == "exact") {
            tables = tables_for(a.x, a.table_limit, a.threads);
            eval.fn = [&](double xa, double ya) {
                return double(psi_exact(*tables, xa, ya));
            };
            eval.exact = true;
        } else if (a.evaluator == "asymptotic") {
            rho_t = rho_table_for(
                std::ceil(std::log(a.x) / std::log(2.0)) + 2.0);
            eval.fn = [&](double xa, double ya) {
                const double up = std::log(xa) / std::log(ya);
                if (up <= 1.0) return std::floor(xa);
                const double one = xa * std::exp(log_rho(*rho_t, up));
                if (ya < 3.0) return one;
                const double beta =
                    1.0 - dickman_r(*rho_t, up) / std::log(ya);
                if (beta <= 0.05) return one;
                return psi_saddle(*rho_t, xa, ya).value;
            };
        } else {
            throw std::domain_error("sandwich: unknown evaluator " +
                                    a.evaluator);
        }
        res = sandwich_d(eval, a.x, a.u, sched, tp);
    } else if (a.target == "s") {
        const auto sched = default_schedule_kernel(a.x, a.theta, a.alpha);
        TwoVarEvaluator eval;
        std::optional<FactorTables> tables;
        std::optional<SaddleContext> ctx;
        if (a.evaluator == "exact") {
            tables = tables_for(a.x, a.table_limit, a.threads);
            eval.fn = [&](double xa, double ya) {
                return double(n_exact(*tables, xa, ya));
            };
            eval.exact = true;
        } else if (a.evaluator == "asymptotic") {
            ctx = build_saddle_context(100'000);
            eval.fn = [&](double xa, double ya) {
                if (ya >= xa) return std::floor(xa);
                return n_estimate(*ctx, xa, ya).value;
            };
        } else {
            throw std::domain_error("sandwich: unknown evaluator " +
                                    a.evaluator);
        }
        res = sandwich_s(eval, a.x, a.theta, a.alpha, sched, tp);
    } else {
        throw std::domain_error("sandwich: unknown target " + a.target);
    }
    if (a.trace) {
        std::printf("step,xk,yk,lower_partial,upper_partial\n");
        for (const auto& row : trace)
            std::printf("%d,%.17g,%.17g,%.17g,%.17g\n", row.k, row.xk, row.yk,
                        row.lower_partial, row.upper_partial);
    }
    std::printf("lower %.17g\n", res.lower);
    std::printf("upper %.17g\n", res.upper);
    return 0;
}

int do_compare(const CompareArgs& a) {
    require(!a.xs.empty(), "compare: --x-list required");
    double max_x = 0.0;
    for (double x : a.xs) max_x = std::max(max_x, x);

    std::optional<FactorTables> tables = tables_for(max_x, 0, a.threads);
    std::optional<RhoTable> rho_t;
    std::optional<SaddleContext> ctx;

    std::printf(
        "kind,x,y,u,theta,alpha,exact,estimate,main,correction,error_scale,"
        "normalized_dev,in_range\n");
    const auto emit = [&](const std::string& kind, double x, double y, double u,
                          double theta, double alpha, bool has_y, bool has_u,
                          bool has_ta, double exact,
                          const EstimateReport& rep) {
        const double dev = (exact - rep.value) / rep.error_scale;
        std::printf("%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", kind.c_str(),
                    csv_num(x).c_str(), has_y ? csv_num(y).c_str() : "",
                    has_u ? csv_num(u).c_str() : "",
                    has_ta ? csv_num(theta).c_str() : "",
                    has_ta ? csv_num(alpha).c_str() : "",
                    csv_num(exact).c_str(), csv_num(rep.value).c_str(),
                    csv_num(rep.main_term).c_str(),
                    csv_num(rep.correction_term).c_str(),
                    csv_num(rep.error_scale).c_str(), csv_num(dev).c_str(),
                    rep.in_range ? "true" : "false");
    };

    if (a.kind == "psi") {
        require(!a.ys.empty(), "compare: --y-list required for kind psi");
        rho_t = rho_table_for(std::log(max_x) / std::log(2.0) + 2.0);
        for (double x : a.xs)
            for (double y : a.ys) {
                const double exact = double(psi_exact(*tables, x, y));
                const EstimateReport rep = (a.form == "saddle")
                                               ? psi_saddle(*rho_t, x, y)
                                               : psi_two_term(*rho_t, x, y);
                emit("psi", x, y, std::log(x) / std::log(y), 0, 0, true, true,
                     false, exact, rep);
            }
    } else if (a.kind == "d") {
        require(!a.us.empty(), "compare: --u-list required for kind d");
        double max_u = 2.0;
        for (double u : a.us) max_u = std::max(max_u, u);
        rho_t = rho_table_for(std::ceil(max_u) + 2.0);
        for (double x : a.xs)
            for (double u : a.us) {
                const double exact = double(d_exact(*tables, x, u));
                const EstimateReport rep =
                    d_estimate(*rho_t, x, u,
                               a.form == "saddle" ? DForm::saddle_factor
                                                  : DForm::two_term);
                emit("d", x, std::pow(x, 1.0 / u), u, 0, 0, true, true, false,
                     exact, rep);
            }
    } else if (a.kind == "n") {
        require(!a.thetas.empty(), "compare: --theta-list required for kind n");
        ctx = build_saddle_context(a.prime_limit);
        for (double x : a.xs)
            for (double theta : a.thetas) {
                const double y = std::pow(x, theta);
                const double exact = double(n_exact(*tables, x, y));
                const EstimateReport rep = n_estimate(*ctx, x, y);
                emit("n", x, y, 0, theta, 0, true, false, true, exact, rep);
            }
    } else if (a.kind == "s") {
        require(!a.thetas.empty(), "compare: --theta-list required for kind s");
        ctx = build_saddle_context(a.prime_limit);
        const std::vector<double> alphas =
            a.alphas.empty() ? std::vector<double>{0.0} : a.alphas;
        for (double x : a.xs)
            for (double theta : a.thetas)
                for (double alpha : alphas) {
                    const double exact =
                        double(s_exact(*tables, x, theta, alpha));
                    const EstimateReport rep =
                        s_estimate(*ctx, x, theta, alpha);
                    const double y = std::exp(theta * std::log(x) +
                                              alpha * std::log(std::log(x)));
                    emit("s", x, y, 0, theta, alpha, true, false, true, exact,
                         rep);
                }
    } else if (a.kind == "dickman-sum" || a.kind == "dickman-sum-logx") {
        const SumNumerator which = (a.kind == "dickman-sum")
                                       ? SumNumerator::log_n
                                       : SumNumerator::log_x;
        for (double x : a.xs) {
            const double exact = dickman_sum_exact(*tables, x, which);
            const EstimateReport rep = dickman_sum_estimate(x, which);
            emit(a.kind, x, 0, 0, 0, 0, false, false, false, exact, rep);
        }
    } else {
        throw std::domain_error("compare: unknown kind " + a.kind);
    }
    return 0;
}

int do_selftest(const SelftestArgs& a) {
    require(!(a.quick && a.full), "selftest: --quick and --full conflict");
    SelftestConfig cfg;
    cfg.big_x = a.quick ? 100'000 : (a.full ? 10'000'000 : 1'000'000);
    cfg.sandwich_queries = a.quick ? 10 : 50;
    cfg.cache_dir = a.cache_dir;
    if (cfg.cache_dir.empty()) {
        if (const char* env = std::getenv("FRIABLE_CACHE_DIR"))
            cfg.cache_dir = env;
    }
    cfg.progress = &std::cerr;
    const auto results = run_selftest(cfg);
    print_results(std::cout, results);
    return all_passed(results) ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"friable/squarefree-kernel counting and asymptotics"};
    app.require_subcommand(1);

    RhoArgs rho_a;
    auto* rho_cmd = app.add_subcommand("rho", "Dickman function values");
    rho_cmd->add_option("--v", rho_a.v, "argument v")->required();
    rho_cmd->add_option("--quantity", rho_a.quantity,
                        "rho | log-rho | rho-prime | r");

    XiArgs xi_a;
    auto* xi_cmd =
        app.add_subcommand("xi", "saddle equation e^xi = 1 + v xi");
    xi_cmd->add_option("--v", xi_a.v, "argument v (> 0)")->required();
    xi_cmd->add_flag("--prime", xi_a.prime, "derivative d xi/dv");

    SigmaArgs sigma_a;
    auto* sigma_cmd =
        app.add_subcommand("sigma", "kernel saddle point sigma(t)");
    sigma_cmd->add_option("--t", sigma_a.t, "target t (>= 1)")->required();
    sigma_cmd->add_option("--method", sigma_a.method, "solve | asymptotic");
    sigma_cmd->add_option("--order", sigma_a.order,
                          "asymptotic truncation order 0..2");
    sigma_cmd->add_option("--prime-limit", sigma_a.prime_limit,
                          "prime table cutoff");

    BigfArgs bigf_a;
    auto* bigf_cmd =
        app.add_subcommand("bigf", "kernel distribution function F");
    bigf_cmd->add_option("--t", bigf_a.t, "argument t (> 0)")->required();
    bigf_cmd->add_flag("--saturating", bigf_a.saturating,
                       "the [0,1]-normalized variant");
    bigf_cmd->add_option("--prime-limit", bigf_a.prime_limit,
                         "prime table cutoff");

    ZetaArgs zeta_a;
    auto* zeta_cmd = app.add_subcommand("zeta", "zeta(s) or Z(s)=(s-1)zeta/s");
    zeta_cmd->add_option("--s", zeta_a.s, "argument s (> 0)")->required();
    zeta_cmd->add_option("--quantity", zeta_a.quantity, "zeta | z");

    CountArgs count_a;
    auto* count_cmd = app.add_subcommand("count", "exact counts by sieve");
    count_cmd->add_option("--kind", count_a.kind, "psi | d | n | s")
        ->required();
    count_cmd->add_option("--x", count_a.x, "upper limit x")->required();
    count_cmd->add_option("--y", count_a.y, "threshold y (psi, n)");
    count_cmd->add_option("--u", count_a.u, "exponent u (d)");
    count_cmd->add_option("--theta", count_a.theta, "exponent theta (s)");
    count_cmd->add_option("--alpha", count_a.alpha, "log power alpha (s)");
    count_cmd->add_option("--table-limit", count_a.table_limit,
                          "sieve table size (default ceil(x))");
    count_cmd->add_option("--threads", count_a.threads,
                          "sieve threads (0 = auto)");

    EstimateArgs est_a;
    auto* est_cmd = app.add_subcommand("estimate", "asymptotic estimates");
    est_cmd
        ->add_option("--kind", est_a.kind,
                     "psi-saddle | psi-two-term | d | d-saddle-factor | "
                     "dickman-sum | dickman-sum-logx | n | s")
        ->required();
    est_cmd->add_option("--x", est_a.x, "x")->required();
    est_cmd->add_option("--y", est_a.y, "y (psi-*, n)");
    est_cmd->add_option("--u", est_a.u, "u (d forms)");
    est_cmd->add_option("--theta", est_a.theta, "theta (s)");
    est_cmd->add_option("--alpha", est_a.alpha, "alpha (s)");
    est_cmd->add_option("--prime-limit", est_a.prime_limit,
                        "prime table cutoff (n, s)");
    est_cmd->add_option("--format", est_a.format, "json | plain");

    SandwichArgs sand_a;
    auto* sand_cmd =
        app.add_subcommand("sandwich", "discretization bracket for D or S");
    sand_cmd->add_option("--target", sand_a.target, "d | s");
    sand_cmd->add_option("--x", sand_a.x, "x")->required();
    sand_cmd->add_option("--u", sand_a.u, "u (target d)");
    sand_cmd->add_option("--theta", sand_a.theta, "theta (target s)");
    sand_cmd->add_option("--alpha", sand_a.alpha, "alpha (target s)");
    sand_cmd->add_option("--evaluator", sand_a.evaluator,
                         "exact | asymptotic");
    sand_cmd->add_flag("--trace", sand_a.trace, "print per-step partials");
    sand_cmd->add_option("--table-limit", sand_a.table_limit,
                         "sieve table size (exact evaluator)");
    sand_cmd->add_option("--threads", sand_a.threads, "sieve threads");

    CompareArgs cmp_a;
    auto* cmp_cmd =
        app.add_subcommand("compare", "exact vs estimate sweeps as CSV");
    cmp_cmd
        ->add_option("--kind", cmp_a.kind,
                     "psi | d | n | s | dickman-sum | dickman-sum-logx")
        ->required();
    cmp_cmd->add_option("--x-list", cmp_a.xs, "x values")
        ->required()
        ->delimiter(',');
    cmp_cmd->add_option("--y-list", cmp_a.ys, "y values (psi)")
        ->delimiter(',');
    cmp_cmd->add_option("--u-list", cmp_a.us, "u values (d)")->delimiter(',');
    cmp_cmd->add_option("--theta-list", cmp_a.thetas, "theta values (n, s)")
        ->delimiter(',');
    cmp_cmd->add_option("--alpha-list", cmp_a.alphas, "alpha values (s)")
        ->delimiter(',');
    cmp_cmd->add_option("--form", cmp_a.form,
                        "two-term | saddle (psi and d)");
    cmp_cmd->add_option("--prime-limit", cmp_a.prime_limit,
                        "prime table cutoff (n, s)");
    cmp_cmd->add_option("--threads", cmp_a.threads, "sieve threads");

    SelftestArgs self_a;
    auto* self_cmd =
        app.add_subcommand("selftest", "run the acceptance criteria");
    self_cmd->add_flag("--quick", self_a.quick, "reduced scale (x = 1e5)");
    self_cmd->add_flag("--full", self_a.full, "full scale (x = 1e7)");
    self_cmd->add_option("--cache-dir", self_a.cache_dir,
                         "cache directory (default $FRIABLE_CACHE_DIR)");

    try {
        app.parse(argc, argv);
        if (rho_cmd->parsed()) return do_rho(rho_a);
        if (xi_cmd->parsed()) return do_xi(xi_a);
        if (sigma_cmd->parsed()) return do_sigma(sigma_a);
        if (bigf_cmd->parsed()) return do_bigf(bigf_a);
        if (zeta_cmd->parsed()) return do_zeta(zeta_a);
        if (count_cmd->parsed()) return do_count(count_a);
        if (est_cmd->parsed()) return do_estimate(est_a);
        if (sand_cmd->parsed()) return do_sandwich(sand_a);
        if (cmp_cmd->parsed()) return do_compare(cmp_a);
        if (self_cmd->parsed()) return do_selftest(self_a);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource error: allocation failed\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace friable
