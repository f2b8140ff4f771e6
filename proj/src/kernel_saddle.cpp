#include "friable/kernel_saddle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "friable/util.hpp"

namespace friable {

namespace {

constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
constexpr double kSixOverPi2 = 1.0 / kZeta2;

// Gauss-Legendre nodes computed at first use (Newton on the Legendre
// recurrence) rather than transcribed, so the rule is exact to rounding.
struct GaussLegendre {
    std::vector<double> node, weight;

    explicit GaussLegendre(int n) {
        node.resize(n);
        weight.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double p = 0.0, dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double pk = 1.0, pk1 = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double prev = pk1;
                    pk1 = pk;
                    pk = ((2 * k + 1) * t * pk1 - k * prev) / (k + 1);
                }
                p = pk;
                dp = n * (t * pk - pk1) / (t * t - 1.0);
                const double step = p / dp;
                t -= step;
                if (std::abs(step) < 1e-15) break;
            }
            node[i] = t;
            weight[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussLegendre& gl15() {
    static const GaussLegendre g(15);
    return g;
}

// Integrates fn over [a, a + panels*width] with one 15-point rule per panel.
template <class F>
double panel_integral(double a, double width, int panels, F&& fn) {
    const auto& g = gl15();
    CompensatedSum s;
    for (int i = 0; i < panels; ++i) {
        const double mid = a + (i + 0.5) * width;
        const double half = 0.5 * width;
        for (size_t j = 0; j < g.node.size(); ++j)
            s.add(g.weight[j] * half * fn(mid + half * g.node[j]));
    }
    return s.value();
}

// Tail of g' over primes > prime_limit as an integral against the prime
// density dw (w = log p): integrand -E/((E-1)(E-1+e^{(sigma-1)w})), E=e^{sigma w}.
// 45 panels of width 1/sigma cover 45 e-folds of decay; sigma*w stays below
// sigma*W + 45, so E cannot overflow.
double gprime_tail(const SaddleContext& ctx, double sigma) {
    const double W = std::log(double(ctx.prime_limit));
    return panel_integral(W, 1.0 / sigma, 45, [sigma](double w) {
        const double E = std::exp(sigma * w);
        return -E / ((E - 1.0) * ((E - 1.0) + std::exp((sigma - 1.0) * w)));
    });
}

// Tail of g itself: integrand log(1 + a(e^w)) e^w / w with
// a(x) = (1 - x^{sigma-1})/(x (x^sigma - 1)).  Once a is tiny, log1p(a) e^w
// collapses to (1 - e^{(sigma-1)w})/(e^{sigma w} - 1), dodging e^w overflow.
double gvalue_tail(const SaddleContext& ctx, double sigma) {
    const double W = std::log(double(ctx.prime_limit));
    return panel_integral(W, 1.0 / sigma, 45, [sigma](double w) {
        const double t1 = -std::expm1((sigma - 1.0) * w);  // in (0,1)
        const double em = std::expm1(sigma * w);
        const double ew = std::exp(-w);
        const double a = t1 * ew / em;
        if (a < 1e-12) return t1 / (em * w);
        return std::log1p(a) * std::exp(w) / w;
    });
}

}  // namespace

namespace {

void check_context_limit(uint64_t prime_limit) {
    require(prime_limit >= 1000, "build_saddle_context: prime_limit too small");
    if (prime_limit > (uint64_t(1) << 31))
        throw resource_error("build_saddle_context: prime_limit exceeds 2^31");
}

SaddleContext finish_context(uint64_t prime_limit,
                             std::vector<uint32_t> primes) {
    SaddleContext ctx;
    ctx.prime_limit = prime_limit;
    ctx.primes = std::move(primes);
    ctx.log_primes.reserve(ctx.primes.size());
    CompensatedSum lg;  // Euler product for sum_n 1/(n^2 psi(n))
    for (uint32_t p : ctx.primes) {
        ctx.log_primes.push_back(std::log(double(p)));
        const double pd = p;
        lg.add(std::log1p(1.0 / ((pd + 1.0) * (pd * pd - 1.0))));
    }
    ctx.inv_n2psi_total = std::exp(lg.value());
    return ctx;
}

}  // namespace

SaddleContext build_saddle_context(uint64_t prime_limit) {
    check_context_limit(prime_limit);
    std::vector<bool> composite(size_t(prime_limit) + 1, false);
    for (uint64_t i = 2; i * i <= prime_limit; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= prime_limit; j += i) composite[j] = true;
    }
    std::vector<uint32_t> primes;
    for (uint64_t i = 2; i <= prime_limit; ++i)
        if (!composite[i]) primes.push_back(uint32_t(i));
    return finish_context(prime_limit, std::move(primes));
}

SaddleContext build_saddle_context(uint64_t prime_limit,
                                   std::vector<uint32_t> primes) {
    check_context_limit(prime_limit);
    require(!primes.empty() && primes.front() == 2 &&
                primes.back() <= prime_limit,
            "build_saddle_context: prime list does not match the limit");
    return finish_context(prime_limit, std::move(primes));
}

uint64_t psi_mult(uint64_t n) {
    require(n >= 1, "psi_mult: n must be >= 1");
    uint64_t res = 1;
    for (uint64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
        if (n % p) continue;
        res *= p + 1;
        do n /= p; while (n % p == 0);
    }
    if (n > 1) res *= n + 1;
    return res;
}

double g_value(const SaddleContext& ctx, double sigma) {
    require(sigma > 0.0 && sigma <= 1.0, "g_value: sigma must lie in (0, 1]");
    CompensatedSum s;
    for (size_t i = 0; i < ctx.primes.size(); ++i) {
        const double p = ctx.primes[i];
        const double lp = ctx.log_primes[i];
        const double a =
            -std::expm1((sigma - 1.0) * lp) / (p * std::expm1(sigma * lp));
        s.add(std::log1p(a));
    }
    s.add(gvalue_tail(ctx, sigma));
    return s.value();
}

double g_prime(const SaddleContext& ctx, double sigma) {
    require(sigma > 0.0 && sigma < 1.0, "g_prime: sigma must lie in (0, 1)");
    CompensatedSum s;
    for (size_t i = 0; i < ctx.primes.size(); ++i) {
        const double p = ctx.primes[i];
        const double lp = ctx.log_primes[i];
        const double em = std::expm1(sigma * lp);  // p^sigma - 1, stable as
        const double E = em + 1.0;                 // sigma -> 0
        s.add(-lp * E / (em * ((p + 1.0) * E - p)));
    }
    s.add(gprime_tail(ctx, sigma));
    return s.value();
}

double sigma_solve(const SaddleContext& ctx, double t) {
    require(t >= 1.0, "sigma_solve: t must be >= 1");
    const auto f = [&](double s) { return g_prime(ctx, s) + t; };

    // -g' decreases from +inf to ~0.7554 as sigma goes 0 -> 1, so f has a
    // sign change for every t >= 1; halve downward until f goes negative.
    double hi = 1.0 - 1e-6;
    double fhi = f(hi);
    if (fhi <= 0.0)
        throw std::runtime_error("sigma_solve: no sign change near sigma = 1");
    double lo = 0.5, flo = f(lo);
    int guard = 0;
    while (flo > 0.0) {
        hi = lo;
        fhi = flo;
        lo *= 0.5;
        flo = f(lo);
        if (++guard > 200)
            throw std::runtime_error("sigma_solve: bracket descent failed");
    }

    // Illinois-damped false position; the bracket never opens.
    const double target = 0.5 * ctx.target_rel_error_gprime * t;
    double a = lo, fa = flo, b = hi, fb = fhi;
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        double x = b - fb * (b - a) / (fb - fa);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        const double fx = f(x);
        if (std::abs(fx) <= target) return x;
        if (fx < 0.0) {
            a = x; fa = fx;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = x; fb = fx;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    throw std::runtime_error("sigma_solve: residual target not reached");
}

double SigmaExpansion::p1(double z) const {
    return 0.5 * (z - std::numbers::ln2);
}

double SigmaExpansion::p2(double z) const {
    const double l2 = std::numbers::ln2;
    return 0.375 * z * z - (0.75 * l2 + 0.5) * z + 0.5 * l2 + 0.375 * l2 * l2 +
           (2.0 / 3.0) * std::numbers::pi * std::numbers::pi;
}

double SigmaExpansion::eval(double t, int order) const {
    require(t >= 16.0, "sigma_asymptotic: t must be >= 16");
    require(order >= 0 && order <= 2, "sigma_asymptotic: order must be 0..2");
    const double lt = std::log(t);
    const double z = std::log(lt);
    double corr = 1.0;
    if (order >= 1) corr += p1(z) / lt;
    if (order >= 2) corr += p2(z) / (lt * lt);
    return std::sqrt(2.0 / (t * lt)) * corr;
}

double sigma_asymptotic(double t, int order) {
    return SigmaExpansion{}.eval(t, order);
}

namespace {

// Multiplies (p+1) into psi[] for every multiple of each listed prime inside
// [lo, hi) and leaves prime cofactors > sqrt(hi) in rem[] for a final pass.
void psi_window(const std::vector<uint32_t>& primes, uint64_t lo, uint64_t hi,
                std::vector<double>& psi, std::vector<uint32_t>& rem) {
    const uint64_t len = hi - lo;
    for (uint64_t j = 0; j < len; ++j) {
        psi[j] = 1.0;
        rem[j] = uint32_t(lo + j);
    }
    for (uint32_t p : primes) {
        const uint64_t pp = p;
        if (pp * pp >= hi) break;
        uint64_t start = ((lo + pp - 1) / pp) * pp;
        if (start < 2 * pp) start = 2 * pp;
        for (uint64_t m = start; m < hi; m += pp) {
            const uint64_t j = m - lo;
            psi[j] *= pp + 1;
            uint32_t r = rem[j];
            do r /= p; while (r % p == 0);
            rem[j] = r;
        }
    }
    for (uint64_t j = 0; j < len; ++j)
        if (rem[j] > 1) psi[j] *= double(rem[j]) + 1.0;
}

}  // namespace

PsiPartialSums psi_partial_sums(uint64_t limit, const FactorTables* tables) {
    require(limit >= 1, "psi_partial_sums: limit must be >= 1");
    if (limit > (uint64_t(1) << 31))
        throw resource_error("psi_partial_sums: limit exceeds 2^31");

    PsiPartialSums out;
    out.limit = limit;
    CompensatedSum s0, s1, s2;
    s0.add(1.0);  // n = 1, psi(1) = 1
    s1.add(1.0);
    s2.add(1.0);

    if (tables && tables->limit >= limit) {
        for (uint64_t n = 2; n <= limit; ++n) {
            uint64_t m = n;
            double psi = 1.0;
            while (m > 1) {
                const uint32_t p = tables->lpf[m];
                psi *= double(p) + 1.0;
                do m /= p; while (m % p == 0);
            }
            const double nd = double(n);
            s0.add(1.0 / psi);
            s1.add(1.0 / (nd * psi));
            s2.add(1.0 / (nd * nd * psi));
        }
    } else {
        std::vector<uint32_t> primes;
        {
            const uint32_t r = uint32_t(std::sqrt(double(limit))) + 2;
            std::vector<bool> composite(size_t(r) + 1, false);
            for (uint32_t i = 2; i <= r; ++i) {
                if (composite[i]) continue;
                primes.push_back(i);
                for (uint64_t j = uint64_t(i) * i; j <= r; j += i)
                    composite[j] = true;
            }
        }
        const uint64_t window = uint64_t(1) << 20;
        std::vector<double> psi(size_t(std::min(window, limit)));
        std::vector<uint32_t> rem(psi.size());
        for (uint64_t lo = 2; lo <= limit; lo += window) {
            const uint64_t hi = std::min(lo + window, limit + 1);
            psi_window(primes, lo, hi, psi, rem);
            for (uint64_t j = 0; j < hi - lo; ++j) {
                const double nd = double(lo + j);
                s0.add(1.0 / psi[j]);
                s1.add(1.0 / (nd * psi[j]));
                s2.add(1.0 / (nd * nd * psi[j]));
            }
        }
    }
    out.inv_psi = s0.value();
    out.inv_npsi = s1.value();
    out.inv_n2psi = s2.value();
    return out;
}

KernelF kernel_f(const SaddleContext& ctx, double t, const FactorTables* tables) {
    require(t > 0.0, "kernel_f: t must be > 0");
    const double et = std::exp(t);
    const bool capped = !(et < ctx.direct_sum_cap);
    const uint64_t Y = capped ? uint64_t(ctx.direct_sum_cap) : uint64_t(et);
    const PsiPartialSums s = psi_partial_sums(Y, tables);

    double tail1 = kZeta2 - s.inv_npsi;  // sum over n > Y of 1/(n psi(n))
    if (tail1 < 0.0) tail1 = 0.0;

    KernelF out;
    out.terms = Y;
    if (!capped) {
        // min(n, e^t) splits exactly at Y = floor(e^t)
        out.value = kSixOverPi2 * (s.inv_psi + et * tail1);
        return out;
    }
    // Beyond the cap: Y * tail1 approaches the mean of n/psi(n), which is
    // both the slope of sum 1/psi per unit log n and the limit of
    // e^t * (tail above e^t), so one constant continues both pieces.
    const double A = double(Y) * tail1;
    out.value = kSixOverPi2 * (s.inv_psi + A * (t - std::log(double(Y))) + A);
    out.reduced_accuracy = true;
    return out;
}

KernelF kernel_f_saturating(const SaddleContext& ctx, double t,
                            const FactorTables* tables) {
    require(t > 0.0, "kernel_f_saturating: t must be > 0");
    const double et = std::exp(t);
    const bool capped = !(et < ctx.direct_sum_cap);
    const uint64_t Y = capped ? uint64_t(ctx.direct_sum_cap) : uint64_t(et);
    const PsiPartialSums s = psi_partial_sums(Y, tables);

    KernelF out;
    out.terms = Y;
    if (!capped) {
        double tail2 = ctx.inv_n2psi_total - s.inv_n2psi;
        if (tail2 < 0.0) tail2 = 0.0;
        out.value = kSixOverPi2 * (s.inv_npsi + et * tail2);
        return out;
    }
    // 1 - Fhat(t) ~ A e^{-t} with the same constant A as in kernel_f; the
    // capped branch keeps only that first-order deficit.
    double tail1 = kZeta2 - s.inv_npsi;
    if (tail1 < 0.0) tail1 = 0.0;
    const double A = double(Y) * tail1;
    out.value = kSixOverPi2 * (kZeta2 - A / et);
    out.reduced_accuracy = true;
    return out;
}

FIncrement f_increment_check(const SaddleContext& ctx, double w, double h) {
    require(w >= 4.0, "f_increment_check: w must be >= 4");
    require(h > 0.0 && h * h <= w * std::log(w),
            "f_increment_check: h must lie in (0, sqrt(w log w)]");
    FIncrement r;
    r.f_w = kernel_f(ctx, w).value;
    r.increment = r.f_w - kernel_f(ctx, w - h).value;
    r.sigma_w = sigma_solve(ctx, w);
    r.ratio = r.increment / (h * r.sigma_w * r.f_w);
    return r;
}

}  // namespace friable
