#include "friable/sieves.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "friable/util.hpp"

namespace friable {

namespace {

constexpr uint64_t kHardCap = 100'000'000;  // ~800 MB for the table pair
constexpr uint64_t kWindow = uint64_t(1) << 22;

std::vector<uint32_t> small_primes_upto(uint32_t n) {
    std::vector<bool> composite(size_t(n) + 1, false);
    std::vector<uint32_t> ps;
    for (uint32_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        ps.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= n; j += i) composite[j] = true;
    }
    return ps;
}

// Fills lpf/radical on [lo, hi).  Small primes stamp their multiples and are
// stripped from a residual cofactor; any cofactor still > 1 afterwards is a
// single prime above sqrt(hi) (two of those would multiply past the window).
void sieve_window(FactorTables& t, const std::vector<uint32_t>& primes,
                  uint64_t lo, uint64_t hi, std::vector<uint32_t>& rem) {
    const uint64_t len = hi - lo;
    for (uint64_t j = 0; j < len; ++j) {
        rem[j] = uint32_t(lo + j);
        t.lpf[lo + j] = 1;
        t.radical[lo + j] = 1;
    }
    for (uint32_t p : primes) {
        const uint64_t pp = p;
        if (pp * pp >= hi) break;
        uint64_t start = ((lo + pp - 1) / pp) * pp;
        if (start < 2 * pp) start = 2 * pp;
        for (uint64_t m = start; m < hi; m += pp) {
            const uint64_t j = m - lo;
            t.lpf[m] = p;  // ascending stamps leave the largest small prime
            t.radical[m] *= p;
            uint32_t r = rem[j];
            do r /= p; while (r % p == 0);
            rem[j] = r;
        }
    }
    for (uint64_t j = 0; j < len; ++j) {
        const uint32_t r = rem[j];
        if (r > 1) {
            t.lpf[lo + j] = r;
            t.radical[lo + j] *= r;
        }
    }
}

}  // namespace

FactorTables build_tables(uint64_t limit, int threads) {
    require(limit >= 2, "build_tables: limit must be >= 2");
    if (limit > kHardCap)
        throw resource_error("build_tables: limit exceeds the 1e8 cap");

    FactorTables t;
    t.limit = limit;
    t.lpf.assign(limit + 1, 0);
    t.radical.assign(limit + 1, 0);
    t.lpf[1] = 1;
    t.radical[1] = 1;

    const auto primes =
        small_primes_upto(uint32_t(std::sqrt(double(limit))) + 2);

    int nthreads = threads;
    if (nthreads <= 0) nthreads = int(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    const uint64_t nwindows = (limit - 1 + kWindow) / kWindow;
    if (uint64_t(nthreads) > nwindows) nthreads = int(nwindows);

    if (nthreads == 1) {
        std::vector<uint32_t> rem(size_t(std::min(kWindow, limit - 1)));
        for (uint64_t lo = 2; lo <= limit; lo += kWindow)
            sieve_window(t, primes, lo, std::min(lo + kWindow, limit + 1), rem);
        return t;
    }

    // Windows write disjoint index ranges, so workers share nothing but the
    // read-only prime list; the result is identical for any thread count.
    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        std::vector<uint32_t> rem(size_t(std::min(kWindow, limit - 1)));
        for (;;) {
            const uint64_t w = next.fetch_add(1);
            if (w >= nwindows) return;
            const uint64_t lo = 2 + w * kWindow;
            sieve_window(t, primes, lo, std::min(lo + kWindow, limit + 1), rem);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return t;
}

namespace {

// Real thresholds come in through logs and powers, so, e.g., y = 999.9999999998
// almost always means 1000.  All boundary comparisons lean toward inclusion
// by a 1e-12 relative guard; genuine spacings between distinct log values at
// n <= 1e8 are > 5e-9, far outside the guard.
uint64_t floor_guarded(double y) {
    if (y < 0.0) return 0;
    return uint64_t(y * (1.0 + 1e-12) + 1e-12);
}

bool le_guarded(double c, double T) {
    return c <= T + 1e-12 * (1.0 + std::abs(T));
}

uint64_t checked_x(const FactorTables& t, double x) {
    require(x >= 1.0, "count: x must be >= 1");
    const uint64_t X = floor_guarded(x);
    require(X >= 1 && X <= t.limit, "count: x exceeds the table limit");
    return X;
}

}  // namespace

uint64_t psi_exact(const FactorTables& t, double x, double y) {
    const uint64_t X = checked_x(t, x);
    require(y >= 1.0, "psi_exact: y must be >= 1");
    const uint64_t Y = floor_guarded(y);
    uint64_t count = 0;
    for (uint64_t n = 1; n <= X; ++n) count += (t.lpf[n] <= Y);
    return count;
}

uint64_t n_exact(const FactorTables& t, double x, double y) {
    const uint64_t X = checked_x(t, x);
    require(y >= 1.0, "n_exact: y must be >= 1");
    const uint64_t Y = floor_guarded(y);
    uint64_t count = 0;
    for (uint64_t n = 1; n <= X; ++n) count += (t.radical[n] <= Y);
    return count;
}

uint64_t d_exact(const FactorTables& t, double x, double u) {
    const uint64_t X = checked_x(t, x);
    require(u >= 0.0, "d_exact: u must be >= 0");
    if (u <= 1.0) return X;  // P+(n) <= n always
    const double ur = std::round(u);
    uint64_t count = 1;  // n = 1
    if (std::abs(u - ur) < 1e-12 && ur <= 64.0) {
        // integer exponent: decide P+(n)^u <= n in exact integer arithmetic
        const int e = int(ur);
        for (uint64_t n = 2; n <= X; ++n) {
            const uint64_t p = t.lpf[n];
            uint64_t acc = 1;
            bool le = true;
            for (int i = 0; i < e; ++i) {
                if (acc > n / p) { le = false; break; }
                acc *= p;
            }
            count += (le && acc <= n);
        }
        return count;
    }
    for (uint64_t n = 2; n <= X; ++n)
        count += le_guarded(u * std::log(double(t.lpf[n])), std::log(double(n)));
    return count;
}

uint64_t s_exact(const FactorTables& t, double x, double theta, double alpha) {
    const uint64_t X = checked_x(t, x);
    require(theta > 0.0 && theta <= 1.0, "s_exact: theta must lie in (0, 1]");
    uint64_t count = 1;  // n = 1 by convention (its threshold is degenerate)
    for (uint64_t n = 2; n <= X; ++n) {
        const double ln = std::log(double(n));
        const double T = theta * ln + alpha * std::log(ln);
        count += le_guarded(std::log(double(t.radical[n])), T);
    }
    return count;
}

double dickman_sum_exact(const FactorTables& t, double x, SumNumerator which) {
    const uint64_t X = checked_x(t, x);
    require(X >= 2, "dickman_sum_exact: x must be >= 2");
    const double lx = std::log(x);
    CompensatedSum s;
    for (uint64_t n = 2; n <= X; ++n) {
        const double num =
            (which == SumNumerator::log_n) ? std::log(double(n)) : lx;
        s.add(num / std::log(double(t.lpf[n])));
    }
    return s.value();
}

double integral_identity_check(const FactorTables& t, double x) {
    const uint64_t X = checked_x(t, x);
    require(X >= 2, "integral_identity_check: x must be >= 2");
    std::vector<double> breaks;
    breaks.reserve(size_t(X - 1));
    CompensatedSum direct;
    for (uint64_t n = 2; n <= X; ++n) {
        const double un = std::log(double(n)) / std::log(double(t.lpf[n]));
        direct.add(un);
        breaks.push_back(un);
    }
    // The count-minus-one is j on [b_{j+1}, b_j) with breaks sorted
    // descending, so the integral is sum of j * (b_j - b_{j+1}).
    std::sort(breaks.begin(), breaks.end(), std::greater<double>());
    CompensatedSum integral;
    for (size_t j = 0; j < breaks.size(); ++j) {
        const double next = (j + 1 < breaks.size()) ? breaks[j + 1] : 0.0;
        integral.add(double(j + 1) * (breaks[j] - next));
    }
    return std::abs(direct.value() - integral.value());
}

uint64_t run_count(const FactorTables& t, const CountQuery& q) {
    switch (q.kind) {
        case CountQuery::Kind::psi: return psi_exact(t, q.x, q.y);
        case CountQuery::Kind::d: return d_exact(t, q.x, q.u);
        case CountQuery::Kind::n: return n_exact(t, q.x, q.y);
        case CountQuery::Kind::s: return s_exact(t, q.x, q.theta, q.alpha);
    }
    throw std::domain_error("run_count: unknown kind");
}

}  // namespace friable
