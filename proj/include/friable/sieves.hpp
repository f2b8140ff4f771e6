#pragma once

#include <cstdint>
#include <vector>

namespace friable {

// Per-integer largest-prime-factor and radical (squarefree kernel) arrays up
// to `limit`.  These back every exact count; 4-byte entries keep 1e8 at
// ~800 MB for the pair, which is the hard cap.
struct FactorTables {
    uint64_t limit = 0;
    std::vector<uint32_t> lpf;      // lpf[n] = largest prime dividing n; lpf[1] = 1
    std::vector<uint32_t> radical;  // radical[n] = product of distinct primes; radical[1] = 1
};

// Windowed sieve build: small primes (<= sqrt(limit)) stamp lpf/radical and
// strip their powers from a residual cofactor; whatever cofactor is left > 1
// is the single prime factor above sqrt(limit).  threads <= 0 means one
// worker per hardware thread; table contents are identical for any count.
FactorTables build_tables(uint64_t limit, int threads = 0);

// Count of n <= x with P+(n) <= y.  Thresholds are floored with a tiny
// inclusion guard since P+ is an integer.
uint64_t psi_exact(const FactorTables& t, double x, double y);

// Count of n <= x with P+(n) <= n^(1/u); n = 1 always counted.  Integer u up
// to 64 takes an exact integer power path; otherwise the comparison
// u log P+(n) <= log n gets a relative guard in favour of inclusion.
uint64_t d_exact(const FactorTables& t, double x, double u);

// Count of n <= x with radical(n) <= y.
uint64_t n_exact(const FactorTables& t, double x, double y);

// Count of n <= x with radical(n) <= n^theta (log n)^alpha; n = 1 always
// counted (its threshold is degenerate), matching d_exact's convention.
uint64_t s_exact(const FactorTables& t, double x, double theta, double alpha);

enum class SumNumerator { log_n, log_x };

// sum over 1 < n <= x of (log n or log x) / log P+(n), compensated.
double dickman_sum_exact(const FactorTables& t, double x, SumNumerator which);

// The count-with-sliding-exponent function u -> (count of n <= x with
// P+(n) <= n^(1/u)) is a step function whose breakpoints are
// log n / log P+(n); integrating it equals the log_n sum above term by term.
// Returns |direct sum - breakpoint-sorted integral|, which is pure
// accumulated rounding (~1e-9 even at 1e7).
double integral_identity_check(const FactorTables& t, double x);

// One query against any of the four counters; used by the CLI and the
// random-query test drivers.
struct CountQuery {
    enum class Kind { psi, d, n, s };
    Kind kind = Kind::psi;
    double x = 0;
    double y = 0;      // psi, n
    double u = 0;      // d
    double theta = 0;  // s
    double alpha = 0;  // s
};

uint64_t run_count(const FactorTables& t, const CountQuery& q);

}  // namespace friable
