#pragma once

#include <cstdint>
#include <vector>

#include "friable/sieves.hpp"

namespace friable {

// Primes plus tail-integral configuration for the kernel-side prime sums
// g(sigma), g'(sigma) and the distribution function F.  Beyond prime_limit
// the sums continue as integrals against the prime density 1/log x.
struct SaddleContext {
    uint64_t prime_limit = 0;
    std::vector<uint32_t> primes;
    std::vector<double> log_primes;
    int tail_quadrature_points = 15;  // Gauss-Legendre nodes per panel
    double target_rel_error_gprime = 1e-8;  // sigma_solve residual, rel to t
    double target_rel_error_f = 1e-6;       // met exactly below direct_sum_cap
    // Largest floor(e^t) summed term by term in F; past it the tail is
    // extrapolated and results carry reduced_accuracy.  Tests shrink this to
    // exercise the extrapolated branch cheaply.
    double direct_sum_cap = 2147483647.0;
    // sum over all n of 1/(n^2 psi(n)) via its Euler product over ctx primes;
    // the cutoff error is ~ sum_{p>limit} p^-3, far below double precision.
    double inv_n2psi_total = 0.0;
};

SaddleContext build_saddle_context(uint64_t prime_limit = 10'000'000);

// Same context from an existing prime list (must be exactly the primes up to
// prime_limit, ascending); skips the sieve when a cache is on hand.
SaddleContext build_saddle_context(uint64_t prime_limit,
                                   std::vector<uint32_t> primes);

// psi(n) = product of (p+1) over distinct primes p | n; psi(1) = 1.
uint64_t psi_mult(uint64_t n);

// g(sigma) = sum over p of log(1 + a_p), a_p = (1 - p^(sigma-1))/(p(p^sigma - 1)).
// Only used for sanity checks (g(1) = 0 and the Euler-product identity
// e^g = (6/pi^2) sum n^-sigma / psi(n)); the solver consumes g' alone.
double g_value(const SaddleContext& ctx, double sigma);

// d/dsigma of g.  The per-prime derivative collapses algebraically to
//   -log p * p^sigma / ((p^sigma - 1) ((p+1) p^sigma - p)),
// which at sigma=1 reduces to -log p/(p(p-1)) (sum ~ -0.7554).  Tail primes
// enter through the density integral; see the implementation notes.
double g_prime(const SaddleContext& ctx, double sigma);

// The root sigma in (0,1) of g'(sigma) + t = 0, |residual| <= 1e-8 t.
double sigma_solve(const SaddleContext& ctx, double t);

// The large-t expansion sqrt(2/(t log t)) {1 + P1(z)/log t + P2(z)/(log t)^2},
// z = log log t, truncated at `order` in {0,1,2}.
struct SigmaExpansion {
    double p1(double z) const;
    double p2(double z) const;
    double eval(double t, int order) const;
};

double sigma_asymptotic(double t, int order = 2);

// One streaming pass over n <= limit accumulating sum 1/psi(n),
// sum 1/(n psi(n)) and sum 1/(n^2 psi(n)).  Uses the factor tables when they
// cover the range, else a windowed psi sieve.
struct PsiPartialSums {
    uint64_t limit = 0;
    double inv_psi = 0.0;
    double inv_npsi = 0.0;
    double inv_n2psi = 0.0;
};

PsiPartialSums psi_partial_sums(uint64_t limit, const FactorTables* tables = nullptr);

struct KernelF {
    double value = 0.0;
    bool reduced_accuracy = false;  // e^t exceeded the summation cap
    uint64_t terms = 0;             // directly summed terms
};

// The kernel distribution function in the normalization that matches counts:
//   F(t) = (6/pi^2) sum_n min(n, e^t) / (n psi(n)),
// so that N(x,y) ~ y F(log(x/y)).  F grows without bound (roughly linearly
// in t).  The tail over n > e^t is exact via sum_n 1/(n psi(n)) = zeta(2).
KernelF kernel_f(const SaddleContext& ctx, double t, const FactorTables* tables = nullptr);

// The literal distribution function
//   Fhat(t) = (6/pi^2) sum_n min(1, e^t/n) / (n psi(n)),
// increasing from 0 to 1; its tail over n > e^t is exact via the
// sum 1/(n^2 psi(n)) Euler product.  Used by the distribution-shape checks.
KernelF kernel_f_saturating(const SaddleContext& ctx, double t,
                            const FactorTables* tables = nullptr);

// Measures the semi-asymptotic increment relation
// F(w) - F(w-h) ~ h sigma_w F(w): returns the two sides' ratio.
struct FIncrement {
    double ratio = 0.0;      // (F(w) - F(w-h)) / (h sigma_w F(w))
    double increment = 0.0;  // F(w) - F(w-h)
    double sigma_w = 0.0;
    double f_w = 0.0;
};

FIncrement f_increment_check(const SaddleContext& ctx, double w, double h);

}  // namespace friable
