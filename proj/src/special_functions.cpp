#include "friable/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "friable/util.hpp"

namespace friable {

namespace {

// One-sided derivatives of rho at grid nodes, every value scaled by e^{-M}.
// They come straight out of the delay equation:
//   rho'(v)   = -rho(v-1)/v
//   rho''(v)  = (-rho'(v-1) + rho(v-1)/v) / v
//   rho'''(v) = (-rho''(v-1) + 2 rho'(v-1)/v - 2 rho(v-1)/v^2) / v
// with everything 0 below v = 1 and, from the left, at v = 1 itself.  The
// side flag (+1 right, -1 left) propagates through the v-1 shifts, which is
// what makes the values exact one-sided limits at the integer kinks.
struct DerivEval {
    const std::vector<double>& L;  // log rho at nodes (0 on [0,1])
    int N;                         // steps per unit
    double h;
    double M;                      // log scale subtracted from everything

    double val(int j) const { return std::exp((j <= N ? 0.0 : L[j]) - M); }

    double d1(int j, int side) const {
        if (j < N || (j == N && side < 0)) return 0.0;
        double v = j * h;
        return -val(j - N) / v;
    }
    double d2(int j, int side) const {
        if (j < N || (j == N && side < 0)) return 0.0;
        double v = j * h;
        return (-d1(j - N, side) + val(j - N) / v) / v;
    }
    double d3(int j, int side) const {
        if (j < N || (j == N && side < 0)) return 0.0;
        double v = j * h;
        return (-d2(j - N, side) + 2.0 * d1(j - N, side) / v -
                2.0 * val(j - N) / (v * v)) /
               v;
    }
};

// Euler-Maclaurin endpoint correction for the trapezoid rule over grid nodes
// [p, q], valid only while rho is smooth on the open interval.
double em_correction(const DerivEval& dv, int p, int q) {
    double h2 = dv.h * dv.h;
    return -(h2 / 12.0) * (dv.d1(q, -1) - dv.d1(p, +1)) +
           (h2 * h2 / 720.0) * (dv.d3(q, -1) - dv.d3(p, +1));
}

}  // namespace

RhoTable build_rho_table(double max_v, int steps_per_unit) {
    require(steps_per_unit >= 16 && steps_per_unit <= (1 << 16) &&
                (steps_per_unit & (steps_per_unit - 1)) == 0,
            "build_rho_table: steps_per_unit must be a power of two in [16, 65536]");
    require(max_v >= 2.0 && max_v <= 2000.0,
            "build_rho_table: max_v must lie in [2, 2000]");

    RhoTable t;
    t.steps_per_unit = steps_per_unit;
    t.grid_step = 1.0 / steps_per_unit;
    t.max_v = std::ceil(max_v - 1e-9);

    const int N = steps_per_unit;
    const double h = t.grid_step;
    const int total = static_cast<int>(t.max_v) * N;
    t.log_values.assign(total + 1, 0.0);  // log 1 on [0, 1], filled beyond

    for (int i = N + 1; i <= total; ++i) {
        // Window [v-1, v].  Everything is scaled by M = log rho(v-1), the
        // window maximum, so the exponentials stay in [e^{-xi-eps}, 1] and the
        // table can run to large v without underflow.
        const double M = t.log_values[i - N];
        DerivEval dv{t.log_values, N, h, M};

        CompensatedSum T;
        T.add(0.5 * dv.val(i - N));
        for (int j = i - N + 1; j < i; ++j) T.add(dv.val(j));
        double known = h * T.value();  // trapezoid minus the h/2 * rho(v) term

        double corr = 0.0;
        int c = (i / N) * N;  // integer node inside the window, if any
        if (c > i - N && c < i) {
            corr = em_correction(dv, i - N, c) + em_correction(dv, c, i);
        } else {
            corr = em_correction(dv, i - N, i);
        }

        // v rho(v) = known + (h/2) rho(v) + corr, solved for rho(v); the new
        // node enters its own endpoint corrections only through values at
        // v-1 and earlier, so the solve is a plain division.
        double vi = i * h;
        double scaled = (known + corr) / (vi - 0.5 * h);
        t.log_values[i] = M + std::log(scaled);
    }
    return t;
}

namespace {

double interp_log_rho(const RhoTable& t, double v) {
    const int N = t.steps_per_unit;
    const int total = static_cast<int>(t.log_values.size()) - 1;
    double u = v * t.steps_per_unit;
    int base = static_cast<int>(std::floor(u));
    if (base >= total) base = total - 1;

    // Keep the 4-node stencil inside the unit piece containing v; log rho is
    // analytic there, and stencils never straddle an integer kink.
    int piece = base / N;
    int lo = piece * N;
    int hi = std::min(total, lo + N);
    int s = base - 1;
    if (s < lo) s = lo;
    if (s + 3 > hi) s = hi - 3;

    double x = u - s;
    const double* f = &t.log_values[s];
    return f[0] * ((x - 1) * (x - 2) * (x - 3)) * (-1.0 / 6.0) +
           f[1] * (x * (x - 2) * (x - 3)) * (1.0 / 2.0) +
           f[2] * (x * (x - 1) * (x - 3)) * (-1.0 / 2.0) +
           f[3] * (x * (x - 1) * (x - 2)) * (1.0 / 6.0);
}

}  // namespace

double log_rho(const RhoTable& t, double v) {
    require(t.steps_per_unit > 0, "log_rho: table is empty");
    require(v >= 0.0, "log_rho: v must be nonnegative");
    require(t.covers(v), "log_rho: v beyond table range");
    if (v <= 1.0) return 0.0;
    return interp_log_rho(t, v);
}

double rho(const RhoTable& t, double v) { return std::exp(log_rho(t, v)); }

double rho_prime(const RhoTable& t, double v) {
    require(v >= 0.0, "rho_prime: v must be nonnegative");
    if (v < 1.0) return 0.0;
    require(t.covers(v), "rho_prime: v beyond table range");
    return -std::exp(log_rho(t, v - 1.0)) / v;
}

double dickman_r(const RhoTable& t, double v) {
    require(v > 0.0, "dickman_r: v must be positive");
    if (v <= 1.0) return 0.0;
    require(t.covers(v), "dickman_r: v beyond table range");
    return std::exp(log_rho(t, v - 1.0) - log_rho(t, v)) / v;
}

double rho_integral(const RhoTable& t, double b) {
    require(t.steps_per_unit > 0, "rho_integral: table is empty");
    require(b >= 0.0 && t.covers(b), "rho_integral: b outside [0, max_v]");
    const int N = t.steps_per_unit;
    const double h = t.grid_step;
    const int total = static_cast<int>(t.log_values.size()) - 1;
    long ib = static_cast<long>(std::floor(b / h));
    if (ib > total) ib = total;

    DerivEval dv{t.log_values, N, h, 0.0};
    CompensatedSum acc;
    for (long lo = 0; lo < ib; lo += N) {
        long hi = std::min<long>(lo + N, ib);
        CompensatedSum T;
        T.add(0.5 * dv.val(static_cast<int>(lo)));
        T.add(0.5 * dv.val(static_cast<int>(hi)));
        for (long j = lo + 1; j < hi; ++j) T.add(dv.val(static_cast<int>(j)));
        acc.add(h * T.value() +
                em_correction(dv, static_cast<int>(lo), static_cast<int>(hi)));
    }

    // Fractional strip [ib h, b].  It sits inside one grid cell, hence inside
    // one unit piece where rho is analytic, so 4-point Gauss is exact to well
    // below the table's own accuracy.
    const double rem = b - double(ib) * h;
    if (rem > 1e-13) {
        static const double gx[2] = {0.3399810435848563, 0.8611363115940526};
        static const double gw[2] = {0.6521451548625461, 0.3478548451374538};
        const double mid = double(ib) * h + 0.5 * rem;
        double strip = 0.0;
        for (int g = 0; g < 2; ++g) {
            const double off = 0.5 * rem * gx[g];
            strip += gw[g] * (rho(t, mid - off) + rho(t, mid + off));
        }
        acc.add(0.5 * rem * strip);
    }
    return acc.value();
}

double rho_integral(const RhoTable& t) { return rho_integral(t, t.max_v); }

double xi(double v) {
    require(v > 0.0, "xi: v must be positive");
    double d = v - 1.0;
    if (std::abs(d) <= 1e-9) return 2.0 * d - (4.0 / 3.0) * d * d;

    auto phi = [v](double x) { return std::expm1(x) - v * x; };

    // Bracket the root with phi of opposite signs at a and b.
    double a, b;
    if (v > 1.0) {
        a = std::log(v);  // phi(log v) = v - 1 - v log v < 0 for v > 1
        double guess = (v >= 3.0) ? std::log(v * std::log(v)) : 2.0 * d;
        b = std::max(guess, a + 0.5);
        double gap = b - a;
        int grow = 0;
        while (phi(b) <= 0.0) {
            gap *= 2.0;
            b = a + gap;
            if (++grow > 200) throw std::runtime_error("xi: bracket failed");
        }
    } else {
        a = -1.0 / v;  // phi(-1/v) = e^{-1/v} > 0
        b = -std::min(1e-8, 0.5 * (1.0 - v));  // phi < 0 just left of 0
    }

    double fa = phi(a);
    double x = std::clamp(2.0 * d, std::min(a, b) + 1e-300, std::max(a, b));
    double fx = phi(x);
    for (int it = 0; it < 200; ++it) {
        if (fx == 0.0) return x;
        if ((fa < 0.0) == (fx < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        double lo = std::min(a, b), hi = std::max(a, b);
        // Near v = 1 the root is almost double and phi at the root is tiny, so
        // a residual test would accept points ~1e-9 off.  Step stagnation is
        // the reliable exit: Newton is quadratic here, and the bracket keeps
        // the fallback safe.
        double step = fx / (std::exp(x) - v);  // Newton; e^x - v = phi'(x)
        double xn = x - step;
        if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= 2e-16 * (1.0 + std::abs(xn))) return xn;
        x = xn;
        fx = phi(x);
    }
    if (std::abs(fx) <= 1e-9 * (1.0 + std::abs(v * x))) return x;
    throw std::runtime_error("xi: did not converge");
}

double xi_prime(double v) {
    require(v > 0.0, "xi_prime: v must be positive");
    double d = v - 1.0;
    // xi'(v) = xi/(1 + v xi - v) is 0/0 at v = 1; series: xi' = 2 - (8/3) d + ...
    if (std::abs(d) < 1e-5) return 2.0 - (8.0 / 3.0) * d;
    double x = xi(v);
    return x / (1.0 + v * x - v);
}

double zeta_real(const ZetaEvaluator& z, double s) {
    require(s > 0.0, "zeta_real: s must be positive");
    require(s != 1.0, "zeta_real: pole at s = 1");

    // eta(s) = sum (-1)^{k+1} k^{-s}: first block summed directly, remainder
    // accelerated by the Euler transform (forward-difference table halved at
    // each level), which converges geometrically even for small s.
    const int n0 = z.direct_terms;
    const int m = z.acceleration_terms;
    CompensatedSum eta;
    double sign = 1.0;
    for (int k = 1; k <= n0; ++k, sign = -sign) eta.add(sign * std::pow(double(k), -s));

    std::vector<double> w(m);
    for (int j = 0; j < m; ++j) w[j] = std::pow(double(n0 + 1 + j), -s);
    double tail = 0.0, half = 0.5;
    for (int level = 0; level < m; ++level) {
        tail += w[0] * half;
        half *= 0.5;
        for (int j = 0; j + 1 + level < m; ++j) w[j] = w[j] - w[j + 1];
    }
    eta.add(((n0 % 2 == 0) ? 1.0 : -1.0) * tail);

    return eta.value() / (-std::expm1((1.0 - s) * std::log(2.0)));
}

double big_z(const ZetaEvaluator& z, double s) {
    require(s > 0.0, "big_z: s must be positive");
    double d = s - 1.0;
    if (std::abs(d) < 1e-6) {
        // (s-1) zeta(s) = 1 + gamma (s-1) - gamma_1 (s-1)^2 + O((s-1)^3)
        const double stieltjes_1 = -0.0728158454836767;
        return (1.0 + EULER_GAMMA * d - stieltjes_1 * d * d) / s;
    }
    return d * zeta_real(z, s) / s;
}

}  // namespace friable
