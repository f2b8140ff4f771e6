#pragma once

#include <cstdint>
#include <vector>

namespace friable {

// Tabulated Dickman rho on a uniform grid, stored as log(rho) because rho
// underflows double range near v ~ 740 and loses all precision long before
// that if kept linear.  Nodes sit at v_i = i * grid_step with grid_step an
// exact power of two, so unit shifts (v -> v-1) land exactly on nodes.
struct RhoTable {
    double grid_step = 0.0;       // h = 1 / steps_per_unit
    int steps_per_unit = 0;       // power of two
    double max_v = 0.0;           // last node, integer by construction
    std::vector<double> log_values;  // log rho at v_i, i = 0 .. max_v/h

    bool covers(double v) const { return v <= max_v + 1e-12; }
};

// Builds the table by integrating the delay equation  v rho'(v) = -rho(v-1)
// in its integral form  v rho(v) = int_{v-1}^{v} rho(t) dt.  Each new node is
// solved implicitly from the Euler-Maclaurin corrected trapezoid over the full
// unit window behind it; the window is split at the one interior integer node
// where rho has a derivative kink, and the one-sided derivative corrections
// are themselves exact values pulled from the recurrence.  steps_per_unit must
// be a power of two >= 16 so halved tables share nodes.  max_v is rounded up
// to the next integer; values above ~2000 are rejected (log rho < -1e4 there,
// far past any use).
RhoTable build_rho_table(double max_v, int steps_per_unit = 256);

// rho(v); exact 1 for v <= 1, cubic interpolation of log rho inside one unit
// interval otherwise (stencils never straddle a kink).  v < 0 or v beyond the
// table is a domain error.
double rho(const RhoTable& t, double v);

// log rho(v), same domain rules; the primitive the table actually stores.
double log_rho(const RhoTable& t, double v);

// rho'(v) = -rho(v-1)/v for v > 1, 0 for v < 1; at v == 1 returns the
// right-hand value -1 (the left-hand derivative is 0; callers that care about
// the jump must ask on either side themselves).
double rho_prime(const RhoTable& t, double v);

// r(v) = rho(v-1) / (v rho(v)) = -rho'(v)/rho(v), the logarithmic decay rate.
// 0 for v <= 1.  Computed from log differences so it stays finite at large v.
double dickman_r(const RhoTable& t, double v);

// int_0^b rho(t) dt via the same Euler-Maclaurin trapezoid used during
// construction, piece by unit piece.  b defaults to the whole table; must be
// a grid node (non-nodes are snapped to the nearest node).
double rho_integral(const RhoTable& t, double b);
double rho_integral(const RhoTable& t);

// xi(v): the nonzero root of e^xi = 1 + v*xi (xi(1) = 0, negative for
// 0 < v < 1).  Safeguarded Newton inside a sign-bracketing interval;
// residual bound |e^xi - 1 - v xi| <= 1e-12 (1 + v|xi|).
double xi(double v);

// xi'(v) = xi(v) / (1 + v xi(v) - v), with a series fallback
// xi' ~ 2 - (8/3)(v-1) near the removable 0/0 point at v = 1.
double xi_prime(double v);

// Real-axis zeta via the alternating (eta) series with Euler-transform
// acceleration; valid for s > 0, s != 1.
struct ZetaEvaluator {
    int direct_terms = 64;        // summed as-is
    int acceleration_terms = 64;  // fed to the difference table
};

double zeta_real(const ZetaEvaluator& z, double s);

// Z(s) = (s-1) zeta(s) / s, the pole-free multiplier appearing in saddle
// estimates; Z(1) = 1.  Near s = 1 a short Stieltjes expansion replaces the
// 0 * infinity product.
double big_z(const ZetaEvaluator& z, double s);

}  // namespace friable
