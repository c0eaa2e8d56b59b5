// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include "morse/ladder.hpp"
#include "morse/thermal.hpp"

using namespace morse;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %02d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++g_failures;
}

void info(const std::string& detail) { std::printf("       info: %s\n", detail.c_str()); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        xs[static_cast<std::size_t>(i)] =
            std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
    return xs;
}

double dyadic(std::mt19937& rng, double scale) {
    return scale * (static_cast<double>(rng() % 65536) / 65536.0);
}

// 01: resolution of identity -- quadrature moments of the radial measure
// match n!(l-n)!/l! for every l in 1..12 and every n <= l.
void criterion_01() {
    double worst = 0.0;
    for (int l = 1; l <= 12; ++l)
        worst = std::max(worst, identity_resolution_check(make_space(l), 200).max_residual);
    report(1, "resolution-of-identity", worst < 1e-10,
           "max relative moment residual " + fmt(worst) + " (tol 1e-10, order 200, l <= 12)");
}

// 02: normalization and reproducing kernel for 100 random labels each.
void criterion_02() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto rand_label = [&]() {
        const double mag = std::exp(std::log(1e-3) + u(rng) * (std::log(1e4) - std::log(1e-3)));
        return std::polar(mag, 2.0 * M_PI * u(rng));
    };

    double worst_norm = 0.0;
    for (int it = 0; it < 100; ++it) {
        const int l = 1 + static_cast<int>(u(rng) * 99);
        const cplx z = rand_label();
        // Raw log-space norm, the construction guarantee itself.
        const double mag = std::abs(z);
        double raw = 0.0;
        for (int n = 0; n <= l; ++n)
            raw += std::exp(log_binomial(l, n) + 2.0 * n * std::log(mag) - l * std::log1p(mag * mag));
        worst_norm = std::max(worst_norm, std::abs(std::sqrt(raw) - 1.0));

        const CoherentState s = closed_form_state(make_space(l), z, u(rng));
        double norm2 = 0.0;
        for (const auto& c : s.coeffs) norm2 += std::norm(c);
        worst_norm = std::max(worst_norm, std::abs(std::sqrt(norm2) - 1.0));
    }

    double worst_kernel = 0.0;
    for (int it = 0; it < 100; ++it) {
        const int l = 1 + static_cast<int>(u(rng) * 99);
        const MorseSpace space = make_space(l);
        const double alpha = 3.0 * u(rng);
        const cplx z1 = rand_label(), z2 = rand_label();
        const cplx direct =
            overlap(closed_form_state(space, z1, alpha), closed_form_state(space, z2, alpha));
        worst_kernel = std::max(worst_kernel, std::abs(direct - overlap_kernel(space, z1, z2)));
    }

    const bool pass = worst_norm < 1e-12 && worst_kernel < 1e-12;
    report(2, "normalization-and-kernel", pass,
           "norm residual " + fmt(worst_norm) + ", kernel residual " + fmt(worst_kernel) +
               " (tol 1e-12, 100 random cases each, l <= 100, |Z| <= 1e4)");
}

// 03: sub-Poissonian statistics -- g2 = (l-1)/l with vanishing spread,
// Q = -x/(1+x), and Q always in (-1, 0).
void criterion_03() {
    double worst_spread = 0.0, worst_g2 = 0.0, worst_q = 0.0;
    bool q_in_range = true;
    for (int l = 1; l <= 30; ++l) {
        const MorseSpace space = make_space(l);
        double lo = 2.0, hi = -1.0;
        for (double x : log_grid(1e-2, 1e2, 50)) {
            const CoherentState s = closed_form_state(space, std::sqrt(x), 0.0);
            const double g = g2(s);
            lo = std::min(lo, g);
            hi = std::max(hi, g);
            const double q = mandel_q(s);
            worst_q = std::max(worst_q, std::abs(q + x / (1.0 + x)));
            if (!(q > -1.0 && q < 0.0)) q_in_range = false;
        }
        worst_spread = std::max(worst_spread, hi - lo);
        worst_g2 = std::max(worst_g2, std::abs(hi - static_cast<double>(l - 1) / l));
    }
    const bool pass = worst_spread < 1e-11 && worst_g2 < 1e-12 && worst_q < 1e-12 && q_in_range;
    report(3, "sub-poissonian-statistics", pass,
           "g2 spread " + fmt(worst_spread) + " (tol 1e-11), g2 offset " + fmt(worst_g2) +
               ", Q residual " + fmt(worst_q) + " (tol 1e-12), Q in (-1,0): " +
               (q_in_range ? "yes" : "NO"));
}

// 04: action identity on the grids plus the top-of-well limit.  The energy
// expectation at finite x sits 3l/(1+x) below l(l+2), so the limit is
// evaluated by extrapolation anchored at x = 1e6 (raw residual reported).
void criterion_04() {
    double worst_id = 0.0;
    for (int l = 1; l <= 30; ++l) {
        const MorseSpace space = make_space(l);
        for (double x : log_grid(1e-2, 1e2, 50)) {
            const ActionIdentity act = action_identity(closed_form_state(space, std::sqrt(x), 0.0));
            worst_id = std::max(worst_id,
                                std::abs(act.mean_energy - act.f_of_x) / std::max(1.0, act.f_of_x));
        }
    }

    double worst_limit = 0.0, worst_raw = 0.0;
    for (int l = 1; l <= 30; ++l) {
        const MorseSpace space = make_space(l);
        const double f1 = action_identity(closed_form_state(space, std::sqrt(1e6), 0.0)).mean_energy;
        const double f2 = action_identity(closed_form_state(space, std::sqrt(2e6), 0.0)).mean_energy;
        const double e1 = 1.0 / (1.0 + 1e6), e2 = 1.0 / (1.0 + 2e6);
        const double limit = (e1 * f2 - e2 * f1) / (e1 - e2);
        const double target = static_cast<double>(l) * (l + 2);
        worst_limit = std::max(worst_limit, std::abs(limit - target));
        worst_raw = std::max(worst_raw, std::abs(f1 - target));
    }
    const bool pass = worst_id < 1e-12 && worst_limit < 1e-8;
    report(4, "action-identity", pass,
           "identity residual " + fmt(worst_id) + " (tol 1e-12), extrapolated limit residual " +
               fmt(worst_limit) + " (tol 1e-8)");
    info("raw residual at x = 1e6 is " + fmt(worst_raw) + " ~ 3l/x by expansion");
}

// 05: temporal stability, coefficientwise to 1e-14 for 100 random cases
// (dyadic alpha, t so that alpha + t carries no input rounding).
void criterion_05() {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        const int l = 1 + static_cast<int>(u(rng) * 99);
        const MorseSpace space = make_space(l);
        const cplx z = std::polar(std::exp(std::log(1e-2) + u(rng) * std::log(1e4)), 2.0 * M_PI * u(rng));
        const double alpha = dyadic(rng, 2.0), t = dyadic(rng, 4.0);
        const CoherentState evolved = evolve(closed_form_state(space, z, alpha), t);
        const CoherentState direct = closed_form_state(space, z, alpha + t);
        for (std::size_t n = 0; n < evolved.coeffs.size(); ++n)
            worst = std::max(worst, std::abs(evolved.coeffs[n] - direct.coeffs[n]));
    }
    report(5, "temporal-stability", worst < 1e-14,
           "max coefficient residual " + fmt(worst) + " (tol 1e-14, 100 random cases)");
}

// 06: Husimi function -- exact-carrier equality of the direct sum and the
// heat-operator form, and unit trace under the measure.
void criterion_06() {
    double worst_dual = 0.0, worst_trace = 0.0;
    for (int l = 1; l <= 12; ++l) {
        const MorseSpace space = make_space(l);
        for (double A : {0.1, 0.5, 1.0, 2.0}) {
            const ThermalState thermal = make_thermal(space, A);
            for (double x : log_grid(1e-3, 1e3, 20)) {
                const DualValue q = husimi(thermal, x);
                worst_dual = std::max(worst_dual, std::abs(q.direct - q.operator_form));
            }
            worst_trace = std::max(worst_trace, husimi_trace_check(thermal, 200));
        }
    }
    const bool pass = worst_dual < 1e-13 && worst_trace < 1e-9;
    report(6, "husimi-dual-route-and-trace", pass,
           "dual-route residual " + fmt(worst_dual) + " (tol 1e-13), trace residual " +
               fmt(worst_trace) + " (tol 1e-9, l <= 12)");
}

// 07: P-function -- closed-form moments at B = 0, moment and trace
// conditions with the tied anharmonicity B = A/(2(l+1)), the closed inner
// integral at B = 0, and the series convergence flag (asserted inside the
// validated regime B/A <= 1/20; reported outside it, where the pointwise
// series is asymptotic by construction).
void criterion_07() {
    double worst_b0 = 0.0, worst_inner = 0.0;
    for (int l : {2, 5, 10}) {
        const MorseSpace space = make_space(l);
        for (double A : {0.5, 1.0, 2.0}) {
            const ThermalState flat = make_thermal(space, ThermalParams{A, 0.0, l});
            for (int n = 0; n <= l; ++n)
                worst_b0 = std::max(worst_b0, p_moment_check(flat, n, 200, 1e-10, 60));
            const PTraceReport rep = p_trace_check(flat, 200, 1e-10, 60);
            worst_inner = std::max(worst_inner,
                                   std::abs(rep.inner_quadrature - rep.inner_ratio_form));
        }
    }

    double worst_moment = 0.0, worst_trace = 0.0, worst_tail = 0.0;
    int pointwise_nonconverged = 0, pointwise_total = 0;
    for (int l : {2, 5, 10}) {
        const MorseSpace space = make_space(l);
        for (double A : {0.5, 1.0, 2.0}) {
            const ThermalState thermal = make_thermal(space, A);
            for (int n = 0; n <= l; ++n)
                worst_moment = std::max(worst_moment, p_moment_check(thermal, n, 200, 1e-10, 60));
            worst_trace = std::max(worst_trace, p_trace_check(thermal, 200, 1e-10, 60).residual);

            // Convergence of the series that carries the moment integrals:
            // the termwise integrals form the exponential series in B n^2,
            // whose tail past the integration order must meet the tolerance.
            const int k_t = p_integration_order(thermal, 1e-8, 60);
            const double y = thermal.params.B * static_cast<double>(l) * l;
            double tail = y;
            for (int k = 1; k <= k_t; ++k) tail *= y / (k + 1);
            worst_tail = std::max(worst_tail, tail);

            // Pointwise flags are reported: away from the asymptotic floor
            // they certify the tolerance, on it they honestly say no.
            for (double x : log_grid(1e-2, 1e2, 15)) {
                ++pointwise_total;
                if (!p_function(thermal, x, 1e-8, 60).converged) ++pointwise_nonconverged;
            }
        }
    }

    const bool pass = worst_b0 < 1e-9 && worst_inner < 1e-10 && worst_moment < 1e-6 &&
                      worst_trace < 1e-6 && worst_tail < 1e-8;
    report(7, "p-function", pass,
           "B=0 moments " + fmt(worst_b0) + " (tol 1e-9), inner-vs-ratio " + fmt(worst_inner) +
               " (tol 1e-10), tied-B moments " + fmt(worst_moment) + ", trace " + fmt(worst_trace) +
               " (tol 1e-6), integration-series tail " + fmt(worst_tail) + " (tol 1e-8)");
    info("pointwise series flags at tol 1e-8: " + std::to_string(pointwise_nonconverged) + "/" +
         std::to_string(pointwise_total) +
         " grid points on the asymptotic floor report non-converged (values kept at the smallest "
         "term; the moment integrals above are immune, their termwise series is convergent)");
}

// 08: thermal moments and statistics -- dual routes and the uniform limit.
// g2(A) has an O(A) slope at A = 0, so the A -> 0 limit is evaluated by
// extrapolation anchored at A = 1e-6 (raw residual reported).
void criterion_08() {
    double worst_moment = 0.0, worst_routes = 0.0;
    for (int l : {2, 5, 10}) {
        const MorseSpace space = make_space(l);
        for (double A : {0.5, 1.0, 2.0}) {
            const ThermalState thermal = make_thermal(space, A);
            const ExpSum z = partition_exp_sum(thermal.params);
            const double z0 = z.eval(A);
            ExpSum d = z;
            for (int s = 0; s <= 4; ++s) {
                const double direct = thermal_moment(thermal, s);
                const double sign = (s % 2 == 0) ? 1.0 : -1.0;
                const double deriv = sign * d.eval(A) / z0;
                worst_moment = std::max(worst_moment,
                                        std::abs(direct - deriv) / std::max(1.0, std::abs(direct)));
                d = d.derivative();
            }

            // Log-derivative forms vs moment forms.
            const ExpSum z1 = z.derivative();
            const ExpSum z2 = z1.derivative();
            const double dlnz = z1.eval(A) / z0;
            const double d2lnz = z2.eval(A) / z0 - dlnz * dlnz;
            const double g_log = 1.0 + 1.0 / dlnz + d2lnz / (dlnz * dlnz);
            const double q_log = -1.0 - d2lnz / dlnz;
            worst_routes = std::max(worst_routes, std::abs(thermal_g2(thermal) - g_log));
            worst_routes = std::max(worst_routes, std::abs(thermal_mandel(thermal) - q_log));
        }
    }

    double worst_limit = 0.0, worst_raw = 0.0;
    for (int l : {2, 5, 10, 20}) {
        const MorseSpace space = make_space(l);
        const double g1 = thermal_g2(make_thermal(space, 1e-6));
        const double g05 = thermal_g2(make_thermal(space, 5e-7));
        const double limit = 2.0 * g05 - g1;
        const double target = (4.0 / 3.0) * (l - 1) / l;
        worst_limit = std::max(worst_limit, std::abs(limit - target));
        worst_raw = std::max(worst_raw, std::abs(g1 - target));
    }

    const bool pass = worst_moment < 1e-12 && worst_routes < 1e-11 && worst_limit < 1e-8;
    report(8, "thermal-moments-and-statistics", pass,
           "moment routes " + fmt(worst_moment) + " (tol 1e-12, s <= 4), g2/Q routes " +
               fmt(worst_routes) + " (tol 1e-11), extrapolated uniform limit " + fmt(worst_limit) +
               " (tol 1e-8)");
    info("raw g2 residual at A = 1e-6 is " + fmt(worst_raw) + " ~ O(A) by expansion");
}

// 09: thermodynamics -- fluctuation C_v vs dU/dT, entropy limit, F = U - TS.
void criterion_09() {
    double worst_cv = 0.0, worst_f = 0.0;
    for (int l : {2, 5, 10}) {
        for (double A : {0.5, 1.0, 2.0}) {
            const Thermodynamics td = thermodynamics(thermal_params(make_space(l), A), 1.0);
            const double temperature = 1.0 / A;
            const double h = temperature * 1e-5;
            auto u_at = [&](double temp) {
                return thermodynamics(thermal_params(make_space(l), 1.0 / temp), 1.0).internal_energy;
            };
            const double cv_fd = (u_at(temperature + h) - u_at(temperature - h)) / (2.0 * h);
            worst_cv = std::max(worst_cv, std::abs(td.heat_capacity - cv_fd) / td.heat_capacity);
            worst_f = std::max(worst_f,
                               std::abs(td.free_energy - (td.internal_energy - temperature * td.entropy)) /
                                   std::max(1.0, std::abs(td.free_energy)));
        }
    }

    double worst_s = 0.0;
    for (int l : {2, 5, 10, 30}) {
        const double s = entropy_kb(make_thermal(make_space(l), 1e-5));
        worst_s = std::max(worst_s, std::abs(s - std::log(l + 1.0)));
    }

    const bool pass = worst_cv < 1e-6 && worst_s < 1e-6 && worst_f < 1e-12;
    report(9, "thermodynamics", pass,
           "C_v fluctuation-vs-dU/dT " + fmt(worst_cv) + " (rel tol 1e-6), S(A->0) residual " +
               fmt(worst_s) + " (tol 1e-6), F = U - TS residual " + fmt(worst_f) + " (tol 1e-12)");
}

// 10: diagnostics recorded, not asserted -- the legacy recurrence, the
// legacy closed form's first-order equation, and the displacement-vs-
// closed-form fidelity including the l = 1 best-fit label finding.
void criterion_10() {
    bool all_finite = true;
    double worst_rec = 0.0, worst_ode = 0.0;
    for (int l = 1; l <= 4; ++l) {
        for (int n = 0; n + 1 <= l; ++n)
            for (int j = 1; j <= 3; ++j) {
                const double r = delta_recurrence_residual(l, n, j);
                if (!std::isfinite(r)) all_finite = false;
                worst_rec = std::max(worst_rec, std::abs(r));
            }
        for (int n = 0; n <= l; ++n)
            for (double z : {0.3, 0.6, 1.0}) {
                const double r = j_ode_residual(l, n, z, 1e-5);
                if (!std::isfinite(r)) all_finite = false;
                worst_ode = std::max(worst_ode, std::abs(r));
            }
    }

    double fid_lo = 1.0;
    double worst_l1 = 0.0;
    for (int l = 1; l <= 4; ++l) {
        const MorseSpace space = make_space(l);
        for (double z : {0.2, 0.4}) {
            const DisplacementDiagnostics diag = displaced_state(space, z, 0.0);
            if (!std::isfinite(diag.best_fit_fidelity)) all_finite = false;
            fid_lo = std::min(fid_lo, diag.best_fit_fidelity);
            if (l == 1)
                worst_l1 = std::max(worst_l1,
                                    std::abs(diag.best_fit_abs_Z - std::tan(std::sqrt(3.0) * z)));
        }
    }

    const bool pass = all_finite && worst_l1 < 1e-6;
    report(10, "diagnostics-recorded", pass,
           std::string("all diagnostics finite: ") + (all_finite ? "yes" : "NO") +
               ", l=1 best-fit label matches tan(sqrt(3)|z|) to " + fmt(worst_l1));
    info("recurrence residual up to " + fmt(worst_rec) + ", closed-form equation residual up to " +
         fmt(worst_ode) + ", displacement best-fit fidelity down to " + fmt(fid_lo) +
         " (informational by policy: the legacy forms are mutually inconsistent)");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_01();
    criterion_02();
    criterion_03();
    criterion_04();
    criterion_05();
    criterion_06();
    criterion_07();
    criterion_08();
    criterion_09();
    criterion_10();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 10 criteria passed in %.2f s\n", 10 - g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
