#include "morse/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace morse {

// ---------------------------------------------------------------------------
// ExpSum
// ---------------------------------------------------------------------------

double ExpSum::eval(double A) const {
    CompensatedSum sum;
    for (const Term& t : terms) sum.add(t.coef * std::exp(-t.rate * A));
    return sum.value();
}

ExpSum ExpSum::derivative() const {
    ExpSum out;
    out.terms.reserve(terms.size());
    for (const Term& t : terms) out.terms.push_back({-t.rate * t.coef, t.rate});
    return out;
}

ExpSum ExpSum::merged(double tol) const {
    ExpSum out;
    std::vector<Term> sorted = terms;
    std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.rate < b.rate; });
    for (const Term& t : sorted) {
        if (!out.terms.empty() && std::abs(out.terms.back().rate - t.rate) <=
                                      tol * std::max(1.0, std::abs(t.rate)))
            out.terms.back().coef += t.coef;
        else
            out.terms.push_back(t);
    }
    return out;
}

ExpSum heat_apply(const ExpSum& f, double B) {
    if (!(B >= 0.0)) throw std::invalid_argument("heat_apply: need B >= 0");
    ExpSum out;
    out.terms.reserve(f.terms.size());
    for (const ExpSum::Term& t : f.terms)
        out.terms.push_back({t.coef * std::exp(B * t.rate * t.rate), t.rate});
    return out;
}

// ---------------------------------------------------------------------------
// EulerTermSeries
// ---------------------------------------------------------------------------

EulerTermSeries EulerTermSeries::euler_derivative() const {
    // u d/du keeps p fixed and spreads each q into {q, q+1}; accumulate into
    // a dense q-range per p to keep the term count linear.
    EulerTermSeries out;
    out.x = x;
    std::map<std::pair<int, int>, double> acc;
    for (const Term& t : terms) {
        acc[{t.p, t.q}] += (t.p - t.q) * t.coef;
        acc[{t.p, t.q + 1}] += static_cast<double>(t.q) * t.coef;
    }
    out.terms.reserve(acc.size());
    for (const auto& [key, coef] : acc)
        if (coef != 0.0) out.terms.push_back({coef, key.first, key.second});
    return out;
}

double EulerTermSeries::eval_scaled(double A, int base_pow) const {
    const double log_base = base_pow * std::log1p(x);
    const double log_opux = std::log1p(std::exp(A) * x);
    CompensatedSum sum;
    for (const Term& t : terms) {
        const double mag = std::exp(t.p * A + log_base - t.q * log_opux);
        sum.add(t.coef * mag);
    }
    return sum.value();
}

// ---------------------------------------------------------------------------
// Canonical state
// ---------------------------------------------------------------------------

double partition_function(const ThermalParams& params) {
    CompensatedSum sum;
    for (int n = 0; n <= params.l; ++n)
        sum.add(std::exp(-static_cast<double>(n) * (params.A - params.B * n)));
    return sum.value();
}

ExpSum partition_exp_sum(const ThermalParams& params) {
    ExpSum harmonic;
    harmonic.terms.reserve(static_cast<std::size_t>(params.l) + 1);
    for (int n = 0; n <= params.l; ++n) harmonic.terms.push_back({1.0, static_cast<double>(n)});
    return heat_apply(harmonic, params.B);
}

ThermalState make_thermal(const MorseSpace& space, double beta_hbar_omega) {
    return make_thermal(space, thermal_params(space, beta_hbar_omega));
}

ThermalState make_thermal(const MorseSpace& space, const ThermalParams& params) {
    if (params.l != space.l) throw std::invalid_argument("make_thermal: parameter/space mismatch");
    if (!(params.A >= 0.0) || !(params.B >= 0.0))
        throw std::invalid_argument("make_thermal: need A >= 0 and B >= 0");
    ThermalState state;
    state.space = space;
    state.params = params;
    state.partition = partition_function(state.params);
    state.weights.resize(static_cast<std::size_t>(space.l) + 1);
    for (int n = 0; n <= space.l; ++n)
        state.weights[static_cast<std::size_t>(n)] =
            std::exp(-static_cast<double>(n) * (state.params.A - state.params.B * n)) / state.partition;
    return state;
}

// ---------------------------------------------------------------------------
// Husimi function
// ---------------------------------------------------------------------------

DualValue husimi(const ThermalState& thermal, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("husimi: need x >= 0");
    const int l = thermal.space.l;

    DualValue out;
    if (x == 0.0) {
        out.direct = thermal.weights[0];
        out.operator_form = 1.0 / thermal.partition;
    } else {
        const double log_x = std::log(x);
        const double log_opx = std::log1p(x);
        CompensatedSum direct;
        ExpSum bracket;
        bracket.terms.reserve(static_cast<std::size_t>(l) + 1);
        for (int n = 0; n <= l; ++n) {
            const double binom_part = std::exp(log_binomial(l, n) + n * log_x - l * log_opx);
            direct.add(thermal.weights[static_cast<std::size_t>(n)] * binom_part);
            bracket.terms.push_back({binom_part, static_cast<double>(n)});
        }
        out.direct = direct.value();
        out.operator_form = heat_apply(bracket, thermal.params.B).eval(thermal.params.A) / thermal.partition;
    }

    if (std::abs(out.direct - out.operator_form) > 1e-13 * std::max(1.0, std::abs(out.direct)))
        throw consistency_error("husimi: direct and heat-operator routes disagree at x = " +
                                std::to_string(x));
    return out;
}

double husimi_trace_check(const ThermalState& thermal, int quad_order) {
    const int l = thermal.space.l;
    const double trace = integrate_halfline(
        [&](double x) {
            const double opx = 1.0 + x;
            return (l + 1) / (opx * opx) * husimi(thermal, x).direct;
        },
        quad_order);
    return std::abs(trace - 1.0);
}

// ---------------------------------------------------------------------------
// P-function
// ---------------------------------------------------------------------------

namespace {

EulerTermSeries p_bracket(int l, double x) {
    EulerTermSeries bracket;
    bracket.x = x;
    bracket.terms.push_back({1.0, 1, l + 2});  // e^A ((1+x)/(1+e^A x))^{l+2}
    return bracket;
}

// Even derivatives (d/dA)^{2k} of the bracket e^A ((1+x)/(1+x e^A))^{l+2},
// computed through Taylor-coefficient recurrences around A.  The Euler term
// algebra above is the exact symbolic carrier, but evaluating its huge
// alternating coefficients in floating point cancels catastrophically once
// 2k reaches ~25 near x e^A = 1; the Taylor coefficients stay balanced
// (they mirror the function's own analytic decay f^(m)/m! ~ R^-m), so the
// quadrature-facing series terms come from here.  The two routes are
// cross-checked at low order in the tests and in `verify`.
class PDerivativeTable {
  public:
    PDerivativeTable(int l, double A, double x, int k_max) : derivs_(static_cast<std::size_t>(k_max) + 1) {
        const int order = 2 * k_max;
        const double ux = std::exp(A) * x;
        if (!std::isfinite(ux)) throw numeric_error("p-function: x e^A overflows");
        const double alpha = -(l + 2.0);
        const double log_pref = A + (l + 2.0) * (std::log1p(x) - std::log1p(ux));
        const double pref = std::exp(log_pref);

        // S(d) = 1 + ux e^d; normalized power series t = (S/S(0))^alpha via
        // the classical recurrence from t' S = alpha S' t.
        std::vector<double> s(static_cast<std::size_t>(order) + 1);
        std::vector<double> t(static_cast<std::size_t>(order) + 1);
        std::vector<double> e(static_cast<std::size_t>(order) + 1);
        const double s0 = 1.0 + ux;
        double inv_fact = 1.0;
        e[0] = 1.0;
        for (int j = 1; j <= order; ++j) {
            inv_fact /= j;
            e[static_cast<std::size_t>(j)] = inv_fact;
            s[static_cast<std::size_t>(j)] = ux * inv_fact;
        }
        t[0] = 1.0;
        for (int m = 1; m <= order; ++m) {
            double acc = 0.0;
            for (int j = 1; j <= m; ++j)
                acc += ((alpha + 1.0) * j - m) * s[static_cast<std::size_t>(j)] *
                       t[static_cast<std::size_t>(m - j)];
            t[static_cast<std::size_t>(m)] = acc / (m * s0);
        }

        // f(A+d) = pref * e^d * t(d); the 2k-th derivative is (2k)! times
        // the 2k-th Taylor coefficient of the product.
        double fact2k = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            const int m = 2 * k;
            CompensatedSum cm;
            for (int j = 0; j <= m; ++j)
                cm.add(e[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(m - j)]);
            if (k > 0) fact2k *= (2.0 * k - 1.0) * (2.0 * k);
            derivs_[static_cast<std::size_t>(k)] = pref * fact2k * cm.value();
        }
    }

    // (d/dA)^{2k} [bracket] at A.
    double operator()(int k) const { return derivs_[static_cast<std::size_t>(k)]; }

  private:
    std::vector<double> derivs_;
};

}  // namespace

PValue p_function(const ThermalState& thermal, double x, double tol, int k_max) {
    if (!(x >= 0.0)) throw std::invalid_argument("p_function: need x >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("p_function: need tol > 0");
    if (k_max < 0) throw std::invalid_argument("p_function: need k_max >= 0");

    const int l = thermal.space.l;
    const double A = thermal.params.A;
    const double B = thermal.params.B;

    PValue out;
    double term;
    CompensatedSum sum;
    if (B == 0.0) {
        sum.add(p_bracket(l, x).eval_scaled(A, l + 2));
        out.k_used = 0;
        out.value = sum.value();
        out.converged = true;
        return out;
    }

    const PDerivativeTable derivs(l, A, x, k_max);
    term = derivs(0);
    sum.add(term);
    out.k_used = 0;
    out.value = sum.value();

    // The series is asymptotic for B > 0: the terms may grow through an
    // early hump (convergent-exponential behavior), decay to a floor, and
    // eventually diverge.  If the tolerance is never met, the best
    // available value is the partial sum at the smallest term.
    double factor = 1.0;  // B^k / k!
    double min_mag = std::abs(term);
    double best_sum = sum.value();
    int best_k = 0;
    for (int k = 1; k <= k_max; ++k) {
        factor *= B / k;
        term = factor * derivs(k);
        if (!std::isfinite(term)) break;
        sum.add(term);

        const double mag = std::abs(term);
        if (mag <= min_mag) {
            min_mag = mag;
            best_sum = sum.value();
            best_k = k;
        }
        if (mag < tol * std::abs(sum.value())) {
            out.converged = true;
            out.k_used = k;
            out.value = sum.value();
            return out;
        }
    }
    out.converged = false;
    out.k_used = best_k;
    out.value = best_sum;
    return out;
}

double p_series_at_order(const ThermalState& thermal, double x, int k_terms) {
    if (!(x >= 0.0)) throw std::invalid_argument("p_series_at_order: need x >= 0");
    if (k_terms < 0) throw std::invalid_argument("p_series_at_order: need k_terms >= 0");

    const int l = thermal.space.l;
    const double A = thermal.params.A;
    const double B = thermal.params.B;

    CompensatedSum sum;
    if (B == 0.0) {
        sum.add(p_bracket(l, x).eval_scaled(A, l + 2));
        return sum.value();
    }

    const PDerivativeTable derivs(l, A, x, k_terms);
    sum.add(derivs(0));
    double factor = 1.0;
    for (int k = 1; k <= k_terms; ++k) {
        factor *= B / k;
        const double term = factor * derivs(k);
        if (!std::isfinite(term)) throw numeric_error("p_series_at_order: term overflow");
        sum.add(term);
    }
    return sum.value();
}

int p_integration_order(const ThermalState& thermal, double tol, int k_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("p_integration_order: need tol > 0");
    const double y = thermal.params.B * static_cast<double>(thermal.space.l) * thermal.space.l;
    if (y == 0.0) return 0;
    double tail = y;  // y^{k+1}/(k+1)! at k = 0
    int k = 0;
    while (k < k_max && tail > tol) {
        ++k;
        tail *= y / (k + 1);
    }
    return k;
}

double p_moment_check(const ThermalState& thermal, int n, int quad_order, double tol, int k_max) {
    const int l = thermal.space.l;
    if (n < 0 || n > l) throw std::invalid_argument("p_moment_check: need 0 <= n <= l");

    const int k_fixed = p_integration_order(thermal, tol, k_max);
    const double moment = integrate_halfline(
        [&](double x) {
            return std::exp(n * std::log(x) - (l + 2) * std::log1p(x)) *
                   p_series_at_order(thermal, x, k_fixed);
        },
        quad_order);
    const double target =
        std::exp(-static_cast<double>(n) * (thermal.params.A - thermal.params.B * n) -
                 std::log(static_cast<double>(l + 1)) - log_binomial(l, n));
    return std::abs(moment - target) / target;
}

PTraceReport p_trace_check(const ThermalState& thermal, int quad_order, double tol, int k_max) {
    const int l = thermal.space.l;
    const double A = thermal.params.A;

    PTraceReport report;
    const int k_fixed = p_integration_order(thermal, tol, k_max);
    const double trace = integrate_halfline(
                             [&](double x) {
                                 const double opx = 1.0 + x;
                                 return (l + 1) / (opx * opx) * p_series_at_order(thermal, x, k_fixed);
                             },
                             quad_order) /
                         thermal.partition;
    report.residual = std::abs(trace - 1.0);

    if (thermal.params.B == 0.0 && A > 1e-8) {
        report.has_closed_forms = true;
        report.inner_quadrature = integrate_halfline(
            [&](double x) { return std::exp(l * std::log1p(x) - (l + 2) * std::log1p(std::exp(A) * x)); },
            quad_order);
        report.inner_ratio_form = ratio_integral(1.0, 1.0, std::exp(A), 1.0, l + 1);
        CompensatedSum geom;
        for (int n = 0; n <= l; ++n) geom.add(std::exp(-A * n));
        report.inner_geometric = geom.value() / ((l + 1) * std::exp(A));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Thermal moments and statistics
// ---------------------------------------------------------------------------

double thermal_moment(const ThermalState& thermal, int s) {
    if (s < 0) throw std::invalid_argument("thermal_moment: need s >= 0");

    CompensatedSum direct;
    for (int n = 0; n <= thermal.space.l; ++n)
        direct.add(thermal.weights[static_cast<std::size_t>(n)] * std::pow(static_cast<double>(n), s));
    const double sum_route = direct.value();

    ExpSum z = partition_exp_sum(thermal.params);
    const double z0 = z.eval(thermal.params.A);
    for (int i = 0; i < s; ++i) z = z.derivative();
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    const double deriv_route = sign * z.eval(thermal.params.A) / z0;

    if (std::abs(sum_route - deriv_route) > 1e-12 * std::max(1.0, std::abs(sum_route)))
        throw consistency_error("thermal_moment: direct sum and derivative routes disagree (s=" +
                                std::to_string(s) + ")");
    return sum_route;
}

namespace {

struct LogDerivs {
    double dlnz = 0.0;   // d ln Z / dA
    double d2lnz = 0.0;  // d^2 ln Z / dA^2
};

LogDerivs log_derivatives(const ThermalState& thermal) {
    const ExpSum z = partition_exp_sum(thermal.params);
    const ExpSum z1 = z.derivative();
    const ExpSum z2 = z1.derivative();
    const double A = thermal.params.A;
    const double v0 = z.eval(A), v1 = z1.eval(A), v2 = z2.eval(A);
    LogDerivs d;
    d.dlnz = v1 / v0;
    d.d2lnz = v2 / v0 - d.dlnz * d.dlnz;
    return d;
}

void check_degenerate(const ThermalState& thermal, const char* who) {
    if (!std::isfinite(thermal.params.A))
        throw std::invalid_argument(std::string(who) + ": degenerate (infinite) temperature parameter");
    if (thermal.space.l < 1) throw std::invalid_argument(std::string(who) + ": need l >= 1");
}

}  // namespace

double thermal_g2(const ThermalState& thermal) {
    check_degenerate(thermal, "thermal_g2");
    const double m1 = thermal_moment(thermal, 1);
    if (m1 == 0.0)
        throw std::domain_error("thermal_g2: <N> underflowed to zero (temperature effectively zero)");

    // <N^2> - <N> as the falling-factorial moment <N(N-1)>: nonnegative
    // summands, so no cancellation at low temperature.
    CompensatedSum ff;
    for (int n = 0; n <= thermal.space.l; ++n)
        ff.add(thermal.weights[static_cast<std::size_t>(n)] * n * (n - 1.0));
    const double from_moments = ff.value() / (m1 * m1);

    const LogDerivs d = log_derivatives(thermal);
    const double from_logderiv = 1.0 + 1.0 / d.dlnz + d.d2lnz / (d.dlnz * d.dlnz);
    // The log-derivative assembly cancels terms of size 1/<N> at low
    // temperature; the agreement tolerance carries its conditioning.
    const double scale =
        1.0 + std::abs(1.0 / d.dlnz) + std::abs(d.d2lnz / (d.dlnz * d.dlnz));
    if (std::abs(from_moments - from_logderiv) >
        1e-11 * std::max(scale, std::abs(from_moments)))
        throw consistency_error("thermal_g2: moment and log-derivative routes disagree");
    return from_moments;
}

double thermal_mandel(const ThermalState& thermal) {
    check_degenerate(thermal, "thermal_mandel");
    const double m1 = thermal_moment(thermal, 1);
    const double q = m1 * (thermal_g2(thermal) - 1.0);

    const LogDerivs d = log_derivatives(thermal);
    const double from_logderiv = -1.0 - d.d2lnz / d.dlnz;
    const double scale = 1.0 + std::abs(d.d2lnz / d.dlnz);
    if (std::abs(q - from_logderiv) > 1e-11 * std::max(scale, std::abs(q)))
        throw consistency_error("thermal_mandel: moment and log-derivative routes disagree");
    return q;
}

ThermalAverage thermal_average(const ThermalState& thermal, const DiagonalObservable& obs,
                               int quad_order, double tol, int k_max) {
    if (obs.space.l != thermal.space.l) throw std::invalid_argument("thermal_average: space mismatch");
    const int l = thermal.space.l;

    ThermalAverage out;
    const int k_fixed = p_integration_order(thermal, tol, k_max);
    out.value = integrate_halfline(
                    [&](double x) {
                        const double log_x = std::log(x);
                        const double log_opx = std::log1p(x);
                        CompensatedSum inner;
                        for (int n = 0; n <= l; ++n)
                            inner.add(obs.values[static_cast<std::size_t>(n)] *
                                      std::exp(log_binomial(l, n) + n * log_x - l * log_opx));
                        const double opx = 1.0 + x;
                        return (l + 1) / (opx * opx) * p_series_at_order(thermal, x, k_fixed) *
                               inner.value();
                    },
                    quad_order) /
                thermal.partition;

    CompensatedSum basis;
    for (int n = 0; n <= l; ++n)
        basis.add(thermal.weights[static_cast<std::size_t>(n)] * obs.values[static_cast<std::size_t>(n)]);
    out.basis_sum = basis.value();
    out.residual = std::abs(out.value - out.basis_sum);
    return out;
}

// ---------------------------------------------------------------------------
// Thermodynamics
// ---------------------------------------------------------------------------

double internal_energy(const ThermalState& thermal, double hbar_omega) {
    CompensatedSum sum;
    for (int n = 0; n <= thermal.space.l; ++n)
        sum.add(thermal.weights[static_cast<std::size_t>(n)] *
                dimensional_energy(thermal.space, n, hbar_omega));
    return sum.value();
}

double entropy_kb(const ThermalState& thermal) {
    CompensatedSum beta_u;
    for (int n = 0; n <= thermal.space.l; ++n)
        beta_u.add(thermal.weights[static_cast<std::size_t>(n)] * static_cast<double>(n) *
                   (thermal.params.A - thermal.params.B * n));
    return beta_u.value() + std::log(thermal.partition);
}

double heat_capacity_kb(const ThermalState& thermal) {
    CompensatedSum m1, m2;
    for (int n = 0; n <= thermal.space.l; ++n) {
        const double phi = static_cast<double>(n) * (thermal.params.A - thermal.params.B * n);
        const double w = thermal.weights[static_cast<std::size_t>(n)];
        m1.add(w * phi);
        m2.add(w * phi * phi);
    }
    return m2.value() - m1.value() * m1.value();
}

Thermodynamics thermodynamics(const ThermalParams& params, double hbar_omega) {
    if (!(params.A > 0.0))
        throw std::invalid_argument("thermodynamics: need A > 0 (free energy undefined at infinite T)");
    if (!(hbar_omega > 0.0)) throw std::invalid_argument("thermodynamics: need hbar_omega > 0");

    const MorseSpace space = make_space(params.l);
    const ThermalState thermal = make_thermal(space, params.A);
    const double beta = params.A / hbar_omega;
    const double temperature = 1.0 / beta;

    Thermodynamics out;
    out.internal_energy = internal_energy(thermal, hbar_omega);

    // Cross-check U against -d(ln Z)/d(beta) on the dimensional ExpSum,
    // where both A and B scale with beta.
    ExpSum z_beta;
    z_beta.terms.reserve(static_cast<std::size_t>(params.l) + 1);
    for (int n = 0; n <= params.l; ++n)
        z_beta.terms.push_back({1.0, dimensional_energy(space, n, hbar_omega)});
    const double u_deriv = -z_beta.derivative().eval(beta) / z_beta.eval(beta);
    if (std::abs(out.internal_energy - u_deriv) >
        1e-12 * std::max(hbar_omega, std::abs(out.internal_energy)))
        throw consistency_error("thermodynamics: basis sum and -dlnZ/dbeta disagree for U");

    out.free_energy = -temperature * std::log(thermal.partition);
    out.entropy = entropy_kb(thermal);
    out.heat_capacity = heat_capacity_kb(thermal);
    return out;
}

}  // namespace morse
