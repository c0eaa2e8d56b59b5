#ifndef MORSE_THERMAL_HPP
#define MORSE_THERMAL_HPP

#include "morse/statistics.hpp"

namespace morse {

// ---------------------------------------------------------------------------
// Exact carriers for the heat operator exp[B (d/dA)^2]
// ---------------------------------------------------------------------------

/// Finite sum of exponentials f(A) = sum coef * e^{-rate A}.  Eigenbasis of
/// the heat operator: exp[B (d/dA)^2] maps (coef, rate) to
/// (coef * e^{B rate^2}, rate) exactly, with no truncation.
struct ExpSum {
    struct Term {
        double coef = 0.0;
        double rate = 0.0;
    };
    std::vector<Term> terms;

    double eval(double A) const;
    ExpSum derivative() const;  // d/dA maps (coef, rate) -> (-rate coef, rate)
    /// Combine terms whose rates coincide within tol; evaluation is preserved.
    ExpSum merged(double tol = 1e-12) const;
};

ExpSum heat_apply(const ExpSum& f, double B);

/// Finite combination g(u) = sum coef * u^p (1 + u x)^{-q} with u = e^A,
/// closed under the Euler derivative u d/du via
///   u d/du [u^p (1+ux)^{-q}] = (p - q) u^p (1+ux)^{-q} + q u^p (1+ux)^{-q-1}.
/// Carrier for the even A-derivatives of the P-function bracket; the term
/// count grows by at most one q per derivative.
struct EulerTermSeries {
    struct Term {
        double coef = 0.0;
        int p = 0;
        int q = 0;
    };
    double x = 0.0;
    std::vector<Term> terms;

    EulerTermSeries euler_derivative() const;

    /// Evaluate at A with terms scaled term-by-term in log space against the
    /// base power (1+x)^{base_pow}, i.e. returns
    ///   sum coef * exp(p A + base_pow * log1p(x) - q * log1p(e^A x)).
    double eval_scaled(double A, int base_pow) const;
};

// ---------------------------------------------------------------------------
// Canonical ensemble on one Morse well
// ---------------------------------------------------------------------------

/// Canonical state for fixed l: partition function and Boltzmann weights
/// w_n = e^{-A n + B n^2} / Z.
struct ThermalState {
    MorseSpace space;
    ThermalParams params;
    double partition = 0.0;
    std::vector<double> weights;
};

/// Z_l = sum_n e^{-A n + B n^2}, compensated summation.
double partition_function(const ThermalParams& params);

/// Z_l as an ExpSum in A (rates n, coefficients e^{B n^2}), i.e. the heat
/// operator applied to the harmonic sum of e^{-A n}.
ExpSum partition_exp_sum(const ThermalParams& params);

ThermalState make_thermal(const MorseSpace& space, double beta_hbar_omega);

/// Reference ensembles with decoupled parameters (e.g. the harmonic B = 0
/// limit the closed forms are checked against).  Requires A, B >= 0.
ThermalState make_thermal(const MorseSpace& space, const ThermalParams& params);

/// Husimi function <Z,alpha| rho |Z,alpha> at x = |Z|^2, computed two ways:
/// the direct Boltzmann-weighted binomial sum, and the heat operator acting
/// on the ExpSum expansion of ((1 + x e^{-A})/(1+x))^l.  The two carriers
/// are algebraically identical; disagreement beyond 1e-13 raises
/// consistency_error.
struct DualValue {
    double direct = 0.0;
    double operator_form = 0.0;
};

DualValue husimi(const ThermalState& thermal, double x);

/// |integral dmu <Z|rho|Z> - 1| by radial quadrature.
double husimi_trace_check(const ThermalState& thermal, int quad_order);

/// P-function by the heat-operator series
///   P_l(x) = sum_k (B^k / k!) (d/dA)^{2k} [e^A ((1+x)/(1+e^A x))^{l+2}]
/// with the bracket carried as an EulerTermSeries and the derivatives taken
/// exactly.  The k-series is asymptotic for B > 0: summation stops when the
/// relative-term tolerance is met (converged = true), when the terms start
/// growing (truncated at the smallest term, converged = false), or at k_max.
/// Negative values are legitimate (P is a quasi-probability).
struct PValue {
    double value = 0.0;
    int k_used = 0;
    bool converged = false;
};

PValue p_function(const ThermalState& thermal, double x, double tol, int k_max);

/// Sum of the heat series truncated after exactly k_terms + 1 terms
/// (k = 0..k_terms), uniformly in x.
double p_series_at_order(const ThermalState& thermal, double x, int k_terms);

/// Truncation order for integrating the P-series against the measure
/// kernels.  The pointwise series is asymptotic, but its termwise integrals
/// against x^n (1+x)^{-(l+2)} reproduce the convergent exponential series
/// sum_k (B n^2)^k / k!, so a truncation uniform in x with tail
/// (B l^2)^{k+1}/(k+1)! <= tol integrates correctly even where the
/// pointwise series has already hit its asymptotic floor.
int p_integration_order(const ThermalState& thermal, double tol, int k_max);

/// Relative residual of the moment condition
///   integral x^n (1+x)^{-(l+2)} P_l(x) dx = e^{-A n + B n^2} / ((l+1) binom(l,n)).
double p_moment_check(const ThermalState& thermal, int n, int quad_order, double tol, int k_max);

/// Trace condition (1/Z_l) integral dmu P_l(|Z|^2) = 1.  For B = 0 the inner
/// integral has the closed ratio form and the geometric-sum value; both are
/// reported for cross-checking.
struct PTraceReport {
    double residual = 0.0;       // |trace - 1|
    double inner_quadrature = 0.0;
    double inner_ratio_form = 0.0;   // B = 0 only
    double inner_geometric = 0.0;    // B = 0 only
    bool has_closed_forms = false;
};

PTraceReport p_trace_check(const ThermalState& thermal, int quad_order, double tol, int k_max);

/// <N^s>_l computed as the direct Boltzmann sum and as
/// (1/Z)(-1)^s (d/dA)^s Z with the derivative taken on the ExpSum carrier;
/// disagreement beyond 1e-12 raises consistency_error.
double thermal_moment(const ThermalState& thermal, int s);

/// Thermal second-order correlation (<N^2> - <N>)/<N>^2, cross-checked
/// against the log-derivative form 1 + 1/(dlnZ/dA) + (d2lnZ/dA2)/(dlnZ/dA)^2
/// (agreement to 1e-11 enforced).
double thermal_g2(const ThermalState& thermal);

/// Thermal Mandel parameter <N>(g2 - 1), cross-checked against
/// -1 - (d2lnZ/dA2)/(dlnZ/dA).
double thermal_mandel(const ThermalState& thermal);

/// Thermal average (1/Z) integral dmu P(|Z|^2) <Z|Obs|Z> by radial
/// quadrature, with the basis sum sum_n w_n a_n as reference.
struct ThermalAverage {
    double value = 0.0;
    double basis_sum = 0.0;
    double residual = 0.0;  // |value - basis_sum|
};

ThermalAverage thermal_average(const ThermalState& thermal, const DiagonalObservable& obs,
                               int quad_order, double tol, int k_max);

// ---------------------------------------------------------------------------
// Thermodynamics (k_B = 1 units)
// ---------------------------------------------------------------------------

/// U = sum w_n eps_n; valid for every A >= 0.
double internal_energy(const ThermalState& thermal, double hbar_omega);

/// S/k_B = beta U + ln Z = sum w (A n - B n^2) + ln Z; valid for A >= 0
/// and tends to ln(l+1) as A -> 0.
double entropy_kb(const ThermalState& thermal);

/// C_v/k_B = beta^2 Var(eps) = Var(A n - B n^2); fluctuation form.
double heat_capacity_kb(const ThermalState& thermal);

struct Thermodynamics {
    double free_energy = 0.0;
    double internal_energy = 0.0;
    double entropy = 0.0;        // units of k_B
    double heat_capacity = 0.0;  // units of k_B
};

/// Requires A > 0 (the free energy needs a finite temperature).
Thermodynamics thermodynamics(const ThermalParams& params, double hbar_omega);

}  // namespace morse

#endif
