#ifndef MORSE_COHERENT_HPP
#define MORSE_COHERENT_HPP

#include "morse/numerics.hpp"
#include "morse/spectrum.hpp"

namespace morse {

/// Normalized coherent state labelled by the stereographic complex label Z
/// and phase parameter alpha:
///   c_n = (1+|Z|^2)^{-l/2} sqrt(binom(l, n)) Z^n e^{-i alpha E_n}.
/// Coefficient magnitudes are evaluated in log space so the construction
/// stays finite for l ~ 200 and |Z| up to ~1e4.
struct CoherentState {
    MorseSpace space;
    std::complex<double> Z;
    double alpha = 0.0;
    std::vector<std::complex<double>> coeffs;

    double x() const { return std::norm(Z); }
};

CoherentState closed_form_state(const MorseSpace& space, std::complex<double> Z, double alpha);

/// Brute-force displacement construction: exp(z a_plus - conj(z) a_minus)
/// applied to the ground basis vector with the truncated ladder matrices.
/// Returns the normalized vector plus diagnostics against the closed form:
/// the truncated algebra is not an exact su(2), so the fidelity and the
/// best-fit label quantify how far the z -> Z = e^{i arg z} tan|z| mapping
/// drifts (at l = 1 the true mapping is Z = tan(sqrt(3) |z|)).
struct DisplacementDiagnostics {
    std::vector<std::complex<double>> vec;
    double norm_before = 0.0;         // should be 1 for alpha = 0 (unitary)
    double tan_mapping_fidelity = 0.0;  // vs closed form at Z = e^{i arg z} tan|z|
    double best_fit_abs_Z = 0.0;      // |Z| maximizing fidelity along arg Z = arg z
    double best_fit_fidelity = 0.0;
};

DisplacementDiagnostics displaced_state(const MorseSpace& space, std::complex<double> z, double alpha);

/// Direct coefficient overlap <s1|s2>.  Requires the same space and the
/// same alpha (the closed kernel below assumes common phases).
std::complex<double> overlap(const CoherentState& s1, const CoherentState& s2);

/// Closed reproducing kernel
///   (1 + conj(Z1) Z2)^l / ((1+|Z1|^2)^{l/2} (1+|Z2|^2)^{l/2}).
std::complex<double> overlap_kernel(const MorseSpace& space,
                                    std::complex<double> Z1, std::complex<double> Z2);

/// Radial measure density h(x) = (l+1)/(1+x)^{l+2} fixed by the moment
/// conditions of the resolution of identity.
double measure_density(int l, double x);

/// Combined radial weight of the full measure after the analytic angular
/// integration: (1+x)^l h(x) = (l+1)/(1+x)^2, so that for isotropic F
///   integral dmu F(|Z|^2) = integral_0^inf radial_weight(l, x) F(x) dx.
double radial_weight(int l, double x);

/// Quadrature check of the l+1 radial moment conditions
/// integral x^n h(x) dx = n!(l-n)!/l!.  Returns per-n relative residuals.
struct MomentReport {
    std::vector<double> residuals;
    double max_residual = 0.0;
};

MomentReport identity_resolution_check(const MorseSpace& space, int quad_order);

/// Time evolution: multiplies c_n by e^{-i t E_n}; coincides with the
/// closed form at phase parameter alpha + t (temporal stability).
CoherentState evolve(const CoherentState& state, double t);

}  // namespace morse

#endif
