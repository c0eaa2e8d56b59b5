#include "morse/coherent.hpp"

#include <algorithm>
#include <cmath>

#include "morse/ladder.hpp"

namespace morse {

CoherentState closed_form_state(const MorseSpace& space, std::complex<double> Z, double alpha) {
    if (!std::isfinite(Z.real()) || !std::isfinite(Z.imag()))
        throw std::invalid_argument("closed_form_state: non-finite label");

    const int l = space.l;
    CoherentState state;
    state.space = space;
    state.Z = Z;
    state.alpha = alpha;
    state.coeffs.assign(static_cast<std::size_t>(l) + 1, 0.0);

    const double abs_Z = std::abs(Z);
    if (abs_Z == 0.0) {
        state.coeffs[0] = unit_phase(-alpha, 0);  // = 1; E_0 = 0
        return state;
    }

    const double log_abs_Z = std::log(abs_Z);
    const double arg_Z = std::arg(Z);
    const double log_norm_half = 0.5 * static_cast<double>(l) * std::log1p(abs_Z * abs_Z);

    CompensatedSum norm2;
    for (int n = 0; n <= l; ++n) {
        const double log_mag = 0.5 * log_binomial(l, n) + n * log_abs_Z - log_norm_half;
        const double mag = std::exp(log_mag);
        state.coeffs[static_cast<std::size_t>(n)] =
            mag * unit_phase(arg_Z, n) * unit_phase(-alpha, space.energy(n));
        norm2.add(mag * mag);
    }
    // The log-space evaluation already lands within ~1e-13 of unit norm;
    // rescale so downstream identities see an exactly normalized state.
    const double inv_norm = 1.0 / std::sqrt(norm2.value());
    for (auto& c : state.coeffs) c *= inv_norm;
    return state;
}

namespace {

double fidelity(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return std::abs(s);
}

}  // namespace

DisplacementDiagnostics displaced_state(const MorseSpace& space, std::complex<double> z, double alpha) {
    const LadderSet ladder = build_ladder(space, alpha);
    const ComplexMatrix gen = ladder.a_plus.scaled(z) - ladder.a_minus.scaled(std::conj(z));
    const ComplexMatrix disp = matrix_exp(gen);

    std::vector<std::complex<double>> ground(static_cast<std::size_t>(space.dim()), 0.0);
    ground[0] = 1.0;
    std::vector<std::complex<double>> vec = disp.apply(ground);

    DisplacementDiagnostics diag;
    double norm2 = 0.0;
    for (const auto& c : vec) norm2 += std::norm(c);
    diag.norm_before = std::sqrt(norm2);
    for (auto& c : vec) c /= diag.norm_before;
    diag.vec = vec;

    const double abs_z = std::abs(z);
    const double phi = (abs_z == 0.0) ? 0.0 : std::arg(z);
    const std::complex<double> dir = std::polar(1.0, phi);

    // Fidelity against the tan|z| label mapping Z = e^{i arg z} tan|z|.
    {
        const CoherentState ref = closed_form_state(space, std::tan(abs_z) * dir, alpha);
        diag.tan_mapping_fidelity = fidelity(ref.coeffs, vec);
    }

    // Best-fit |Z| along the fixed phase: coarse scan over t with
    // Z = tan(t), then golden-section refinement.
    auto fit = [&](double t) {
        const CoherentState ref = closed_form_state(space, std::tan(t) * dir, alpha);
        return fidelity(ref.coeffs, vec);
    };
    const int scan = 512;
    const double t_hi = M_PI / 2.0 - 1e-6;
    double best_t = 0.0, best_f = fit(0.0);
    for (int i = 1; i <= scan; ++i) {
        const double t = t_hi * i / scan;
        const double f = fit(t);
        if (f > best_f) {
            best_f = f;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - t_hi / scan);
    double hi = std::min(t_hi, best_t + t_hi / scan);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = fit(c), fd = fit(d);
    while (hi - lo > 1e-12) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = fit(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = fit(d);
        }
    }
    const double t_star = 0.5 * (lo + hi);
    diag.best_fit_abs_Z = std::tan(t_star);
    diag.best_fit_fidelity = fit(t_star);
    return diag;
}

std::complex<double> overlap(const CoherentState& s1, const CoherentState& s2) {
    if (s1.space.l != s2.space.l) throw std::invalid_argument("overlap: space mismatch");
    if (s1.alpha != s2.alpha)
        throw std::invalid_argument("overlap: states carry different phase parameters alpha");
    std::complex<double> s = 0.0;
    for (std::size_t n = 0; n < s1.coeffs.size(); ++n) s += std::conj(s1.coeffs[n]) * s2.coeffs[n];
    return s;
}

std::complex<double> overlap_kernel(const MorseSpace& space,
                                    std::complex<double> Z1, std::complex<double> Z2) {
    const double l = space.l;
    const std::complex<double> w = 1.0 + std::conj(Z1) * Z2;
    if (w == 0.0) return 0.0;  // antipodal pair
    const std::complex<double> log_num = std::log(w);
    const double log_den = 0.5 * l * (std::log1p(std::norm(Z1)) + std::log1p(std::norm(Z2)));
    return std::exp(l * log_num - log_den);
}

double measure_density(int l, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("measure_density: need x >= 0");
    return (l + 1) * std::exp(-(l + 2) * std::log1p(x));
}

double radial_weight(int l, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("radial_weight: need x >= 0");
    const double opx = 1.0 + x;
    return (l + 1) / (opx * opx);
}

MomentReport identity_resolution_check(const MorseSpace& space, int quad_order) {
    const int l = space.l;
    if (quad_order < 2 * (l + 2))
        throw std::invalid_argument("identity_resolution_check: quadrature order too small for l");

    MomentReport report;
    report.residuals.resize(static_cast<std::size_t>(l) + 1);
    for (int n = 0; n <= l; ++n) {
        const double target = std::exp(-log_binomial(l, n));  // n!(l-n)!/l!
        const double value = integrate_halfline(
            [&](double x) { return std::exp(n * std::log(x) - (l + 2) * std::log1p(x)) * (l + 1); },
            quad_order);
        const double res = std::abs(value - target) / target;
        report.residuals[static_cast<std::size_t>(n)] = res;
        report.max_residual = std::max(report.max_residual, res);
    }
    return report;
}

CoherentState evolve(const CoherentState& state, double t) {
    CoherentState out = state;
    out.alpha = state.alpha + t;
    for (int n = 0; n <= state.space.l; ++n)
        out.coeffs[static_cast<std::size_t>(n)] =
            state.coeffs[static_cast<std::size_t>(n)] * unit_phase(-t, state.space.energy(n));
    return out;
}

}  // namespace morse
