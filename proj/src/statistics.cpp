#include "morse/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morse {

DiagonalObservable number_observable(const MorseSpace& space, int power) {
    DiagonalObservable obs;
    obs.space = space;
    obs.values.resize(static_cast<std::size_t>(space.l) + 1);
    for (int n = 0; n <= space.l; ++n)
        obs.values[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), power);
    if (power == 0) obs.values[0] = 1.0;
    return obs;
}

DiagonalObservable energy_observable(const MorseSpace& space) {
    DiagonalObservable obs;
    obs.space = space;
    obs.values.resize(static_cast<std::size_t>(space.l) + 1);
    for (int n = 0; n <= space.l; ++n) obs.values[static_cast<std::size_t>(n)] = space.energy_d(n);
    return obs;
}

double expectation(const CoherentState& state, const DiagonalObservable& obs) {
    if (state.space.l != obs.space.l) throw std::invalid_argument("expectation: space mismatch");
    CompensatedSum sum;
    for (int n = 0; n <= state.space.l; ++n)
        sum.add(std::norm(state.coeffs[static_cast<std::size_t>(n)]) * obs.values[static_cast<std::size_t>(n)]);
    return sum.value();
}

double moment_n(const CoherentState& state, int s) {
    if (s < 0) throw std::invalid_argument("moment_n: need s >= 0");
    const int l = state.space.l;

    CompensatedSum sum;
    for (int n = 0; n <= l; ++n)
        sum.add(std::norm(state.coeffs[static_cast<std::size_t>(n)]) *
                std::pow(static_cast<double>(n), s));
    const double direct = sum.value();

    if (s == 1 || s == 2) {
        const double x = state.x();
        const double t = x / (1.0 + x);
        const double closed = (s == 1) ? l * t : l * t + static_cast<double>(l) * (l - 1) * t * t;
        if (std::abs(direct - closed) > 1e-12 * std::max(1.0, std::abs(closed)))
            throw consistency_error("moment_n: direct sum and closed form disagree (s=" +
                                    std::to_string(s) + ", diff=" + std::to_string(direct - closed) + ")");
    }
    return direct;
}

double g2(const CoherentState& state) {
    if (state.space.l < 1) throw std::invalid_argument("g2: need l >= 1");
    if (state.x() == 0.0) throw std::domain_error("g2: undefined at Z = 0 (<N> = 0)");
    const double m1 = moment_n(state, 1);
    const double m2 = moment_n(state, 2);
    return (m2 - m1) / (m1 * m1);
}

double mandel_q(const CoherentState& state) {
    if (state.x() == 0.0) throw std::domain_error("mandel_q: undefined at Z = 0 (<N> = 0)");
    const double m1 = moment_n(state, 1);
    return m1 * (g2(state) - 1.0);
}

ActionIdentity action_identity(const CoherentState& state) {
    const int l = state.space.l;
    ActionIdentity out;
    out.mean_energy = expectation(state, energy_observable(state.space));
    const double t = state.x() / (1.0 + state.x());
    out.f_of_x = static_cast<double>(l) * (2 * l + 1) * t - static_cast<double>(l) * (l - 1) * t * t;
    return out;
}

}  // namespace morse
