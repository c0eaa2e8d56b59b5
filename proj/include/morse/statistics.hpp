#ifndef MORSE_STATISTICS_HPP
#define MORSE_STATISTICS_HPP

#include "morse/coherent.hpp"

namespace morse {

/// Observable diagonal in the number basis: values a_n for n = 0..l.
struct DiagonalObservable {
    MorseSpace space;
    std::vector<double> values;
};

DiagonalObservable number_observable(const MorseSpace& space, int power = 1);
DiagonalObservable energy_observable(const MorseSpace& space);

/// sum_n |c_n|^2 a_n.  Alpha-independent: the phases cancel in |c_n|^2.
double expectation(const CoherentState& state, const DiagonalObservable& obs);

/// <N^s>: computed as the direct coefficient sum; for s in {1, 2} the
/// closed forms l t and l t + l(l-1) t^2 with t = x/(1+x) are evaluated as
/// well and any disagreement beyond 1e-12 raises consistency_error.
double moment_n(const CoherentState& state, int s);

/// Second-order correlation (<N^2> - <N>)/<N>^2 = (l-1)/l, independent of
/// the label.  Undefined at Z = 0 (domain error).
double g2(const CoherentState& state);

/// Mandel parameter <N>(g2 - 1) = -x/(1+x), always in (-1, 0):
/// the states are sub-Poissonian for every label.  Undefined at Z = 0.
double mandel_q(const CoherentState& state);

/// Energy expectation and its closed label function
/// f(x) = l(2l+1) t - l(l-1) t^2, t = x/(1+x); the two agree to 1e-12
/// (this is the identity <H> = 2(l+1)<N> - <N^2>).
struct ActionIdentity {
    double mean_energy = 0.0;
    double f_of_x = 0.0;
};

ActionIdentity action_identity(const CoherentState& state);

}  // namespace morse

#endif
