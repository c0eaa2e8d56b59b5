#ifndef MORSE_LADDER_HPP
#define MORSE_LADDER_HPP

#include "morse/numerics.hpp"
#include "morse/spectrum.hpp"

namespace morse {

/// Matrix realization of the ladder algebra on the (l+1)-dimensional
/// bound-state space.  Conventions:
///   <n+1| a_plus |n>  = sqrt(E_{n+1}) e^{-i alpha (E_{n+1} - E_n)}
///   <n-1| a_minus |n> = sqrt(E_n)     e^{+i alpha (E_n - E_{n-1})}
/// so a_plus = a_minus^dagger for every alpha and the link phases telescope
/// to e^{-i alpha E_n} when climbing from the ground state.  The top column
/// of a_plus is zero: the algebra is truncated to the bound states, which
/// shows up as a documented commutator defect at n = l.
struct LadderSet {
    MorseSpace space;
    double alpha = 0.0;
    ComplexMatrix a_minus;
    ComplexMatrix a_plus;
    ComplexMatrix number_op;
    ComplexMatrix hamiltonian;  // a_plus * a_minus
};

LadderSet build_ladder(const MorseSpace& space, double alpha);

/// [a_minus, a_plus] - (-2N + (2l+1) I) at alpha = 0.  Diagonal; vanishes on
/// n < l and equals -(l+1)^2 = -E_{l+1} at n = l (truncation artifact).
ComplexMatrix commutator_defect(const LadderSet& ladder);

/// Table of the nested-sum quantities Delta^l(n+1, j).
struct DeltaTable {
    int l = 0;
    int n_max = 0;
    int j_max = 0;
    double at(int n, int j) const;  // Delta^l(n+1, j)

    std::vector<std::vector<double>> values;  // [j][n]
};

DeltaTable make_delta_table(int l, int n_max, int j_max);

/// Delta^l(n+1, j): the prefactor n!(2l+1)!/(2l+1-n)! times the j-fold
/// nested sum over formal energies with ragged limits i1 <= n+1,
/// i2 <= i1+1, ...  j = 0 returns the prefactor alone.
double delta_nested(int l, int n, int j);

/// Residual of the legacy three-term recurrence
///   Delta(n+1,j) - sqrt(E_n) Delta(n,j) - sqrt(E_{n+1}) Delta(n+2,j-1)
/// with Delta(., -1) == 0.  A diagnostic: the recurrence mixes
/// sqrt(E) factors with whole-E products and is not expected to vanish.
double delta_recurrence_residual(int l, int n, int j);

struct SeriesValue {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
};

/// Partial sum of I_n^l(|z|) = sum_j (-|z|^2)^j / (n+2j)! Delta^l(n+1, j),
/// stopped when the last term drops below tol times the running maximum of
/// the partial sums, or at j_max (flagged, not silently returned).
SeriesValue i_series(int l, int n, double abs_z, double tol, int j_max);

/// The legacy closed form J_n^l(|z|) = (1/n!) cos(|z|)^(l-1) tan(|z|)^n,
/// kept as-is (including the l-1 exponent) for diagnosis; the coherent
/// module does not use it.
double j_closed(int l, int n, double abs_z);

/// Central-difference residual of the legacy first-order equation
///   dJ_n/d|z| = J_{n-1} - E_{n+1} J_{n+1},  J_{-1} == 0,
/// evaluated on the legacy closed form.
double j_ode_residual(int l, int n, double abs_z, double step);

}  // namespace morse

#endif
