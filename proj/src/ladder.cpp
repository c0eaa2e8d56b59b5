#include "morse/ladder.hpp"

#include <algorithm>
#include <cmath>

namespace morse {

LadderSet build_ladder(const MorseSpace& space, double alpha) {
    const int l = space.l;
    const int dim = space.dim();

    LadderSet set;
    set.space = space;
    set.alpha = alpha;
    set.a_minus = ComplexMatrix(dim);
    set.a_plus = ComplexMatrix(dim);
    set.number_op = ComplexMatrix(dim);

    for (int n = 0; n <= l; ++n) set.number_op(n, n) = static_cast<double>(n);

    for (int n = 0; n < l; ++n) {
        // Link n <-> n+1 carries the energy gap E_{n+1} - E_n = 2(l-n)+1.
        const long long gap = 2LL * (l - n) + 1;
        const double amp = std::sqrt(space.energy_d(n + 1));
        const std::complex<double> up = amp * unit_phase(-alpha, gap);
        set.a_plus(n + 1, n) = up;
        set.a_minus(n, n + 1) = std::conj(up);
    }
    // a_plus annihilates the top state n = l: the formal weight sqrt(E_{l+1})
    // would leave the bound-state space.

    set.hamiltonian = set.a_plus * set.a_minus;
    return set;
}

ComplexMatrix commutator_defect(const LadderSet& ladder) {
    const int l = ladder.space.l;
    const ComplexMatrix comm =
        ladder.a_minus * ladder.a_plus - ladder.a_plus * ladder.a_minus;
    ComplexMatrix expected(ladder.space.dim());
    for (int n = 0; n <= l; ++n) expected(n, n) = static_cast<double>(-2 * n + 2 * l + 1);
    return comm - expected;
}

namespace {

// Formal energy (l+1)^2 - (l+1-i)^2: the nested-sum limits climb past the
// physical top level, so this is evaluated without a range cap.
double formal_energy(int l, int i) {
    const double lp1 = l + 1;
    return lp1 * lp1 - (lp1 - i) * (lp1 - i);
}

}  // namespace

DeltaTable make_delta_table(int l, int n_max, int j_max) {
    if (l < 1) throw std::invalid_argument("make_delta_table: need l >= 1");
    if (n_max < 0 || j_max < 0) throw std::invalid_argument("make_delta_table: negative index bounds");

    DeltaTable table;
    table.l = l;
    table.n_max = n_max;
    table.j_max = j_max;

    // T_j(m) = sum_{i=1..m} E_i T_{j-1}(i+1), T_0 == 1.  Depth j needs
    // arguments up to m = n_max + 1 + (j_max - j) because each nesting level
    // raises the admissible upper limit by one.
    const int m_top = n_max + 1 + j_max;
    std::vector<std::vector<double>> t(static_cast<std::size_t>(j_max) + 1,
                                       std::vector<double>(static_cast<std::size_t>(m_top) + 2, 0.0));
    for (int m = 0; m <= m_top + 1; ++m) t[0][static_cast<std::size_t>(m)] = 1.0;
    for (int j = 1; j <= j_max; ++j) {
        double run = 0.0;
        for (int m = 1; m <= m_top; ++m) {
            run += formal_energy(l, m) * t[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m) + 1];
            t[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = run;
        }
    }

    table.values.assign(static_cast<std::size_t>(j_max) + 1,
                        std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));
    for (int n = 0; n <= n_max; ++n) {
        const double log_pref = log_factorial(n) + log_factorial(2 * l + 1) - log_factorial(2 * l + 1 - n);
        const double pref = std::exp(log_pref);
        for (int j = 0; j <= j_max; ++j)
            table.values[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)] =
                pref * t[static_cast<std::size_t>(j)][static_cast<std::size_t>(n) + 1];
    }
    return table;
}

double DeltaTable::at(int n, int j) const {
    if (n < 0 || n > n_max || j < 0 || j > j_max)
        throw std::invalid_argument("DeltaTable: index out of range");
    return values[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
}

double delta_nested(int l, int n, int j) {
    if (n < 0 || n > l) throw std::invalid_argument("delta_nested: need 0 <= n <= l");
    if (j < 0) throw std::invalid_argument("delta_nested: need j >= 0");
    return make_delta_table(l, n, j).at(n, j);
}

double delta_recurrence_residual(int l, int n, int j) {
    if (n < 0 || n > l) throw std::invalid_argument("delta_recurrence_residual: need 0 <= n <= l");
    if (j < 0) throw std::invalid_argument("delta_recurrence_residual: need j >= 0");
    if (j >= 1 && n + 1 > l)
        throw std::invalid_argument("delta_recurrence_residual: Delta(n+2, j-1) reference out of range");

    const DeltaTable table = make_delta_table(l, std::min(n + 1, l), j);
    const double lhs = table.at(n, j);
    double rhs = 0.0;
    if (n >= 1) rhs += std::sqrt(formal_energy(l, n)) * table.at(n - 1, j);
    if (j >= 1) rhs += std::sqrt(formal_energy(l, n + 1)) * table.at(n + 1, j - 1);
    return lhs - rhs;
}

SeriesValue i_series(int l, int n, double abs_z, double tol, int j_max) {
    if (n < 0 || n > l) throw std::invalid_argument("i_series: need 0 <= n <= l");
    if (!(abs_z >= 0.0)) throw std::invalid_argument("i_series: need |z| >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("i_series: need tol > 0");
    if (j_max < 0) throw std::invalid_argument("i_series: need j_max >= 0");

    const DeltaTable table = make_delta_table(l, n, j_max);
    const double x = abs_z * abs_z;

    SeriesValue out;
    double inv_fact = std::exp(-log_factorial(n));  // 1/(n+2j)! updated in place
    double sign_pow = 1.0;                          // (-x)^j
    double run_max = 0.0;
    CompensatedSum sum;
    for (int j = 0; j <= j_max; ++j) {
        const double term = sign_pow * inv_fact * table.at(n, j);
        if (!std::isfinite(term)) throw numeric_error("i_series: term overflow");
        sum.add(term);
        out.terms_used = j + 1;
        run_max = std::max(run_max, std::abs(sum.value()));
        if (std::abs(term) < tol * run_max) {
            out.converged = true;
            break;
        }
        sign_pow *= -x;
        inv_fact /= static_cast<double>(n + 2 * j + 1) * static_cast<double>(n + 2 * j + 2);
    }
    out.value = sum.value();
    return out;
}

double j_closed(int l, int n, double abs_z) {
    if (n < 0) throw std::invalid_argument("j_closed: need n >= 0");
    if (!(abs_z >= 0.0 && abs_z < M_PI / 2.0))
        throw std::invalid_argument("j_closed: need 0 <= |z| < pi/2");
    return std::exp(-log_factorial(n)) * std::pow(std::cos(abs_z), l - 1) * std::pow(std::tan(abs_z), n);
}

double j_ode_residual(int l, int n, double abs_z, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("j_ode_residual: need step > 0");
    if (!(abs_z - step >= 0.0 && abs_z + step < M_PI / 2.0))
        throw std::invalid_argument("j_ode_residual: stencil leaves [0, pi/2)");
    const double deriv = (j_closed(l, n, abs_z + step) - j_closed(l, n, abs_z - step)) / (2.0 * step);
    const double lower = (n >= 1) ? j_closed(l, n - 1, abs_z) : 0.0;
    const double upper = formal_energy(l, n + 1) * j_closed(l, n + 1, abs_z);
    return deriv - (lower - upper);
}

}  // namespace morse
