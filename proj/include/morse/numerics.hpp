#ifndef MORSE_NUMERICS_HPP
#define MORSE_NUMERICS_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace morse {

/// Raised when a numerical evaluation produces non-finite values or fails
/// to reach its accuracy target (CLI maps this to exit code 3).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when two algebraically equivalent routes disagree beyond their
/// stated tolerance.  Always indicates a bug, never a user error.
struct consistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureRule {
    enum class Mapping { finite_interval, half_line_rational };
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    Mapping mapping = Mapping::finite_interval;
};

/// Gauss-Legendre rule on [-1, 1].  Nodes strictly increasing and symmetric
/// about 0; exact for polynomials of degree <= 2*order - 1.
QuadratureRule gauss_legendre(int order);

/// Shared, cached rule (thread safe; rules are never evicted).
const QuadratureRule& cached_gauss_legendre(int order);

/// Integral of f over [0, inf) via the rational substitution x = t/(1-t)
/// with Gauss-Legendre on [0, 1).  Requires algebraic decay at least x^-2.
/// Non-finite integrand values raise numeric_error.
double integrate_halfline(const std::function<double(double)>& f, int order);

// ---------------------------------------------------------------------------
// Dense complex matrices (small, row major)
// ---------------------------------------------------------------------------

class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    int dim() const { return n_; }

    std::complex<double>& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::complex<double>& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    static ComplexMatrix identity(int n);

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(std::complex<double> s) const;
    ComplexMatrix adjoint() const;

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& v) const;

    /// Largest entry magnitude.
    double max_abs() const;
    /// Infinity norm (max absolute row sum).
    double norm_inf() const;
    bool finite() const;

  private:
    int n_ = 0;
    std::vector<std::complex<double>> a_;
};

/// Matrix exponential by scaling-and-squaring with a fixed-order truncated
/// series.  exp(0) = I and exp(M) exp(-M) = I hold to ~1e-11 in max-entry
/// norm for the matrix sizes used here (dimension up to a few hundred).
ComplexMatrix matrix_exp(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln n! for n >= 0, exact cumulative log sums below 2000, lgamma beyond.
double log_factorial(long n);

/// ln binomial(l, n) via log-Gamma sums; stable for l up to ~1e4.
double log_binomial(long l, long n);

/// Integral of x^(a-1) (x+z)^(-g) over [0, inf):
/// z^(a-g) Gamma(a) Gamma(g-a) / Gamma(g).  Requires a > 0, g > a, z > 0.
double beta_moment(double a, double g, double z);

/// Integral of (a x + b)^(beta-1) / (c x + d)^(beta+1) over [0, inf):
/// ((a d)^beta - (b c)^beta) / (beta (a d - b c) (c d)^beta).
/// Validity domain: c d > 0, a d != b c, beta >= 1.  The degenerate limit
/// a d -> b c is rejected rather than guessed.
double ratio_integral(double a, double b, double c, double d, double beta);

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

/// e^{i a n} for integer n, computed with a compensated product and exact
/// reduction by 2*pi so that phase factors accumulated in different orders
/// stay consistent to ~1e-15 even for quanta ~1e4.
std::complex<double> unit_phase(double a, long long n);

/// Neumaier compensated summation.
class CompensatedSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace morse

#endif
