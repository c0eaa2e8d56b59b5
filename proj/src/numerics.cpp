#include "morse/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace morse {

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

QuadratureRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

    QuadratureRule rule;
    rule.order = order;
    rule.mapping = QuadratureRule::Mapping::finite_interval;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);

    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_n, starting from the Chebyshev-like guess.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (order == 1) { p1 = x; }
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = (order == 1) ? x : p1;
            double pm = (order == 1) ? 1.0 : p0;
            pp = order * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        // Nodes ascend; the Newton guess above descends from +1.
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

const QuadratureRule& cached_gauss_legendre(int order) {
    static std::mutex mtx;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
    return it->second;
}

double integrate_halfline(const std::function<double(double)>& f, int order) {
    const QuadratureRule& rule = cached_gauss_legendre(order);
    CompensatedSum acc;
    for (int i = 0; i < order; ++i) {
        // Map [-1,1] -> t in (0,1), then x = t/(1-t), dx = dt/(1-t)^2.
        double t = 0.5 * (rule.nodes[i] + 1.0);
        double omt = 1.0 - t;
        double x = t / omt;
        double fx = f(x);
        if (!std::isfinite(fx))
            throw numeric_error("integrate_halfline: non-finite integrand at x = " + std::to_string(x));
        acc.add(0.5 * rule.weights[i] * fx / (omt * omt));
    }
    double v = acc.value();
    if (!std::isfinite(v)) throw numeric_error("integrate_halfline: non-finite result");
    return v;
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    ComplexMatrix out(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            std::complex<double> aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    ComplexMatrix out(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    ComplexMatrix out(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

ComplexMatrix ComplexMatrix::scaled(std::complex<double> s) const {
    ComplexMatrix out(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = s * a_[i];
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

std::vector<std::complex<double>> ComplexMatrix::apply(const std::vector<std::complex<double>>& v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("ComplexMatrix: vector dimension mismatch");
    std::vector<std::complex<double>> out(n_);
    for (int i = 0; i < n_; ++i) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
        m = std::max(m, row);
    }
    return m;
}

bool ComplexMatrix::finite() const {
    for (const auto& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    if (m.dim() == 0) throw std::invalid_argument("matrix_exp: empty matrix");
    if (!m.finite()) throw numeric_error("matrix_exp: non-finite input");

    const double norm = m.norm_inf();
    int s = 0;
    if (norm > 0.5) {
        s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        if (s > 60) throw numeric_error("matrix_exp: norm too large (" + std::to_string(norm) + ")");
    }
    ComplexMatrix b = m.scaled(std::ldexp(1.0, -s));

    // Truncated series at order 20: residual < 1e-20 for ||B|| <= 0.5.
    ComplexMatrix sum = ComplexMatrix::identity(m.dim());
    ComplexMatrix term = ComplexMatrix::identity(m.dim());
    for (int k = 1; k <= 20; ++k) {
        term = (term * b).scaled(1.0 / k);
        sum = sum + term;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    if (!sum.finite()) throw numeric_error("matrix_exp: overflow during squaring");
    return sum;
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

namespace {

// Cumulative table of ln k!, grown on demand (never shrinks).
const std::vector<double>& log_factorial_table(long need) {
    static std::mutex mtx;
    static std::vector<double> table{0.0, 0.0};  // 0!, 1!
    std::lock_guard<std::mutex> lock(mtx);
    while (static_cast<long>(table.size()) <= need)
        table.push_back(table.back() + std::log(static_cast<double>(table.size())));
    return table;
}

}  // namespace

double log_factorial(long n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    if (n < 2000) return log_factorial_table(n)[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(long l, long n) {
    if (n < 0 || l < 0 || n > l) throw std::invalid_argument("log_binomial: need 0 <= n <= l");
    return log_factorial(l) - log_factorial(n) - log_factorial(l - n);
}

double beta_moment(double a, double g, double z) {
    if (!(a > 0.0)) throw std::invalid_argument("beta_moment: need a > 0");
    if (!(g > a)) throw std::invalid_argument("beta_moment: need g > a");
    if (!(z > 0.0)) throw std::invalid_argument("beta_moment: need z > 0");
    return std::pow(z, a - g) * std::exp(std::lgamma(a) + std::lgamma(g - a) - std::lgamma(g));
}

double ratio_integral(double a, double b, double c, double d, double beta) {
    if (!(c * d > 0.0)) throw std::invalid_argument("ratio_integral: need c*d > 0");
    if (!(beta >= 1.0)) throw std::invalid_argument("ratio_integral: need beta >= 1");
    const double ad = a * d, bc = b * c;
    if (ad == bc || std::abs(ad - bc) < 1e-14 * (std::abs(ad) + std::abs(bc)))
        throw std::invalid_argument("ratio_integral: degenerate case a*d == b*c rejected");
    return (std::pow(ad, beta) - std::pow(bc, beta)) / (beta * (ad - bc) * std::pow(c * d, beta));
}

std::complex<double> unit_phase(double a, long long n) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double nd = static_cast<double>(n);
    double hi = a * nd;
    double lo = std::fma(a, nd, -hi);            // exact product tail
    double theta = std::remainder(hi, two_pi);   // IEEE remainder is exact
    theta += lo;
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace morse
