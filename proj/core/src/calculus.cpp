#include "flowsta/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "flowsta/fft.hpp"

namespace flowsta {

namespace {

// Shared spectral-derivative plans, keyed by transform size.
const Fft& cached_fft(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Fft>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<Fft>(n)).first;
    return *it->second;
}

ScalarField derivative_central4(const ScalarField& f) {
    const int n = f.grid.n_points();
    const double h = f.grid.spacing();
    const auto& y = f.values;
    Eigen::ArrayXd d(n);
    const double w = 1.0 / (12.0 * h);
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) * w;
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) * w;
    for (int i = 2; i < n - 2; ++i)
        d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) * w;
    d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) * w;
    d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) * w;
    return {f.grid, std::move(d)};
}

ScalarField derivative_spectral(const ScalarField& f, bool* boundary_warning) {
    const int n = f.grid.n_points();
    const double h = f.grid.spacing();
    const double period = h * static_cast<double>(n);
    const auto& y = f.values;

    const double fmax = y.abs().maxCoeff();
    const double edge = std::max(std::abs(y[0]), std::abs(y[n - 1]));
    if (boundary_warning)
        *boundary_warning = (fmax > 0.0 && edge > 1e-8 * fmax);

    Eigen::ArrayXcd buf = y.cast<std::complex<double>>();
    const Fft& fft = cached_fft(n);
    fft.forward(buf.data());
    const double dk = 2.0 * M_PI / period;
    for (int j = 0; j < n; ++j) {
        double k;
        if (2 * j < n)
            k = dk * j;
        else if (2 * j == n)
            k = 0.0; // odd derivative at the Nyquist mode is dropped
        else
            k = dk * (j - n);
        buf[j] *= std::complex<double>(0.0, k);
    }
    fft.inverse(buf.data());
    return {f.grid, buf.real() / static_cast<double>(n)};
}

} // namespace

ScalarField derivative(const ScalarField& f, DiffScheme scheme, bool* boundary_warning) {
    f.require_finite("derivative");
    if (f.grid.n_points() < 5) throw DomainError("derivative: need at least 5 points");
    if (boundary_warning) *boundary_warning = false;
    if (scheme == DiffScheme::central4) return derivative_central4(f);
    return derivative_spectral(f, boundary_warning);
}

ScalarField cumulative_integral(const ScalarField& f) {
    f.require_finite("cumulative_integral");
    const int n = f.grid.n_points();
    const double h = f.grid.spacing();
    Eigen::ArrayXd out(n);
    out[0] = 0.0;
    for (int i = 1; i < n; ++i)
        out[i] = out[i - 1] + 0.5 * h * (f.values[i - 1] + f.values[i]);
    return {f.grid, std::move(out)};
}

ScalarField cumulative_integral_c4(const ScalarField& f) {
    ScalarField trap = cumulative_integral(f);
    ScalarField fp = derivative_central4(f);
    const double h = f.grid.spacing();
    const double c = h * h / 12.0;
    trap.values -= c * (fp.values - fp.values[0]);
    return trap;
}

double integrate(const ScalarField& f) {
    const int n = f.grid.n_points();
    const double h = f.grid.spacing();
    return h * (f.values.sum() - 0.5 * (f.values[0] + f.values[n - 1]));
}

double inner(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw DomainError("inner: grid mismatch");
    const int n = a.grid.n_points();
    const double h = a.grid.spacing();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        s += w * a.values[i] * b.values[i];
    }
    return s * h;
}

double norm_l2(const ScalarField& a) { return std::sqrt(inner(a, a)); }

double interp_linear(const ScalarField& f, double q) {
    const int n = f.grid.n_points();
    const double h = f.grid.spacing();
    double s = (q - f.grid.q_min()) / h;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, n - 2);
    const double u = s - static_cast<double>(i);
    return f.values[i] * (1.0 - u) + f.values[i + 1] * u;
}

double invert_monotone(const ScalarField& F, double level) {
    F.require_finite("invert_monotone");
    const int n = F.grid.n_points();
    const auto& y = F.values;
    for (int i = 0; i + 1 < n; ++i)
        if (y[i + 1] < y[i])
            throw DomainError("invert_monotone: values are not non-decreasing");
    if (level < y[0] || level > y[n - 1])
        throw OutOfRangeError("invert_monotone: level outside sampled range");

    const double* begin = y.data();
    const double* pos = std::lower_bound(begin, begin + n, level);
    int j = static_cast<int>(pos - begin);
    if (j >= n) j = n - 1;
    if (y[j] == level) return F.grid.q(j);
    // y[j] > level and j > 0 here; bracket is [j-1, j] with y[j] > y[j-1].
    const double t = (level - y[j - 1]) / (y[j] - y[j - 1]);
    return F.grid.q(j - 1) + t * F.grid.spacing();
}

// ---------------------------------------------------------------------------
// Tridiagonal solve with partial pivoting (dgtsv-style, with fill-in).

namespace {

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> tridiag_solve_impl(
    Eigen::Array<Scalar, Eigen::Dynamic, 1> lo, Eigen::Array<Scalar, Eigen::Dynamic, 1> di,
    Eigen::Array<Scalar, Eigen::Dynamic, 1> up, Eigen::Array<Scalar, Eigen::Dynamic, 1> rhs) {
    using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    const int n = static_cast<int>(di.size());
    if (lo.size() != n - 1 || up.size() != n - 1 || rhs.size() != n)
        throw DomainError("tridiag_solve: inconsistent sizes");
    Arr fill = Arr::Zero(std::max(0, n - 2));

    for (int k = 0; k + 1 < n; ++k) {
        if (std::abs(di[k]) >= std::abs(lo[k])) {
            if (di[k] == Scalar(0))
                throw DomainError("tridiag_solve: singular matrix");
            Scalar m = lo[k] / di[k];
            di[k + 1] -= m * up[k];
            if (k + 1 < n - 1) up[k + 1] -= m * fill[k];
            rhs[k + 1] -= m * rhs[k];
            lo[k] = Scalar(0);
        } else {
            // Swap rows k and k+1.
            Scalar m = di[k] / lo[k];
            Scalar dk1 = di[k + 1], uk = up[k];
            di[k] = lo[k];
            up[k] = dk1;
            Scalar fk = (k < n - 2) ? up[k + 1] : Scalar(0);
            if (k < n - 2) fill[k] = fk;
            di[k + 1] = uk - m * dk1;
            if (k + 1 < n - 1) up[k + 1] = -m * fk;
            std::swap(rhs[k], rhs[k + 1]);
            rhs[k + 1] -= m * rhs[k];
        }
    }
    if (di[n - 1] == Scalar(0))
        throw DomainError("tridiag_solve: singular matrix");

    Arr x(n);
    x[n - 1] = rhs[n - 1] / di[n - 1];
    if (n >= 2) x[n - 2] = (rhs[n - 2] - up[n - 2] * x[n - 1]) / di[n - 2];
    for (int k = n - 3; k >= 0; --k)
        x[k] = (rhs[k] - up[k] * x[k + 1] - fill[k] * x[k + 2]) / di[k];
    return x;
}

} // namespace

Eigen::ArrayXd tridiag_solve(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                             const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs) {
    return tridiag_solve_impl<double>(lower, diag, upper, rhs);
}

Eigen::ArrayXcd tridiag_solve(const Eigen::ArrayXcd& lower, const Eigen::ArrayXcd& diag,
                              const Eigen::ArrayXcd& upper, const Eigen::ArrayXcd& rhs) {
    return tridiag_solve_impl<std::complex<double>>(lower, diag, upper, rhs);
}

// ---------------------------------------------------------------------------
// Not-a-knot cubic spline.

CubicSpline::CubicSpline(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) : x_(x), y_(y) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw DomainError("CubicSpline: need at least 4 knots");
    if (y.size() != n) throw DomainError("CubicSpline: size mismatch");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x[i + 1] > x[i])) throw DomainError("CubicSpline: knots must increase");

    Eigen::ArrayXd h(n - 1);
    for (int i = 0; i < n - 1; ++i) h[i] = x[i + 1] - x[i];

    const int m = n - 2; // unknowns M_1 .. M_{n-2}
    Eigen::ArrayXd lo(m - 1), di(m), up(m - 1), r(m);
    for (int i = 1; i <= n - 2; ++i)
        r[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    for (int i = 2; i <= n - 3; ++i) {
        lo[i - 2] = h[i - 1];
        di[i - 1] = 2.0 * (h[i - 1] + h[i]);
        up[i - 1] = h[i];
    }
    // Not-a-knot rows folded into the first and last equations.
    di[0] = 3.0 * h[0] + 2.0 * h[1] + h[0] * h[0] / h[1];
    if (m > 1) up[0] = h[1] - h[0] * h[0] / h[1];
    di[m - 1] = 2.0 * h[n - 3] + 3.0 * h[n - 2] + h[n - 2] * h[n - 2] / h[n - 3];
    if (m > 1) lo[m - 2] = h[n - 3] - h[n - 2] * h[n - 2] / h[n - 3];

    Eigen::ArrayXd mid = tridiag_solve(lo, di, up, r);
    m_ = Eigen::ArrayXd(n);
    for (int i = 0; i < m; ++i) m_[i + 1] = mid[i];
    // not-a-knot: (M1-M0)/h0 == (M2-M1)/h1, and the mirror condition at the end
    m_[0] = m_[1] - h[0] * (m_[2] - m_[1]) / h[1];
    m_[n - 1] = m_[n - 2] + h[n - 2] * (m_[n - 2] - m_[n - 3]) / h[n - 3];

    cumint_ = Eigen::ArrayXd(n);
    cumint_[0] = 0.0;
    for (int i = 0; i < n - 1; ++i) {
        const double hi = h[i];
        cumint_[i + 1] = cumint_[i] + hi * (y[i] + y[i + 1]) / 2.0 -
                         hi * hi * hi * (m_[i] + m_[i + 1]) / 24.0;
    }
}

CubicSpline::CubicSpline(const ScalarField& f) : CubicSpline(f.grid.points(), f.values) {}

int CubicSpline::locate(double x) const {
    const int n = static_cast<int>(x_.size());
    const double* begin = x_.data();
    int i = static_cast<int>(std::upper_bound(begin, begin + n, x) - begin) - 1;
    return std::clamp(i, 0, n - 2);
}

double CubicSpline::operator()(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x, b = x - x_[i];
    return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * a + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double CubicSpline::derivative(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x, b = x - x_[i];
    return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) -
           (y_[i] / h - m_[i] * h / 6.0) + (y_[i + 1] / h - m_[i + 1] * h / 6.0);
}

double CubicSpline::integral_from_start(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double b = x - x_[i];
    const double a = h - b;
    const double part = m_[i] * (h * h * h * h - a * a * a * a) / (24.0 * h) +
                        m_[i + 1] * b * b * b * b / (24.0 * h) +
                        (y_[i] / h - m_[i] * h / 6.0) * (h * h - a * a) / 2.0 +
                        (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b * b / 2.0;
    return cumint_[i] + part;
}

// ---------------------------------------------------------------------------
// Fritsch-Carlson monotone cubic.

MonotoneCubic::MonotoneCubic(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) : x_(x), y_(y) {
    const int n = static_cast<int>(x.size());
    if (n < 3) throw DomainError("MonotoneCubic: need at least 3 knots");
    if (y.size() != n) throw DomainError("MonotoneCubic: size mismatch");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x[i + 1] > x[i])) throw DomainError("MonotoneCubic: knots must increase");

    Eigen::ArrayXd h(n - 1), delta(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    d_ = Eigen::ArrayXd::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (d1 * d0 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

int MonotoneCubic::locate(double x) const {
    const int n = static_cast<int>(x_.size());
    const double* begin = x_.data();
    int i = static_cast<int>(std::upper_bound(begin, begin + n, x) - begin) - 1;
    return std::clamp(i, 0, n - 2);
}

double MonotoneCubic::operator()(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double u = std::clamp(x, x_[0], x_[x_.size() - 1]) - x_[i];
    const double delta = (y_[i + 1] - y_[i]) / h;
    const double c2 = (3.0 * delta - 2.0 * d_[i] - d_[i + 1]) / h;
    const double c3 = (d_[i] + d_[i + 1] - 2.0 * delta) / (h * h);
    return y_[i] + u * (d_[i] + u * (c2 + u * c3));
}

double MonotoneCubic::derivative(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double u = std::clamp(x, x_[0], x_[x_.size() - 1]) - x_[i];
    const double delta = (y_[i + 1] - y_[i]) / h;
    const double c2 = (3.0 * delta - 2.0 * d_[i] - d_[i + 1]) / h;
    const double c3 = (d_[i] + d_[i + 1] - 2.0 * delta) / (h * h);
    return d_[i] + u * (2.0 * c2 + 3.0 * u * c3);
}

} // namespace flowsta
