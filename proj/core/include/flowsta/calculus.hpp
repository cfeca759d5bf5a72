#ifndef FLOWSTA_CALCULUS_HPP
#define FLOWSTA_CALCULUS_HPP

#include <Eigen/Dense>

#include "flowsta/grid.hpp"

namespace flowsta {

enum class DiffScheme { spectral, central4 };

/// d/dq of a sampled field.
///
/// central4 is a 5-point stencil, O(h^4) everywhere (one-sided at the edges),
/// exact for polynomials up to degree 4. spectral embeds the field in a
/// periodic box of period n*h; the field must have decayed at both ends.
/// If the boundary magnitude exceeds 1e-8 * max|f| under the spectral scheme,
/// *boundary_warning is set (result is still returned).
ScalarField derivative(const ScalarField& f, DiffScheme scheme,
                       bool* boundary_warning = nullptr);

/// Trapezoid cumulative integral from q_min; result[0] == 0.
/// Monotone non-decreasing whenever f >= 0. This is the piecewise-linear
/// model shared with invert_monotone.
ScalarField cumulative_integral(const ScalarField& f);

/// Endpoint-corrected trapezoid cumulative integral (Euler-Maclaurin h^2 term
/// removed with a central4 derivative), O(h^4). Not guaranteed monotone.
ScalarField cumulative_integral_c4(const ScalarField& f);

/// Trapezoid integral over the whole grid.
double integrate(const ScalarField& f);

/// Trapezoid inner product of two fields on the same grid.
double inner(const ScalarField& a, const ScalarField& b);

/// L2 norm under the trapezoid weight.
double norm_l2(const ScalarField& a);

/// Piecewise-linear evaluation of a sampled field at q (clamped to the grid).
double interp_linear(const ScalarField& f, double q);

/// Invert a monotone non-decreasing sampled function F at `level` using the
/// piecewise-linear model: returns q with F_lin(q) == level. Exact right
/// inverse at all sampled levels. Throws OutOfRangeError if level is outside
/// [F[0], F[n-1]] and DomainError if F is not non-decreasing.
double invert_monotone(const ScalarField& F, double level);

/// Not-a-knot cubic spline on strictly increasing knots (n >= 4).
class CubicSpline {
public:
    CubicSpline(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);
    CubicSpline(const ScalarField& f);

    double operator()(double x) const;
    double derivative(double x) const;
    /// Cumulative integral from x[0] to x (analytic on each cubic piece).
    double integral_from_start(double x) const;

private:
    Eigen::ArrayXd x_, y_, m_;      // knots, values, second derivatives
    Eigen::ArrayXd cumint_;         // integral from x_[0] to each knot
    int locate(double x) const;
};

/// Monotone (Fritsch-Carlson) piecewise-cubic Hermite interpolant.
/// Preserves monotonicity of the data; C^1.
class MonotoneCubic {
public:
    MonotoneCubic(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

    double operator()(double x) const;
    double derivative(double x) const;

private:
    Eigen::ArrayXd x_, y_, d_; // knots, values, endpoint slopes
    int locate(double x) const;
};

/// Solve a tridiagonal system with partial pivoting.
/// diag has n entries, lower/upper have n-1. Throws DomainError if singular.
Eigen::ArrayXd tridiag_solve(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                             const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs);

/// Complex variant used by the Crank-Nicolson propagator.
Eigen::ArrayXcd tridiag_solve(const Eigen::ArrayXcd& lower, const Eigen::ArrayXcd& diag,
                              const Eigen::ArrayXcd& upper, const Eigen::ArrayXcd& rhs);

} // namespace flowsta

#endif
