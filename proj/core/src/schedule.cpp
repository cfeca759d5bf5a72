#include "flowsta/schedule.hpp"

#include <cmath>

#include "flowsta/calculus.hpp"

namespace flowsta {

double SmoothstepSchedule::value_in(double t) const {
    const double u = t / tau();
    const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    return a_ + (b_ - a_) * s;
}

double SmoothstepSchedule::rate_in(double t) const {
    const double u = t / tau();
    const double sp = 30.0 * u * u * (u - 1.0) * (u - 1.0);
    return (b_ - a_) * sp / tau();
}

double SmoothstepSchedule::accel_in(double t) const {
    const double u = t / tau();
    const double spp = 60.0 * u * (2.0 * u - 1.0) * (u - 1.0);
    return (b_ - a_) * spp / (tau() * tau());
}

double RazavyXiSchedule::value_in(double t) const {
    const double x = M_PI * t / tau();
    return 4.5 + std::cos(x) * (std::cos(2.0 * x) - 5.0);
}

double RazavyXiSchedule::rate_in(double t) const {
    // d/dt [4.5 + c1 (c2 - 5)] reduces to 6 (pi/tau) sin^3(pi t / tau)
    const double s = std::sin(M_PI * t / tau());
    return 6.0 * (M_PI / tau()) * s * s * s;
}

double RazavyXiSchedule::accel_in(double t) const {
    const double x = M_PI * t / tau();
    const double w = M_PI / tau();
    return 18.0 * w * w * std::sin(x) * std::sin(x) * std::cos(x);
}

struct SampledSchedule::Impl {
    CubicSpline spline;
    double dt;
    Impl(const Eigen::ArrayXd& t, const Eigen::ArrayXd& v)
        : spline(t, v), dt(t[1] - t[0]) {}
};

SampledSchedule::SampledSchedule(const Eigen::ArrayXd& values, double tau) : Schedule(tau) {
    const int n = static_cast<int>(values.size());
    if (n < 8) throw DomainError("SampledSchedule: need at least 8 samples");
    Eigen::ArrayXd t(n);
    for (int k = 0; k < n; ++k)
        t[k] = tau * (static_cast<double>(k) / static_cast<double>(n - 1));
    impl_ = std::make_unique<Impl>(t, values);
}

SampledSchedule::~SampledSchedule() = default;

double SampledSchedule::value_in(double t) const { return impl_->spline(t); }

double SampledSchedule::rate_in(double t) const { return impl_->spline.derivative(t); }

double SampledSchedule::accel_in(double t) const {
    // Second derivative by centered difference of the spline slope.
    const double e = impl_->dt * 0.5;
    double lo = std::max(0.0, t - e), hi = std::min(tau(), t + e);
    return (impl_->spline.derivative(hi) - impl_->spline.derivative(lo)) / (hi - lo);
}

SmoothnessReport check_schedule_smoothness(const Schedule& s) {
    SmoothnessReport rep;
    const double tau = s.tau();
    const double e = 1e-4 * tau;

    // Probe just inside the window; compare against the scale of the ramp.
    double span = 0.0;
    for (int k = 0; k <= 64; ++k)
        span = std::max(span, std::abs(s.value(tau * k / 64.0) - s.value(0.0)));
    const double scale = std::max(span, 1e-12);

    auto fd_rate = [&](double t0, double t1) { return (s.value(t1) - s.value(t0)) / (t1 - t0); };
    rep.rate_start = fd_rate(0.0, e);
    rep.rate_end = fd_rate(tau - e, tau);
    rep.accel_start = (s.value(2.0 * e) - 2.0 * s.value(e) + s.value(0.0)) / (e * e);
    rep.accel_end = (s.value(tau) - 2.0 * s.value(tau - e) + s.value(tau - 2.0 * e)) / (e * e);

    // A C2 join with zero endpoint rate/curvature leaves O(e^2) residuals in
    // the rate probe and O(e) in the curvature probe; violations are O(1).
    const double rate_tol = 1e-4 * scale / tau;
    const double accel_tol = 1e-2 * scale / (tau * tau);
    rep.tolerance = rate_tol;
    rep.pass = std::abs(rep.rate_start) <= rate_tol && std::abs(rep.rate_end) <= rate_tol &&
               std::abs(rep.accel_start) <= accel_tol && std::abs(rep.accel_end) <= accel_tol;
    return rep;
}

} // namespace flowsta
