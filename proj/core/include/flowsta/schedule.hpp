#ifndef FLOWSTA_SCHEDULE_HPP
#define FLOWSTA_SCHEDULE_HPP

#include <Eigen/Dense>
#include <memory>

#include "flowsta/grid.hpp"

namespace flowsta {

/// Scalar protocol parameter lambda(t). The value is held constant outside
/// [0, tau]; value, rate and accel are continuous everywhere, with
/// rate = accel = 0 for t outside (0, tau). Schedules violating those join
/// conditions are caught by the smoothness gate below.
class Schedule {
public:
    virtual ~Schedule() = default;

    double value(double t) const {
        if (t <= 0.0) return value_in(0.0);
        if (t >= tau_) return value_in(tau_);
        return value_in(t);
    }
    double rate(double t) const {
        if (t <= 0.0 || t >= tau_) return 0.0;
        return rate_in(t);
    }
    double accel(double t) const {
        if (t <= 0.0 || t >= tau_) return 0.0;
        return accel_in(t);
    }
    double tau() const { return tau_; }

protected:
    explicit Schedule(double tau) : tau_(tau) {
        if (!(tau > 0.0)) throw DomainError("Schedule: tau must be > 0");
    }
    virtual double value_in(double t) const = 0;
    virtual double rate_in(double t) const = 0;
    virtual double accel_in(double t) const = 0;

private:
    double tau_;
};

using SchedulePtr = std::shared_ptr<const Schedule>;

/// Constant parameter (static protocol).
class ConstantSchedule final : public Schedule {
public:
    ConstantSchedule(double value, double tau) : Schedule(tau), v_(value) {}

private:
    double value_in(double) const override { return v_; }
    double rate_in(double) const override { return 0.0; }
    double accel_in(double) const override { return 0.0; }
    double v_;
};

/// Quintic smoothstep ramp from `from` to `to`; first and second time
/// derivatives vanish at both endpoints.
class SmoothstepSchedule final : public Schedule {
public:
    SmoothstepSchedule(double from, double to, double tau)
        : Schedule(tau), a_(from), b_(to) {}

private:
    double value_in(double t) const override;
    double rate_in(double t) const override;
    double accel_in(double t) const override;
    double a_, b_;
};

/// The width-parameter ramp 4.5 + cos(pi t/tau) [cos(2 pi t/tau) - 5]:
/// monotone from 0.5 to 8.5 with vanishing endpoint rate and curvature.
class RazavyXiSchedule final : public Schedule {
public:
    explicit RazavyXiSchedule(double tau) : Schedule(tau) {}

private:
    double value_in(double t) const override;
    double rate_in(double t) const override;
    double accel_in(double t) const override;
};

/// User-supplied samples on a uniform mesh over [0, tau], interpolated with a
/// cubic spline. Must pass the smoothness gate before use in a protocol.
class SampledSchedule final : public Schedule {
public:
    SampledSchedule(const Eigen::ArrayXd& values, double tau);
    ~SampledSchedule() override;

private:
    double value_in(double t) const override;
    double rate_in(double t) const override;
    double accel_in(double t) const override;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Finite-difference check of the endpoint join conditions: the schedule's
/// value must be C2 across t=0 and t=tau given the constant extension, i.e.
/// rate and curvature must vanish at both ends.
struct SmoothnessReport {
    bool pass = true;
    double rate_start = 0.0, rate_end = 0.0;
    double accel_start = 0.0, accel_end = 0.0;
    double tolerance = 0.0;
};

SmoothnessReport check_schedule_smoothness(const Schedule& s);

} // namespace flowsta

#endif
