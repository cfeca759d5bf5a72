#ifndef FLOWSTA_POTENTIALS_HPP
#define FLOWSTA_POTENTIALS_HPP

#include <memory>

#include "flowsta/grid.hpp"
#include "flowsta/schedule.hpp"
#include "flowsta/snapshot.hpp"

namespace flowsta {

/// Time-dependent 1-D potential U0(q, t) bound to its protocol schedule(s),
/// with analytic spatial and temporal partial derivatives. Mass and hbar
/// ride along (dimensionless units, both default 1).
class Potential {
public:
    virtual ~Potential() = default;

    virtual double value(double q, double t) const = 0;
    /// dU/dq at fixed t.
    virtual double dq(double q, double t) const = 0;
    /// dU/dt at fixed q; zero outside (0, tau).
    virtual double dt(double q, double t) const = 0;
    virtual double tau() const = 0;

    double mass() const { return mass_; }
    double hbar() const { return hbar_; }
    void set_units(double mass, double hbar) {
        if (!(mass > 0.0) || !(hbar > 0.0))
            throw DomainError("Potential: mass and hbar must be > 0");
        mass_ = mass;
        hbar_ = hbar;
    }

    ScalarField slice(const Grid& g, double t) const {
        return sample(g, [&](double q) { return value(q, t); });
    }

private:
    double mass_ = 1.0;
    double hbar_ = 1.0;
};

using PotentialPtr = std::shared_ptr<const Potential>;

// -- Razavy family -----------------------------------------------------------

/// (xi^2/16)[cosh(4q) - 1] - (3 xi/2) cosh(2q)
double razavy_potential(double q, double xi);
double razavy_potential_dq(double q, double xi);
/// Partial derivative with respect to the width parameter xi.
double razavy_potential_dxi(double q, double xi);

/// First excited state kappa sinh(2q) exp[-(xi/4) cosh(2q)], normalized on
/// the grid; eigenenergy -2 independent of xi. Throws ResolutionError when
/// the grid is too narrow to hold the state (tail above 1e-12 of peak).
Snapshot razavy_first_excited(const Grid& g, double xi);

class RazavyPotential final : public Potential {
public:
    explicit RazavyPotential(SchedulePtr xi) : xi_(std::move(xi)) {}
    double value(double q, double t) const override { return razavy_potential(q, xi_->value(t)); }
    double dq(double q, double t) const override { return razavy_potential_dq(q, xi_->value(t)); }
    double dt(double q, double t) const override {
        return razavy_potential_dxi(q, xi_->value(t)) * xi_->rate(t);
    }
    double tau() const override { return xi_->tau(); }
    const Schedule& xi() const { return *xi_; }

private:
    SchedulePtr xi_;
};

// -- Harmonic ----------------------------------------------------------------

class HarmonicPotential final : public Potential {
public:
    explicit HarmonicPotential(SchedulePtr stiffness) : kappa_(std::move(stiffness)) {}
    double value(double q, double t) const override { return 0.5 * kappa_->value(t) * q * q; }
    double dq(double q, double t) const override { return kappa_->value(t) * q; }
    double dt(double q, double t) const override { return 0.5 * kappa_->rate(t) * q * q; }
    double tau() const override { return kappa_->tau(); }
    const Schedule& stiffness() const { return *kappa_; }

private:
    SchedulePtr kappa_;
};

// -- Scale-invariant driving -------------------------------------------------

/// U(q,t) = U0((q - f)/gamma) / gamma^2 for a static base potential U0
/// (evaluated at t = 0) and schedules gamma(t) > 0, f(t).
class ScaleInvariantPotential final : public Potential {
public:
    ScaleInvariantPotential(PotentialPtr base, SchedulePtr gamma, SchedulePtr shift);
    double value(double q, double t) const override;
    double dq(double q, double t) const override;
    double dt(double q, double t) const override;
    double tau() const override { return gamma_->tau(); }
    const Schedule& gamma() const { return *gamma_; }
    const Schedule& shift() const { return *f_; }
    const Potential& base() const { return *base_; }

private:
    PotentialPtr base_;
    SchedulePtr gamma_, f_;
};

/// Direct evaluation helper used in oracles: U0 at reference parameters,
/// rescaled to (gamma, f).
double scale_invariant_potential(double q, double gamma, double f, const Potential& base);

// -- Quartic blend -----------------------------------------------------------

/// kappa(t) q^2/2 + lambda(t) q^4/4; the morphing single well used for the
/// classical and semiclassical tracks.
class QuarticBlendPotential final : public Potential {
public:
    QuarticBlendPotential(SchedulePtr kappa, SchedulePtr lambda)
        : kappa_(std::move(kappa)), lambda_(std::move(lambda)) {}
    double value(double q, double t) const override {
        const double q2 = q * q;
        return 0.5 * kappa_->value(t) * q2 + 0.25 * lambda_->value(t) * q2 * q2;
    }
    double dq(double q, double t) const override {
        return kappa_->value(t) * q + lambda_->value(t) * q * q * q;
    }
    double dt(double q, double t) const override {
        const double q2 = q * q;
        return 0.5 * kappa_->rate(t) * q2 + 0.25 * lambda_->rate(t) * q2 * q2;
    }
    double tau() const override { return kappa_->tau(); }

private:
    SchedulePtr kappa_, lambda_;
};

// -- Tabulated ---------------------------------------------------------------

/// Static potential from samples, spline-interpolated.
class TabulatedPotential final : public Potential {
public:
    explicit TabulatedPotential(const ScalarField& values, double tau = 1.0);
    ~TabulatedPotential() override;
    double value(double q, double t) const override;
    double dq(double q, double t) const override;
    double dt(double, double) const override { return 0.0; }
    double tau() const override { return tau_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double tau_;
};

} // namespace flowsta

#endif
