#include "flowsta/potentials.hpp"

#include <cmath>

#include "flowsta/calculus.hpp"

namespace flowsta {

double razavy_potential(double q, double xi) {
    return xi * xi / 16.0 * (std::cosh(4.0 * q) - 1.0) - 1.5 * xi * std::cosh(2.0 * q);
}

double razavy_potential_dq(double q, double xi) {
    return xi * xi / 4.0 * std::sinh(4.0 * q) - 3.0 * xi * std::sinh(2.0 * q);
}

double razavy_potential_dxi(double q, double xi) {
    return xi / 8.0 * (std::cosh(4.0 * q) - 1.0) - 1.5 * std::cosh(2.0 * q);
}

Snapshot razavy_first_excited(const Grid& g, double xi) {
    if (!(xi > 0.0)) throw DomainError("razavy_first_excited: xi must be > 0");
    Eigen::ArrayXd phi(g.n_points());
    for (int i = 0; i < g.n_points(); ++i) {
        const double q = g.q(i);
        phi[i] = std::sinh(2.0 * q) * std::exp(-0.25 * xi * std::cosh(2.0 * q));
    }
    const double peak = phi.abs().maxCoeff();
    const double tail = std::max(std::abs(phi[0]), std::abs(phi[g.n_points() - 1]));
    if (tail > 1e-12 * peak)
        throw ResolutionError("razavy_first_excited: grid too narrow, state truncated");

    ScalarField f{g, std::move(phi)};
    const double nrm = std::sqrt(inner(f, f));
    f.values /= nrm;
    Snapshot snap(0.0, std::move(f), -2.0, 1);
    snap.energy_discrete = -2.0;
    snap.tail_magnitude = tail / peak;
    return snap;
}

ScaleInvariantPotential::ScaleInvariantPotential(PotentialPtr base, SchedulePtr gamma,
                                                 SchedulePtr shift)
    : base_(std::move(base)), gamma_(std::move(gamma)), f_(std::move(shift)) {
    if (!base_ || !gamma_ || !f_)
        throw DomainError("ScaleInvariantPotential: null component");
}

double ScaleInvariantPotential::value(double q, double t) const {
    const double g = gamma_->value(t);
    if (!(g > 0.0)) throw DomainError("ScaleInvariantPotential: gamma must stay > 0");
    const double u = (q - f_->value(t)) / g;
    return base_->value(u, 0.0) / (g * g);
}

double ScaleInvariantPotential::dq(double q, double t) const {
    const double g = gamma_->value(t);
    const double u = (q - f_->value(t)) / g;
    return base_->dq(u, 0.0) / (g * g * g);
}

double ScaleInvariantPotential::dt(double q, double t) const {
    const double g = gamma_->value(t);
    const double gd = gamma_->rate(t);
    const double u = (q - f_->value(t)) / g;
    const double ud = (-f_->rate(t) - u * gd) / g;
    return -2.0 * gd / (g * g * g) * base_->value(u, 0.0) + base_->dq(u, 0.0) * ud / (g * g);
}

double scale_invariant_potential(double q, double gamma, double f, const Potential& base) {
    if (!(gamma > 0.0)) throw DomainError("scale_invariant_potential: gamma must be > 0");
    return base.value((q - f) / gamma, 0.0) / (gamma * gamma);
}

struct TabulatedPotential::Impl {
    CubicSpline spline;
    explicit Impl(const ScalarField& f) : spline(f) {}
};

TabulatedPotential::TabulatedPotential(const ScalarField& values, double tau) : tau_(tau) {
    values.require_finite("TabulatedPotential");
    impl_ = std::make_unique<Impl>(values);
}

TabulatedPotential::~TabulatedPotential() = default;

double TabulatedPotential::value(double q, double) const { return impl_->spline(q); }

double TabulatedPotential::dq(double q, double) const { return impl_->spline.derivative(q); }

} // namespace flowsta
