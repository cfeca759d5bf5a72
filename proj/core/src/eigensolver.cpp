#include "flowsta/eigensolver.hpp"

#include <cmath>
#include <limits>

#include "flowsta/calculus.hpp"

namespace flowsta {

namespace {

struct TridiagOperator {
    Eigen::ArrayXd diag; // hbar^2/(m h^2) + U_i
    double off;          // -hbar^2/(2 m h^2)
    double scale;        // infinity-norm estimate

    Eigen::ArrayXd apply(const Eigen::ArrayXd& x) const {
        const int n = static_cast<int>(diag.size());
        Eigen::ArrayXd y(n);
        for (int i = 0; i < n; ++i) {
            double v = diag[i] * x[i];
            if (i > 0) v += off * x[i - 1];
            if (i + 1 < n) v += off * x[i + 1];
            y[i] = v;
        }
        return y;
    }
};

TridiagOperator discretize(const Grid& g, const Eigen::ArrayXd& U, double mass, double hbar) {
    const double h = g.spacing();
    const double k = hbar * hbar / (mass * h * h);
    TridiagOperator op;
    op.diag = U + k;
    op.off = -0.5 * k;
    op.scale = op.diag.abs().maxCoeff() + 2.0 * std::abs(op.off);
    return op;
}

/// Number of eigenvalues of the tridiagonal operator strictly below lambda
/// (Sturm / LDL^T inertia count).
int sturm_count(const TridiagOperator& op, double lambda) {
    const int n = static_cast<int>(op.diag.size());
    const double e2 = op.off * op.off;
    int count = 0;
    double p = op.diag[0] - lambda;
    if (p < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        if (p == 0.0) p = -1e-300;
        p = (op.diag[i] - lambda) - e2 / p;
        if (p < 0.0) ++count;
    }
    return count;
}

/// Bisection bracket of the (n+1)-th smallest eigenvalue.
double bisect_eigenvalue(const TridiagOperator& op, int n) {
    const double r = 2.0 * std::abs(op.off);
    double lo = (op.diag - r).minCoeff();
    double hi = (op.diag + r).maxCoeff();
    const double tol = std::max(8.0 * std::numeric_limits<double>::epsilon() *
                                    (std::abs(lo) + std::abs(hi)),
                                1e-13);
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(op, mid) <= n)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct DiscreteEig {
    Eigen::ArrayXd phi; // trapezoid-normalized, sign-fixed
    double energy;
    double residual;
};

void fix_sign(Eigen::ArrayXd& phi) {
    const double peak = phi.abs().maxCoeff();
    for (int i = 0; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > 1e-6 * peak) {
            if (phi[i] < 0.0) phi = -phi;
            return;
        }
    }
}

DiscreteEig tridiag_eigensolve(const Grid& g, const Eigen::ArrayXd& U, double mass,
                               double hbar, int n) {
    const int np = g.n_points();
    TridiagOperator op = discretize(g, U, mass, hbar);
    double lambda = bisect_eigenvalue(op, n);

    // Inverse iteration at the converged shift.
    Eigen::ArrayXd lower = Eigen::ArrayXd::Constant(np - 1, op.off);
    Eigen::ArrayXd upper = lower;
    Eigen::ArrayXd x(np);
    unsigned long long s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < np; ++i) { // fixed pseudo-random start vector
        s ^= s >> 30;
        s *= 0xbf58476d1ce4e5b9ull;
        s ^= s >> 27;
        x[i] = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    }

    double resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 6; ++it) {
        Eigen::ArrayXd diag = op.diag - lambda;
        Eigen::ArrayXd y;
        try {
            y = tridiag_solve(lower, diag, upper, x);
        } catch (const DomainError&) {
            // Exactly singular shift: nudge and retry.
            diag += 1e-13 * op.scale;
            y = tridiag_solve(lower, diag, upper, x);
        }
        x = y / std::sqrt((y * y).sum());
        // Rayleigh update sharpens the eigenvalue beyond the bisection bracket.
        const Eigen::ArrayXd tx = op.apply(x);
        lambda = (x * tx).sum();
        resid = std::sqrt(((tx - lambda * x) * (tx - lambda * x)).sum());
        if (resid <= 1e-12 * op.scale) break;
    }

    // Normalize in the trapezoid L2 sense.
    ScalarField f{g, x};
    f.values /= norm_l2(f);
    fix_sign(f.values);
    return {f.values, lambda, resid};
}

int count_nodes(const Eigen::ArrayXd& phi) {
    const double floor = 1e-8 * phi.abs().maxCoeff();
    int nodes = 0;
    double prev = 0.0;
    for (int i = 0; i < phi.size(); ++i) {
        const double v = phi[i];
        if (std::abs(v) <= floor) continue;
        if (prev != 0.0 && v * prev < 0.0) ++nodes;
        prev = v;
    }
    return nodes;
}

Snapshot solve_impl(const Grid& grid, const std::function<double(double)>& potential,
                    double mass, double hbar, int n, const EigensolveOptions& opts) {
    if (n < 0) throw DomainError("solve_stationary: n must be >= 0");
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw DomainError("solve_stationary: mass and hbar must be > 0");

    Eigen::ArrayXd Uc(grid.n_points());
    for (int i = 0; i < grid.n_points(); ++i) Uc[i] = potential(grid.q(i));
    if (!Uc.isFinite().all()) throw DomainError("solve_stationary: non-finite potential");

    DiscreteEig coarse = tridiag_eigensolve(grid, Uc, mass, hbar, n);

    Snapshot snap(grid);
    snap.n = n;
    snap.energy_discrete = coarse.energy;
    snap.solver_residual = coarse.residual;

    if (opts.richardson) {
        const Grid fine = grid.refined();
        Eigen::ArrayXd Uf(fine.n_points());
        for (int i = 0; i < fine.n_points(); ++i) Uf[i] = potential(fine.q(i));
        DiscreteEig fr = tridiag_eigensolve(fine, Uf, mass, hbar, n);
        snap.energy = (4.0 * fr.energy - coarse.energy) / 3.0;
        Eigen::ArrayXd phi(grid.n_points());
        for (int i = 0; i < grid.n_points(); ++i)
            phi[i] = (4.0 * fr.phi[2 * i] - coarse.phi[i]) / 3.0;
        ScalarField f{grid, std::move(phi)};
        f.values /= norm_l2(f);
        snap.phi = std::move(f);
    } else {
        snap.energy = coarse.energy;
        snap.phi = ScalarField{grid, coarse.phi};
    }

    const double peak = snap.phi.values.abs().maxCoeff();
    snap.tail_magnitude = std::max(std::abs(snap.phi.values[0]),
                                   std::abs(snap.phi.values[grid.n_points() - 1])) /
                          peak;

    // Bound-state sanity: the eigenvalue must lie below the edge potential,
    // otherwise the potential does not confine this state on the grid.
    const double edge = std::min(Uc[0], Uc[grid.n_points() - 1]);
    if (!(snap.energy < edge))
        throw DomainError("solve_stationary: potential not confining on this grid");
    if (snap.tail_magnitude > opts.tail_tol)
        throw ResolutionError("solve_stationary: eigenstate truncated by the grid");
    if (opts.check_nodes) {
        const int nodes = count_nodes(snap.phi.values);
        if (nodes != n)
            throw Error("solve_stationary: internal consistency, node count " +
                        std::to_string(nodes) + " != n " + std::to_string(n));
    }
    return snap;
}

} // namespace

Snapshot solve_stationary(const Grid& grid, const std::function<double(double)>& potential,
                          double mass, double hbar, int n, const EigensolveOptions& opts) {
    return solve_impl(grid, potential, mass, hbar, n, opts);
}

Snapshot solve_stationary(const Grid& grid, const ScalarField& potential, double mass,
                          double hbar, int n, const EigensolveOptions& opts) {
    if (potential.grid != grid)
        throw DomainError("solve_stationary: potential grid mismatch");
    potential.require_finite("solve_stationary");
    CubicSpline spline(potential);
    return solve_impl(
        grid, [&spline](double q) { return spline(q); }, mass, hbar, n, opts);
}

std::vector<Snapshot> eigenstate_track(const Grid& grid, const Potential& pot,
                                       const TimeMesh& mesh, int n,
                                       const EigensolveOptions& opts) {
    std::vector<Snapshot> track;
    track.reserve(mesh.n_samples());
    for (int k = 0; k < mesh.n_samples(); ++k) {
        const double t = mesh.t(k);
        Snapshot s = solve_impl(
            grid, [&](double q) { return pot.value(q, t); }, pot.mass(), pot.hbar(), n, opts);
        s.t = t;
        track.push_back(std::move(s));
    }
    // Sign continuity pass (sequential by construction).
    for (int k = 0; k + 1 < mesh.n_samples(); ++k) {
        const double o = inner(track[k].phi, track[k + 1].phi);
        if (std::abs(o) < 0.5)
            throw TrackingError(
                "eigenstate_track: successive eigenstates barely overlap near t=" +
                std::to_string(track[k + 1].t) + "; refine the TimeMesh");
        if (o < 0.0) track[k + 1].phi.values = -track[k + 1].phi.values;
    }
    return track;
}

} // namespace flowsta
