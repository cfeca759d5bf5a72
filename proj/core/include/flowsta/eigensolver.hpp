#ifndef FLOWSTA_EIGENSOLVER_HPP
#define FLOWSTA_EIGENSOLVER_HPP

#include <functional>
#include <vector>

#include "flowsta/grid.hpp"
#include "flowsta/potentials.hpp"
#include "flowsta/snapshot.hpp"

namespace flowsta {

struct EigensolveOptions {
    /// Solve on the grid and its 2x refinement and extrapolate; the returned
    /// energy/state are refinement-converged, while energy_discrete and
    /// solver_residual describe the discrete pair on the caller's grid.
    bool richardson = true;
    /// Maximum edge magnitude of |phi| relative to its peak.
    double tail_tol = 1e-10;
    /// Verify the interior sign-change count equals n.
    bool check_nodes = true;
};

/// n-th bound eigenpair of -(hbar^2/2m) d^2/dq^2 + U with Dirichlet edges.
/// The sign convention makes the first lobe (from q_min) positive.
Snapshot solve_stationary(const Grid& grid, const std::function<double(double)>& potential,
                          double mass, double hbar, int n,
                          const EigensolveOptions& opts = {});

/// Overload for sampled potentials; off-grid values (used by the internal
/// refinement) come from a cubic spline through the samples.
Snapshot solve_stationary(const Grid& grid, const ScalarField& potential, double mass,
                          double hbar, int n, const EigensolveOptions& opts = {});

/// One Snapshot per time sample with a t-continuous sign convention:
/// <phi(t_k), phi(t_{k+1})> > 0. Throws TrackingError when successive states
/// barely overlap (level crossing or too-coarse mesh).
std::vector<Snapshot> eigenstate_track(const Grid& grid, const Potential& pot,
                                       const TimeMesh& mesh, int n,
                                       const EigensolveOptions& opts = {});

} // namespace flowsta

#endif
