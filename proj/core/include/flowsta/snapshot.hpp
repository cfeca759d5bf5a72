#ifndef FLOWSTA_SNAPSHOT_HPP
#define FLOWSTA_SNAPSHOT_HPP

#include "flowsta/grid.hpp"

namespace flowsta {

/// Instantaneous bound eigenstate of H0(t) on a grid: real wavefunction,
/// energy and quantum number, plus solver diagnostics.
struct Snapshot {
    double t = 0.0;
    ScalarField phi;
    double energy = 0.0;
    int n = 0;

    /// Eigenvalue of the discretized operator on phi's grid (before grid
    /// refinement); `energy` above is the refinement-converged estimate.
    double energy_discrete = 0.0;
    /// ||H phi - E phi|| / ||phi|| for the discrete pair on phi's grid.
    double solver_residual = 0.0;
    /// max(|phi|) at the two grid edges relative to max |phi|.
    double tail_magnitude = 0.0;

    explicit Snapshot(const Grid& g) : phi(g) {}
    Snapshot(double time, ScalarField f, double e, int level)
        : t(time), phi(std::move(f)), energy(e), n(level) {}
};

} // namespace flowsta

#endif
