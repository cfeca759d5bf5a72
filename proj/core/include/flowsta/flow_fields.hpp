#ifndef FLOWSTA_FLOW_FIELDS_HPP
#define FLOWSTA_FLOW_FIELDS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "flowsta/grid.hpp"
#include "flowsta/snapshot.hpp"

namespace flowsta {

enum class DensityKind { quantum_eigenstate, classical_shell, stochastic_equilibrium };

/// A time-indexed probability-like density on a fixed grid: phi^2 for quantum
/// eigenstates, the microcanonical projection for classical shells, rho_eq
/// for stochastic systems. `phi` carries the signed amplitude when available
/// (needed for node location); it may be empty otherwise.
struct DensityTrack {
    Grid grid;
    TimeMesh times;
    DensityKind kind = DensityKind::quantum_eigenstate;
    std::vector<ScalarField> rho;
    std::vector<ScalarField> phi;

    DensityTrack(const Grid& g, const TimeMesh& mesh) : grid(g), times(mesh) {}
};

DensityTrack density_track_from_snapshots(std::vector<Snapshot> snaps, const TimeMesh& mesh);

/// Build a quantum track by evaluating an eigenstate factory at each sample.
DensityTrack density_track_from_eigenstates(const std::function<Snapshot(double)>& factory,
                                            const Grid& grid, const TimeMesh& mesh);

/// I(q,t): trapezoid cumulative of rho per time sample. Monotone
/// non-decreasing, I(q_max) = total mass (1 for normalized tracks).
std::vector<ScalarField> integrated_distribution(const DensityTrack& track);

struct FlowOptions {
    /// Density floor relative to the per-sample max; points below are masked.
    double floor_rel = 1e-10;
    /// Cap on |v|; exceedances are clamped and counted, never silent.
    double v_max = 1e3;
};

/// Velocity and acceleration flow fields on Grid x TimeMesh. Fields vanish
/// identically (stored as exact zeros) at t = 0 and t = tau and evaluate to
/// zero outside (0, tau). Outside the valid mask the stored values are
/// constant-extrapolated from the nearest valid point so that potential
/// integration across the tails stays finite.
struct FlowFields {
    Grid grid;
    TimeMesh times;
    std::vector<ScalarField> v;
    std::vector<ScalarField> a;
    std::vector<std::vector<std::uint8_t>> valid;
    /// Index range [first, second] holding all but 1e-6 of the mass.
    std::vector<std::pair<int, int>> core;
    /// Probability median q(I = 1/2, t) (the shell center for classical
    /// tracks); the gauge anchor for the potential builders.
    std::vector<double> median;
    long cap_events = 0;
    bool has_acceleration = false;

    FlowFields(const Grid& g, const TimeMesh& mesh) : grid(g), times(mesh) {}

    /// Slice interpolated in time (4-point Lagrange); zero outside (0, tau).
    ScalarField v_at(double t) const;
    ScalarField a_at(double t) const;
};

/// v = -dI/dt / dI/dq with dI/dq = rho and the time derivative taken by
/// 4th-order differences across parametric snapshots (the protocol is frozen
/// outside the window, so clamped ghosts are exact).
FlowFields velocity_field(const DensityTrack& track, const FlowOptions& opts = {});

/// Fill a = v'v + dv/dt.
FlowFields acceleration_field(FlowFields flow);

struct NodeFluxReport {
    enum class Verdict { no_flux_ok, flux_detected };

    struct NodeSeries {
        Eigen::ArrayXd q;    // node location per time sample
        Eigen::ArrayXd u;    // node velocity dq/dt
        Eigen::ArrayXd flux; // probability flux across the node
    };

    std::vector<NodeSeries> nodes;
    /// Probability in each inter-node region (rows) per time sample (cols);
    /// boundaries count as nodes, so rows = nodes + 1.
    Eigen::ArrayXXd internode_prob;
    double max_abs_flux = 0.0;
    double max_prob_drift = 0.0;
    Verdict verdict = Verdict::no_flux_ok;
};

/// Locate the nodes of phi, their velocities and the probability flux
/// Phi = -d/dt I(q_nu(t), t) across each; verdict no_flux_ok iff
/// max |Phi| <= 1e-6 and inter-node probabilities are t-independent to 1e-6.
/// Throws TopologyError if the node count changes over time and
/// ResolutionError if velocity caps fired despite a no-flux track.
NodeFluxReport node_flux_report(const DensityTrack& track, const FlowFields& flow);

} // namespace flowsta

#endif
