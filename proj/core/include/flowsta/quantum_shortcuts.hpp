#ifndef FLOWSTA_QUANTUM_SHORTCUTS_HPP
#define FLOWSTA_QUANTUM_SHORTCUTS_HPP

#include <string>
#include <vector>

#include "flowsta/flow_fields.hpp"
#include "flowsta/snapshot.hpp"

namespace flowsta {

enum class ShortcutKind { cd_momentum_coupling, ff_potential, stochastic_cd_potential };

/// Discretized auxiliary term. For cd_momentum_coupling the coefficient is
/// the velocity field v(q,t) of the symmetrized p.v term; for the potential
/// kinds it is the potential itself. Coefficients are exactly zero at t = 0
/// and t = tau and at_time() evaluates to zero outside (0, tau).
struct ShortcutTerm {
    ShortcutKind kind;
    Grid grid;
    TimeMesh times;
    std::vector<ScalarField> coefficient;
    std::string gauge_note;

    ShortcutTerm(ShortcutKind k, const Grid& g, const TimeMesh& mesh)
        : kind(k), grid(g), times(mesh) {}

    ScalarField at_time(double t) const;
};

/// H_CD = (p v + v p)/2, carried by its position-space coefficient v(q,t).
/// In the position representation the operator is -i hbar (v d/dq + v'/2).
/// Throws SingularityError if the flow is invalid on the probability core.
ShortcutTerm build_cd_term(const FlowFields& flow);

/// Transitionless-driving residual per time sample,
///   r(t) = hbar * || dphi/dt + v phi' + v' phi / 2 || / ||phi||,
/// which isolates the continuity equation; the energy and dynamical-phase
/// contributions cancel identically.
Eigen::ArrayXd cd_residual(const std::vector<Snapshot>& track, const ShortcutTerm& cd,
                           double hbar);

/// U_FF with -dU/dq = m a, gauge-fixed so U_FF = 0 at the probability median.
ShortcutTerm build_ff_potential(const FlowFields& flow, double mass);

/// Companion function S (dS/dq = m v) and dynamical phase. S(.,0) and
/// S(.,tau) are constants S_minus / S_plus.
struct PhaseTrack {
    TimeMesh times;
    Eigen::ArrayXd alpha;
    std::vector<ScalarField> S;
    double S_minus = 0.0;
    double S_plus = 0.0;
    /// max over the probability core of |dS/dt + (dS/dq)^2/2m + U_FF|.
    double hj_residual = 0.0;

    explicit PhaseTrack(const TimeMesh& mesh) : times(mesh) {}
};

/// Build S = m * integral(v) + s(t) with s(t) chosen so the Hamilton-Jacobi
/// relation holds at the median point. `energies` (one per time sample)
/// fills the dynamical phase alpha = -(1/hbar) * integral E dt.
/// Throws GaugeError if the Hamilton-Jacobi residual is implausibly large.
PhaseTrack build_companion_S(const FlowFields& flow, double mass, const ShortcutTerm& ff,
                             const Eigen::ArrayXd& energies, double hbar);

/// alpha(t) on the track's sample times.
Eigen::ArrayXd dynamical_phase(const Eigen::ArrayXd& energies, const TimeMesh& mesh,
                               double hbar);

} // namespace flowsta

#endif
