#include "flowsta/quantum_shortcuts.hpp"

#include <cmath>

#include "flowsta/calculus.hpp"

namespace flowsta {

namespace {

void check_core_valid(const FlowFields& flow) {
    const int nt = flow.times.n_samples();
    for (int k = 0; k < nt; ++k) {
        const auto [lo, hi] = flow.core[k];
        for (int i = lo; i <= hi; ++i) {
            if (!flow.valid[k][i])
                throw SingularityError(
                    "shortcut builder: flow field invalid inside the probability core "
                    "at t=" + std::to_string(flow.times.t(k)));
        }
    }
}

} // namespace

ScalarField ShortcutTerm::at_time(double t) const {
    if (t <= 0.0 || t >= times.tau()) return ScalarField(grid);
    const int n = times.n_samples();
    const double dt = times.dt();
    int k0 = static_cast<int>(std::floor(t / dt)) - 1;
    k0 = std::clamp(k0, 0, n - 4);
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.n_points());
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            w *= (t - times.t(k0 + j)) / (times.t(k0 + i) - times.t(k0 + j));
        }
        out += w * coefficient[k0 + i].values;
    }
    return {grid, std::move(out)};
}

ShortcutTerm build_cd_term(const FlowFields& flow) {
    check_core_valid(flow);
    ShortcutTerm term(ShortcutKind::cd_momentum_coupling, flow.grid, flow.times);
    term.coefficient = flow.v;
    term.gauge_note = "coefficient is v(q,t); operator (pv+vp)/2 = -i hbar (v d/dq + v'/2)";
    return term;
}

Eigen::ArrayXd cd_residual(const std::vector<Snapshot>& track, const ShortcutTerm& cd,
                           double hbar) {
    const int nt = cd.times.n_samples();
    if (static_cast<int>(track.size()) != nt)
        throw DomainError("cd_residual: track length does not match term");
    const double dt = cd.times.dt();

    Eigen::ArrayXd r(nt);
    auto phi_at = [&](int k) -> const Eigen::ArrayXd& {
        return track[std::clamp(k, 0, nt - 1)].phi.values;
    };
    for (int k = 0; k < nt; ++k) {
        Eigen::ArrayXd dphi =
            (-phi_at(k + 2) + 8.0 * phi_at(k + 1) - 8.0 * phi_at(k - 1) + phi_at(k - 2)) /
            (12.0 * dt);
        ScalarField phip = derivative(track[k].phi, DiffScheme::spectral);
        ScalarField vp = derivative(cd.coefficient[k], DiffScheme::central4);
        Eigen::ArrayXd res = dphi + cd.coefficient[k].values * phip.values +
                             0.5 * vp.values * track[k].phi.values;
        ScalarField rf{cd.grid, std::move(res)};
        r[k] = hbar * norm_l2(rf) / norm_l2(track[k].phi);
    }
    return r;
}

ShortcutTerm build_ff_potential(const FlowFields& flow, double mass) {
    if (!flow.has_acceleration)
        throw DomainError("build_ff_potential: acceleration field not computed");
    check_core_valid(flow);
    const int nt = flow.times.n_samples();

    ShortcutTerm term(ShortcutKind::ff_potential, flow.grid, flow.times);
    term.gauge_note = "additive c(t) fixed so U_FF = 0 at the probability median";
    term.coefficient.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        if (k == 0 || k == nt - 1) {
            term.coefficient.emplace_back(flow.grid);
            continue;
        }
        ScalarField u = cumulative_integral(flow.a[k]);
        u.values *= -mass;
        const double anchor = interp_linear(u, flow.median[k]);
        u.values -= anchor;
        term.coefficient.push_back(std::move(u));
    }
    return term;
}

Eigen::ArrayXd dynamical_phase(const Eigen::ArrayXd& energies, const TimeMesh& mesh,
                               double hbar) {
    const int nt = mesh.n_samples();
    if (energies.size() != nt) throw DomainError("dynamical_phase: size mismatch");
    Eigen::ArrayXd alpha(nt);
    alpha[0] = 0.0;
    const double dt = mesh.dt();
    for (int k = 1; k < nt; ++k)
        alpha[k] = alpha[k - 1] - 0.5 * dt * (energies[k - 1] + energies[k]) / hbar;
    return alpha;
}

PhaseTrack build_companion_S(const FlowFields& flow, double mass, const ShortcutTerm& ff,
                             const Eigen::ArrayXd& energies, double hbar) {
    const int nt = flow.times.n_samples();
    const double dt = flow.times.dt();
    if (ff.kind != ShortcutKind::ff_potential)
        throw DomainError("build_companion_S: ff term required");

    // Un-gauged primitive B = m * integral(v).
    std::vector<ScalarField> B;
    B.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        ScalarField b = cumulative_integral(flow.v[k]);
        b.values *= mass;
        B.push_back(std::move(b));
    }

    // s'(t) from the Hamilton-Jacobi relation evaluated at the median, where
    // the ff gauge makes U_FF vanish.
    Eigen::ArrayXd sdot(nt);
    auto B_at = [&](int k) -> const Eigen::ArrayXd& {
        return B[std::clamp(k, 0, nt - 1)].values;
    };
    for (int k = 0; k < nt; ++k) {
        Eigen::ArrayXd dB =
            (-B_at(k + 2) + 8.0 * B_at(k + 1) - 8.0 * B_at(k - 1) + B_at(k - 2)) /
            (12.0 * dt);
        const double qm = flow.median[k];
        const double dB_med = interp_linear({flow.grid, std::move(dB)}, qm);
        const double v_med = interp_linear(flow.v[k], qm);
        sdot[k] = -(dB_med + 0.5 * mass * v_med * v_med);
    }
    Eigen::ArrayXd s(nt);
    s[0] = 0.0;
    for (int k = 1; k < nt; ++k) s[k] = s[k - 1] + 0.5 * dt * (sdot[k - 1] + sdot[k]);

    PhaseTrack phase(flow.times);
    phase.S.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        ScalarField Sk = B[k];
        Sk.values += s[k];
        phase.S.push_back(std::move(Sk));
    }
    phase.S_minus = phase.S[0].values[0];
    phase.S_plus = phase.S[nt - 1].values[0];
    phase.alpha = dynamical_phase(energies, flow.times, hbar);

    // Residual of dS/dt + (dS/dq)^2/2m + U_FF on the probability core, with
    // dS/dq = m v by construction.
    double uff_scale = 0.0;
    for (const auto& c : ff.coefficient)
        uff_scale = std::max(uff_scale, c.values.abs().maxCoeff());
    auto S_at = [&](int k) -> const Eigen::ArrayXd& {
        return phase.S[std::clamp(k, 0, nt - 1)].values;
    };
    for (int k = 1; k + 1 < nt; ++k) {
        Eigen::ArrayXd dS =
            (-S_at(k + 2) + 8.0 * S_at(k + 1) - 8.0 * S_at(k - 1) + S_at(k - 2)) /
            (12.0 * dt);
        Eigen::ArrayXd hj = dS + 0.5 * mass * flow.v[k].values * flow.v[k].values +
                            ff.coefficient[k].values;
        const auto [lo, hi] = flow.core[k];
        for (int i = lo; i <= hi; ++i)
            phase.hj_residual = std::max(phase.hj_residual, std::abs(hj[i]));
    }
    if (uff_scale > 0.0 && phase.hj_residual > 0.05 * uff_scale)
        throw GaugeError("build_companion_S: Hamilton-Jacobi residual " +
                         std::to_string(phase.hj_residual) + " exceeds 5% of max |U_FF|");
    return phase;
}

} // namespace flowsta
