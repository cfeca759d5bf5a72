#include "flowsta/flow_fields.hpp"

#include <algorithm>
#include <cmath>

#include "flowsta/calculus.hpp"

namespace flowsta {

namespace {

void validate_track(const DensityTrack& track) {
    const int nt = track.times.n_samples();
    if (static_cast<int>(track.rho.size()) != nt)
        throw DomainError("DensityTrack: sample count does not match TimeMesh");
    if (!track.phi.empty() && static_cast<int>(track.phi.size()) != nt)
        throw DomainError("DensityTrack: phi sample count mismatch");
    for (const auto& r : track.rho) {
        if (r.grid != track.grid) throw DomainError("DensityTrack: grid mismatch");
        r.require_finite("DensityTrack");
        if ((r.values < 0.0).any())
            throw DomainError("DensityTrack: negative density");
    }
    if (track.kind != DensityKind::classical_shell) {
        for (const auto& r : track.rho) {
            const double mass = integrate(r);
            if (std::abs(mass - 1.0) > 1e-8)
                throw DomainError("DensityTrack: density not normalized (mass=" +
                                  std::to_string(mass) + ")");
        }
    }
}

/// 4th-order time-derivative stencil across snapshots with clamped ghost
/// samples (exact: the protocol is frozen outside the window).
Eigen::ArrayXd time_stencil(const std::vector<ScalarField>& f, int k, double dt) {
    const int n = static_cast<int>(f.size());
    auto at = [&](int i) -> const Eigen::ArrayXd& {
        return f[std::clamp(i, 0, n - 1)].values;
    };
    return (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * dt);
}

Eigen::ArrayXd series_stencil(const Eigen::ArrayXd& s, double dt) {
    const int n = static_cast<int>(s.size());
    Eigen::ArrayXd d(n);
    auto at = [&](int i) { return s[std::clamp(i, 0, n - 1)]; };
    for (int k = 0; k < n; ++k)
        d[k] = (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * dt);
    return d;
}

ScalarField lagrange4_slice(const std::vector<ScalarField>& f, const Grid& g,
                            const TimeMesh& mesh, double t) {
    const int n = mesh.n_samples();
    if (t <= 0.0 || t >= mesh.tau()) return ScalarField(g); // zero field
    const double dt = mesh.dt();
    int k0 = static_cast<int>(std::floor(t / dt)) - 1;
    k0 = std::clamp(k0, 0, n - 4);
    double w[4];
    for (int i = 0; i < 4; ++i) {
        w[i] = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            w[i] *= (t - mesh.t(k0 + j)) / (mesh.t(k0 + i) - mesh.t(k0 + j));
        }
    }
    Eigen::ArrayXd out = w[0] * f[k0].values + w[1] * f[k0 + 1].values +
                         w[2] * f[k0 + 2].values + w[3] * f[k0 + 3].values;
    return {g, std::move(out)};
}

} // namespace

DensityTrack density_track_from_snapshots(std::vector<Snapshot> snaps, const TimeMesh& mesh) {
    if (snaps.empty()) throw DomainError("density_track_from_snapshots: empty input");
    DensityTrack track(snaps.front().phi.grid, mesh);
    track.kind = DensityKind::quantum_eigenstate;
    for (auto& s : snaps) {
        ScalarField rho{s.phi.grid, s.phi.values * s.phi.values};
        track.rho.push_back(std::move(rho));
        track.phi.push_back(std::move(s.phi));
    }
    validate_track(track);
    return track;
}

DensityTrack density_track_from_eigenstates(const std::function<Snapshot(double)>& factory,
                                            const Grid& grid, const TimeMesh& mesh) {
    std::vector<Snapshot> snaps;
    snaps.reserve(mesh.n_samples());
    for (int k = 0; k < mesh.n_samples(); ++k) {
        Snapshot s = factory(mesh.t(k));
        if (s.phi.grid != grid)
            throw DomainError("density_track_from_eigenstates: grid mismatch");
        s.t = mesh.t(k);
        snaps.push_back(std::move(s));
    }
    return density_track_from_snapshots(std::move(snaps), mesh);
}

std::vector<ScalarField> integrated_distribution(const DensityTrack& track) {
    validate_track(track);
    std::vector<ScalarField> out;
    out.reserve(track.rho.size());
    for (const auto& r : track.rho) out.push_back(cumulative_integral(r));
    return out;
}

FlowFields velocity_field(const DensityTrack& track, const FlowOptions& opts) {
    validate_track(track);
    if (!(opts.floor_rel > 0.0)) throw DomainError("velocity_field: floor must be > 0");
    const int nt = track.times.n_samples();
    const int nq = track.grid.n_points();
    const double dt = track.times.dt();

    FlowFields flow(track.grid, track.times);
    flow.v.reserve(nt);
    flow.valid.reserve(nt);
    flow.core.reserve(nt);

    for (int k = 0; k < nt; ++k) {
        const Eigen::ArrayXd& rho = track.rho[k].values;
        const double floor = opts.floor_rel * rho.maxCoeff();

        ScalarField vfield(track.grid);
        std::vector<std::uint8_t> mask(nq, 0);

        if (k != 0 && k != nt - 1) {
            // dI/dt = cumulative integral of d(rho)/dt (the operations commute);
            // the h^2-corrected cumulative keeps the ratio accurate near tails.
            Eigen::ArrayXd drho = time_stencil(track.rho, k, dt);
            ScalarField dIdt = cumulative_integral_c4({track.grid, std::move(drho)});
            for (int i = 0; i < nq; ++i) {
                if (rho[i] >= floor) {
                    double vi = -dIdt.values[i] / rho[i];
                    if (std::abs(vi) > opts.v_max) {
                        vi = std::copysign(opts.v_max, vi);
                        ++flow.cap_events;
                    }
                    vfield.values[i] = vi;
                    mask[i] = 1;
                }
            }
        } else {
            // The schedule gate guarantees vanishing endpoint rates, so the
            // endpoint slices are identically zero.
            for (int i = 0; i < nq; ++i) mask[i] = rho[i] >= floor;
        }

        // Constant extrapolation outside the valid range; linear fill across
        // any interior masked gap.
        int lo = 0, hi = nq - 1;
        while (lo < nq && !mask[lo]) ++lo;
        while (hi >= 0 && !mask[hi]) --hi;
        if (lo > hi)
            throw DomainError("velocity_field: no density above floor at sample " +
                              std::to_string(k));
        for (int i = 0; i < lo; ++i) vfield.values[i] = vfield.values[lo];
        for (int i = hi + 1; i < nq; ++i) vfield.values[i] = vfield.values[hi];
        for (int i = lo + 1; i < hi; ++i) {
            if (mask[i]) continue;
            int j = i;
            while (!mask[j]) ++j;
            const double qa = track.grid.q(i - 1), qb = track.grid.q(j);
            for (int m = i; m < j; ++m) {
                const double w = (track.grid.q(m) - qa) / (qb - qa);
                vfield.values[m] = (1.0 - w) * vfield.values[i - 1] + w * vfield.values[j];
            }
            i = j;
        }

        // Probability core: the index range holding all but 1e-6 of the mass.
        ScalarField I = cumulative_integral(track.rho[k]);
        const double total = I.values[nq - 1];
        int clo = 0, chi = nq - 1;
        while (clo + 1 < nq && I.values[clo + 1] < 5e-7 * total) ++clo;
        while (chi - 1 > 0 && I.values[chi - 1] > (1.0 - 5e-7) * total) --chi;

        flow.v.push_back(std::move(vfield));
        flow.valid.push_back(std::move(mask));
        flow.core.emplace_back(clo, chi);
    }
    return flow;
}

FlowFields acceleration_field(FlowFields flow) {
    const int nt = flow.times.n_samples();
    const int nq = flow.grid.n_points();
    const double dt = flow.times.dt();
    if (static_cast<int>(flow.v.size()) != nt)
        throw DomainError("acceleration_field: velocity not computed");

    flow.a.clear();
    flow.a.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        ScalarField afield(flow.grid);
        if (k != 0 && k != nt - 1) {
            ScalarField vp = derivative(flow.v[k], DiffScheme::central4);
            Eigen::ArrayXd vdot = time_stencil(flow.v, k, dt);
            afield.values = vp.values * flow.v[k].values + vdot;

            const auto& mask = flow.valid[k];
            int lo = 0, hi = nq - 1;
            while (lo < nq && !mask[lo]) ++lo;
            while (hi >= 0 && !mask[hi]) --hi;
            for (int i = 0; i < lo; ++i) afield.values[i] = afield.values[lo];
            for (int i = hi + 1; i < nq; ++i) afield.values[i] = afield.values[hi];
        }
        flow.a.push_back(std::move(afield));
    }
    flow.has_acceleration = true;
    return flow;
}

ScalarField FlowFields::v_at(double t) const {
    return lagrange4_slice(v, grid, times, t);
}

ScalarField FlowFields::a_at(double t) const {
    if (!has_acceleration) throw DomainError("FlowFields: acceleration not computed");
    return lagrange4_slice(a, grid, times, t);
}

NodeFluxReport node_flux_report(const DensityTrack& track, const FlowFields& flow) {
    validate_track(track);
    if (track.kind != DensityKind::quantum_eigenstate || track.phi.empty())
        throw DomainError("node_flux_report: needs a quantum track with signed phi");
    const int nt = track.times.n_samples();
    const int nq = track.grid.n_points();
    const double dt = track.times.dt();

    // Locate nodes per time sample by sign changes between above-floor points.
    std::vector<std::vector<double>> node_pos(nt);
    for (int k = 0; k < nt; ++k) {
        const auto& phi = track.phi[k].values;
        const double floor = 1e-8 * phi.abs().maxCoeff();
        int prev = -1;
        for (int i = 0; i < nq; ++i) {
            if (std::abs(phi[i]) <= floor) continue;
            if (prev >= 0 && phi[i] * phi[prev] < 0.0) {
                // Linear root between the bracketing above-floor samples.
                const double qa = track.grid.q(prev), qb = track.grid.q(i);
                const double fa = phi[prev], fb = phi[i];
                node_pos[k].push_back(qa - fa * (qb - qa) / (fb - fa));
            }
            prev = i;
        }
        if (node_pos[k].size() != node_pos[0].size())
            throw TopologyError("node_flux_report: node count changed over time");
    }

    const int n_nodes = static_cast<int>(node_pos[0].size());
    NodeFluxReport rep;
    rep.nodes.resize(n_nodes);
    rep.internode_prob = Eigen::ArrayXXd(n_nodes + 1, nt);

    // dI/dt slices (corrected cumulative of the time stencil), splined in q.
    std::vector<ScalarField> dIdt;
    dIdt.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        if (k == 0 || k == nt - 1) {
            dIdt.emplace_back(track.grid);
        } else {
            Eigen::ArrayXd drho = time_stencil(track.rho, k, dt);
            dIdt.push_back(cumulative_integral_c4({track.grid, std::move(drho)}));
        }
    }

    for (int v = 0; v < n_nodes; ++v) {
        auto& series = rep.nodes[v];
        series.q = Eigen::ArrayXd(nt);
        for (int k = 0; k < nt; ++k) series.q[k] = node_pos[k][v];
        series.u = series_stencil(series.q, dt);
        series.flux = Eigen::ArrayXd(nt);
        for (int k = 0; k < nt; ++k) {
            CubicSpline dI(dIdt[k]);
            CubicSpline rho(track.rho[k]);
            series.flux[k] = -(dI(series.q[k]) + rho(series.q[k]) * series.u[k]);
            rep.max_abs_flux = std::max(rep.max_abs_flux, std::abs(series.flux[k]));
        }
    }

    for (int k = 0; k < nt; ++k) {
        ScalarField I = cumulative_integral(track.rho[k]);
        CubicSpline Is(I);
        double prev = 0.0;
        for (int v = 0; v < n_nodes; ++v) {
            const double here = Is(node_pos[k][v]);
            rep.internode_prob(v, k) = here - prev;
            prev = here;
        }
        rep.internode_prob(n_nodes, k) = I.values[nq - 1] - prev;
    }
    for (int r = 0; r < n_nodes + 1; ++r) {
        const double p0 = rep.internode_prob(r, 0);
        for (int k = 0; k < nt; ++k)
            rep.max_prob_drift =
                std::max(rep.max_prob_drift, std::abs(rep.internode_prob(r, k) - p0));
    }

    const bool ok = rep.max_abs_flux <= 1e-6 && rep.max_prob_drift <= 1e-6;
    rep.verdict = ok ? NodeFluxReport::Verdict::no_flux_ok
                     : NodeFluxReport::Verdict::flux_detected;
    if (ok && flow.cap_events > 0)
        throw ResolutionError(
            "node_flux_report: velocity caps fired on a no-flux track; raise the "
            "density floor or refine the grid");
    return rep;
}

} // namespace flowsta
