#ifndef FLOWSTA_GRID_HPP
#define FLOWSTA_GRID_HPP

#include <Eigen/Dense>
#include <functional>

#include "flowsta/errors.hpp"

namespace flowsta {

/// Uniform 1-D spatial mesh. All discretized fields live on a Grid.
class Grid {
public:
    Grid(double q_min, double q_max, int n_points)
        : q_min_(q_min), q_max_(q_max), n_(n_points) {
        if (!(q_min < q_max))
            throw DomainError("Grid: q_min must be < q_max");
        if (n_points < 16)
            throw DomainError("Grid: need at least 16 points");
        h_ = (q_max - q_min) / static_cast<double>(n_points - 1);
    }

    double q_min() const { return q_min_; }
    double q_max() const { return q_max_; }
    int n_points() const { return n_; }
    double spacing() const { return h_; }
    double q(int i) const { return q_min_ + h_ * static_cast<double>(i); }

    Eigen::ArrayXd points() const {
        Eigen::ArrayXd qs(n_);
        for (int i = 0; i < n_; ++i) qs[i] = q(i);
        return qs;
    }

    bool operator==(const Grid& o) const {
        return q_min_ == o.q_min_ && q_max_ == o.q_max_ && n_ == o.n_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    /// Same endpoints, 2x resolution (2n-1 points); even indices coincide
    /// with this grid's points exactly.
    Grid refined() const { return Grid(q_min_, q_max_, 2 * n_ - 1); }

private:
    double q_min_, q_max_;
    int n_;
    double h_;
};

/// Uniform time mesh over the process window [0, tau]. `padding` is the
/// duration the protocol is held constant before t=0 and after t=tau.
class TimeMesh {
public:
    TimeMesh(double tau, int n_samples, double padding = 0.0)
        : tau_(tau), n_(n_samples), padding_(padding) {
        if (!(tau > 0.0)) throw DomainError("TimeMesh: tau must be > 0");
        if (n_samples < 5) throw DomainError("TimeMesh: need at least 5 samples");
        if (padding < 0.0) throw DomainError("TimeMesh: padding must be >= 0");
    }

    double tau() const { return tau_; }
    int n_samples() const { return n_; }
    double padding() const { return padding_; }
    double dt() const { return tau_ / static_cast<double>(n_ - 1); }
    /// t(0) == 0 and t(n-1) == tau exactly.
    double t(int k) const {
        return tau_ * (static_cast<double>(k) / static_cast<double>(n_ - 1));
    }

    Eigen::ArrayXd samples() const {
        Eigen::ArrayXd ts(n_);
        for (int k = 0; k < n_; ++k) ts[k] = t(k);
        return ts;
    }

    bool operator==(const TimeMesh& o) const {
        return tau_ == o.tau_ && n_ == o.n_ && padding_ == o.padding_;
    }

private:
    double tau_;
    int n_;
    double padding_;
};

/// Real-valued field sampled on a Grid.
struct ScalarField {
    Grid grid;
    Eigen::ArrayXd values;

    ScalarField(const Grid& g, Eigen::ArrayXd vals)
        : grid(g), values(std::move(vals)) {
        if (values.size() != grid.n_points())
            throw DomainError("ScalarField: length does not match grid");
    }
    explicit ScalarField(const Grid& g)
        : grid(g), values(Eigen::ArrayXd::Zero(g.n_points())) {}

    bool finite() const { return values.isFinite().all(); }
    void require_finite(const char* what) const {
        if (!finite()) throw DomainError(std::string(what) + ": non-finite entries");
    }
};

/// Complex-valued field sampled on a Grid (wavefunctions).
struct ComplexField {
    Grid grid;
    Eigen::ArrayXcd values;

    ComplexField(const Grid& g, Eigen::ArrayXcd vals)
        : grid(g), values(std::move(vals)) {
        if (values.size() != grid.n_points())
            throw DomainError("ComplexField: length does not match grid");
    }
    explicit ComplexField(const Grid& g)
        : grid(g), values(Eigen::ArrayXcd::Zero(g.n_points())) {}

    bool finite() const {
        return values.real().isFinite().all() && values.imag().isFinite().all();
    }
};

/// Sample a function of position on a grid.
inline ScalarField sample(const Grid& g, const std::function<double(double)>& f) {
    Eigen::ArrayXd v(g.n_points());
    for (int i = 0; i < g.n_points(); ++i) v[i] = f(g.q(i));
    return {g, std::move(v)};
}

} // namespace flowsta

#endif
