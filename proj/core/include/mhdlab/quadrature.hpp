#pragma once

#include <span>
#include <vector>

#include "mhdlab/grid.hpp"

namespace mhdlab {

/// Gauss-Legendre rule on [-1, 1] with its spectral integration and differentiation matrices.
struct GaussLegendre {
    int order = 0;
    std::vector<double> x, w;
    std::vector<double> bary;       // barycentric weights
    std::vector<double> integrate;  // row-major order×order, (Q f)_i = ∫_{-1}^{x_i} p_f
    std::vector<double> diff;       // row-major order×order, (D f)_i = p_f′(x_i)

    /// Cached and immutable after first use; safe from any thread.
    static const GaussLegendre& get(int order);
};

/// Composite Gauss-Legendre grid on [a, b]. Panels are ascending and contiguous.
class PanelGrid {
public:
    explicit PanelGrid(std::vector<double> breakpoints, int order = 16);

    /// Panels shrink geometrically (ratio 2) toward each focus point down to h_min and are at most h_max elsewhere.
    /// Foci and the two ends become breakpoints.
    static PanelGrid graded(double a, double b, std::vector<double> foci, double h_min, double h_max, int order = 16);

    int order() const noexcept { return order_; }
    std::size_t panels() const noexcept { return edges_.size() - 1; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double lo() const noexcept { return edges_.front(); }
    double hi() const noexcept { return edges_.back(); }
    std::span<const double> edges() const noexcept { return edges_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    cplx integral(std::span<const cplx> f) const;
    /// ∫ over [from, to] where both are breakpoints.
    cplx integral(std::span<const cplx> f, double from, double to) const;
    /// (∫_{y_ref}^{y_j} f)_j for all nodes; y_ref must be a breakpoint.
    std::vector<cplx> cumulative(std::span<const cplx> f, double y_ref) const;
    std::vector<cplx> differentiate(std::span<const cplx> f) const;
    /// Polynomial interpolant of the panel containing y.
    cplx interpolate(std::span<const cplx> f, double y) const;
    /// Index of the breakpoint equal to y (to 1e-13 relative); throws otherwise.
    std::size_t breakpoint_index(double y) const;
    /// Node index range [first, last) of nodes inside [from, to] (breakpoints).
    std::pair<std::size_t, std::size_t> node_range(double from, double to) const;

private:
    int order_;
    std::vector<double> edges_, nodes_, weights_;
};

/// Composite Gauss-Legendre rule with `panels` equal panels on [a, b].
struct LineRule {
    std::vector<double> x, w;
};
LineRule composite_gauss(double a, double b, std::size_t panels, int order = 16);

}  // namespace mhdlab
