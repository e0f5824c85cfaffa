#include "mhdlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

// P_0..P_{m} at x.
std::vector<double> legendre_values(int m, double x)
{
    std::vector<double> p(static_cast<std::size_t>(m) + 1);
    p[0] = 1.0;
    if (m >= 1) p[1] = x;
    for (int j = 1; j < m; ++j) p[j + 1] = ((2.0 * j + 1.0) * x * p[j] - j * p[j - 1]) / (j + 1.0);
    return p;
}

GaussLegendre build_rule(int m)
{
    GaussLegendre g;
    g.order = m;
    g.x.resize(m);
    g.w.resize(m);
    for (int i = 0; i < m; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto p = legendre_values(m, x);
            const double dp = m * (x * p[m] - p[m - 1]) / (x * x - 1.0);
            const double dx = p[m] / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto p = legendre_values(m, x);
        const double dp = m * (x * p[m] - p[m - 1]) / (x * x - 1.0);
        g.x[i] = x;
        g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    g.bary.resize(m);
    for (int i = 0; i < m; ++i) g.bary[i] = ((i % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - g.x[i] * g.x[i]) * g.w[i]);

    // Q = W V⁻¹ with V_ij = P_j(x_i), (V⁻¹)_jk = (2j+1)/2 w_k P_j(x_k) by discrete orthogonality.
    std::vector<std::vector<double>> P(m);
    for (int i = 0; i < m; ++i) P[i] = legendre_values(m, g.x[i]);
    g.integrate.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int j = 0; j < m; ++j) {
                const double wij = j == 0 ? g.x[i] + 1.0 : (P[i][j + 1] - P[i][j - 1]) / (2.0 * j + 1.0);
                s += wij * (2.0 * j + 1.0) / 2.0 * g.w[k] * P[k][j];
            }
            g.integrate[static_cast<std::size_t>(i) * m + k] = s;
        }
    }
    g.diff.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        double diag = 0.0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = (g.bary[j] / g.bary[i]) / (g.x[i] - g.x[j]);
            g.diff[static_cast<std::size_t>(i) * m + j] = d;
            diag -= d;
        }
        g.diff[static_cast<std::size_t>(i) * m + i] = diag;
    }
    return g;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    require(order >= 2 && order <= 64, ErrorKind::invalid_argument, "Gauss-Legendre order must be in [2, 64]");
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendre>(build_rule(order));
    return *slot;
}

PanelGrid::PanelGrid(std::vector<double> breakpoints, int order) : order_(order), edges_(std::move(breakpoints))
{
    require(edges_.size() >= 2, ErrorKind::invalid_argument, "panel grid needs at least two breakpoints");
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        require(edges_[i + 1] > edges_[i], ErrorKind::invalid_argument, "breakpoints must increase strictly");
    const GaussLegendre& g = GaussLegendre::get(order);
    nodes_.reserve(panels() * order);
    weights_.reserve(panels() * order);
    for (std::size_t p = 0; p < panels(); ++p) {
        const double a = edges_[p], b = edges_[p + 1], h = 0.5 * (b - a);
        for (int i = 0; i < order; ++i) {
            nodes_.push_back(a + h * (g.x[i] + 1.0));
            weights_.push_back(h * g.w[i]);
        }
    }
}

PanelGrid PanelGrid::graded(double a, double b, std::vector<double> foci, double h_min, double h_max, int order)
{
    require(b > a && h_min > 0.0 && h_max >= h_min, ErrorKind::invalid_argument, "bad graded grid parameters");
    std::vector<double> special{a, b};
    for (double f : foci) {
        require(f >= a && f <= b, ErrorKind::invalid_argument, "focus outside grid interval");
        special.push_back(f);
    }
    std::sort(special.begin(), special.end());
    special.erase(std::unique(special.begin(), special.end(),
                              [&](double x, double y) { return std::abs(x - y) <= 1e-14 * (b - a); }),
                  special.end());
    auto is_focus = [&](double x) {
        return std::any_of(foci.begin(), foci.end(), [&](double f) { return std::abs(f - x) <= 1e-14 * (b - a); });
    };
    // Geometric sizes h_min·2^k capped by h_max, summing to at most `room`.
    auto ramp = [&](double room) {
        std::vector<double> sizes;
        double h = h_min, total = 0.0;
        while (total + h <= room && h <= h_max) {
            sizes.push_back(h);
            total += h;
            h *= 2.0;
        }
        return sizes;
    };
    std::vector<double> edges{special.front()};
    for (std::size_t s = 0; s + 1 < special.size(); ++s) {
        const double p = special[s], q = special[s + 1], len = q - p;
        const bool gl = is_focus(p), gr = is_focus(q);
        const std::vector<double> left = gl ? ramp(gr ? 0.5 * len : len) : std::vector<double>{};
        const std::vector<double> right = gr ? ramp(gl ? 0.5 * len : len) : std::vector<double>{};
        double sl = 0.0, sr = 0.0;
        for (double h : left) sl += h;
        for (double h : right) sr += h;
        double x = p;
        for (double h : left) edges.push_back(x += h);
        const double middle = len - sl - sr;
        if (middle > 1e-12 * len) {
            const auto m = static_cast<std::size_t>(std::ceil(middle / h_max - 1e-9));
            for (std::size_t i = 1; i < m; ++i) edges.push_back(p + sl + middle * double(i) / double(m));
            edges.push_back(p + sl + middle);
        }
        x = q - sr;
        for (auto it = right.rbegin(); it != right.rend(); ++it) {
            if (x > edges.back() + 1e-15 * len) edges.push_back(x);
            x += *it;
        }
        if (q - edges.back() > 1e-12 * len) edges.push_back(q);
        else edges.back() = q;
    }
    return PanelGrid(std::move(edges), order);
}

cplx PanelGrid::integral(std::span<const cplx> f) const
{
    cplx s{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f[i];
    return s;
}

cplx PanelGrid::integral(std::span<const cplx> f, double from, double to) const
{
    const double sign = from <= to ? 1.0 : -1.0;
    const auto [first, last] = node_range(std::min(from, to), std::max(from, to));
    cplx s{};
    for (std::size_t i = first; i < last; ++i) s += weights_[i] * f[i];
    return sign * s;
}

std::pair<std::size_t, std::size_t> PanelGrid::node_range(double from, double to) const
{
    const std::size_t a = breakpoint_index(from), b = breakpoint_index(to);
    return {a * order_, b * order_};
}

std::size_t PanelGrid::breakpoint_index(double y) const
{
    const double tol = 1e-13 * std::max({1.0, std::abs(lo()), std::abs(hi())});
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (std::abs(edges_[i] - y) <= tol) return i;
    fail(ErrorKind::invalid_argument, "point " + std::to_string(y) + " is not a breakpoint");
}

std::vector<cplx> PanelGrid::cumulative(std::span<const cplx> f, double y_ref) const
{
    const GaussLegendre& g = GaussLegendre::get(order_);
    const std::size_t m = static_cast<std::size_t>(order_);
    std::vector<cplx> out(nodes_.size());
    std::vector<cplx> at_edge(edges_.size());
    cplx run{};
    for (std::size_t p = 0; p < panels(); ++p) {
        const double h = 0.5 * (edges_[p + 1] - edges_[p]);
        at_edge[p] = run;
        cplx total{};
        for (std::size_t i = 0; i < m; ++i) {
            cplx s{};
            for (std::size_t k = 0; k < m; ++k) s += g.integrate[i * m + k] * f[p * m + k];
            out[p * m + i] = run + h * s;
            total += g.w[i] * f[p * m + i];
        }
        run += h * total;
    }
    at_edge.back() = run;
    const cplx ref = at_edge[breakpoint_index(y_ref)];
    for (cplx& z : out) z -= ref;
    return out;
}

std::vector<cplx> PanelGrid::differentiate(std::span<const cplx> f) const
{
    const GaussLegendre& g = GaussLegendre::get(order_);
    const std::size_t m = static_cast<std::size_t>(order_);
    std::vector<cplx> out(nodes_.size());
    for (std::size_t p = 0; p < panels(); ++p) {
        const double scale = 2.0 / (edges_[p + 1] - edges_[p]);
        for (std::size_t i = 0; i < m; ++i) {
            cplx s{};
            for (std::size_t k = 0; k < m; ++k) s += g.diff[i * m + k] * f[p * m + k];
            out[p * m + i] = scale * s;
        }
    }
    return out;
}

cplx PanelGrid::interpolate(std::span<const cplx> f, double y) const
{
    require(y >= lo() - 1e-12 && y <= hi() + 1e-12, ErrorKind::invalid_argument, "interpolation point outside grid");
    auto it = std::upper_bound(edges_.begin(), edges_.end(), y);
    std::size_t p = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges_.begin() - 1, 0));
    p = std::min(p, panels() - 1);
    const GaussLegendre& g = GaussLegendre::get(order_);
    const double a = edges_[p], b = edges_[p + 1];
    const double x = (2.0 * y - a - b) / (b - a);
    cplx num{};
    double den = 0.0;
    const std::size_t m = static_cast<std::size_t>(order_);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = x - g.x[i];
        if (d == 0.0) return f[p * m + i];
        const double c = g.bary[i] / d;
        num += c * f[p * m + i];
        den += c;
    }
    return num / den;
}

LineRule composite_gauss(double a, double b, std::size_t panels, int order)
{
    require(panels >= 1 && b > a, ErrorKind::invalid_argument, "bad composite rule");
    const GaussLegendre& g = GaussLegendre::get(order);
    LineRule r;
    const double len = (b - a) / double(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + len * double(p), h = 0.5 * len;
        for (int i = 0; i < order; ++i) {
            r.x.push_back(lo + h * (g.x[i] + 1.0));
            r.w.push_back(h * g.w[i]);
        }
    }
    return r;
}

}  // namespace mhdlab
