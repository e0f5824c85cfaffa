#pragma once

#include <span>
#include <vector>

namespace mhdlab {

/// Least-squares line y ≈ intercept + slope·x; residual is the RMS deviation.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Value at x = 0 of the polynomial through (x_k, y_k) (Neville's scheme).
template <class T>
T extrapolate_to_zero(std::span<const double> x, std::vector<T> y)
{
    const std::size_t m = x.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

}  // namespace mhdlab
