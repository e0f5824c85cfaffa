#include "mhdlab/fit.hpp"

#include <cmath>

#include "mhdlab/errors.hpp"

namespace mhdlab {

LinearFit fit_line(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::invalid_argument, "fit needs >= 2 paired samples");
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::invalid_argument, "fit abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

}  // namespace mhdlab
