#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace saddlelab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // root-mean-square residual of the fit
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace saddlelab
