#include "isolab/power_fit.hpp"

#include <cmath>
#include <limits>

#include "isolab/errors.hpp"

namespace isolab {

PowerFit fitLogLog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("fitLogLog: size mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log10(x[i]), ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw ConfigError("fitLogLog: need at least two positive samples");
    PowerFit f;
    f.used = n;
    const double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double r = std::log10(y[i]) - (f.slope * std::log10(x[i]) + f.intercept);
        f.maxResidual = std::max(f.maxResidual, std::abs(r));
    }
    return f;
}

std::vector<std::pair<double, double>> perDecadeSlopes(const std::vector<double>& x,
                                                       const std::vector<double>& y) {
    std::vector<std::pair<double, double>> out;
    if (x.empty()) return out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : x)
        if (v > 0.0) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > 0.0)) return out;
    const int first = int(std::floor(std::log10(lo) + 1e-12));
    const int last = int(std::ceil(std::log10(hi) - 1e-12));
    for (int dec = first; dec < last; ++dec) {
        const double dlo = std::pow(10.0, dec) * (1.0 - 1e-10);
        const double dhi = std::pow(10.0, dec + 1) * (1.0 + 1e-10);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] >= dlo && x[i] <= dhi && y[i] > 0.0) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        if (xs.size() < 3) continue;
        out.emplace_back(dec + 0.5, fitLogLog(xs, ys).slope);
    }
    return out;
}

} // namespace isolab
