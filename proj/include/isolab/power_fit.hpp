#ifndef ISOLAB_POWER_FIT_HPP
#define ISOLAB_POWER_FIT_HPP

#include <utility>
#include <vector>

namespace isolab {

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;    // log10 units
    double maxResidual = 0.0;  // max |log10 y - fit| over the samples
    int used = 0;
};

// Least-squares line through (log10 x, log10 y); entries with x <= 0 or
// y <= 0 are ignored.
PowerFit fitLogLog(const std::vector<double>& x, const std::vector<double>& y);

// Separate log-log fits per decade of x; returns (log10 decade center, slope),
// decades with fewer than three positive samples are skipped.
std::vector<std::pair<double, double>> perDecadeSlopes(const std::vector<double>& x,
                                                       const std::vector<double>& y);

} // namespace isolab

#endif
