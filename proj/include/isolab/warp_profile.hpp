#ifndef ISOLAB_WARP_PROFILE_HPP
#define ISOLAB_WARP_PROFILE_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace isolab {

enum class WarpFamily { Constant, FlatBump, AnalyticPower };

std::string toString(WarpFamily f);
WarpFamily warpFamilyFromString(const std::string& s);

// Periodic warping function phi : R -> (1/2, 2) of the metric
// dr^2 + phi(r)^2 g_{S^{n-1}} on S^1(R) x S^{n-1}.  Three families:
//
//   Constant       phi == 1 (flat product metric)
//   FlatBump       phi == 1 away from r = 1; a smooth dip of depth 1/k on
//                  |r-1| < 1/k whose minimum at r = 1 is flat to infinite
//                  order: phi(1+x) - phi(1) ~ (1/k) exp(-1/(k|x|)).
//   AnalyticPower  phi(r) = 1 - eps + eps sin^{2m}((r-1)/R), analytic with
//                  minima of order 2m at r = 1 + j*pi*R.
//
// All evaluators wrap their argument first, so phi(r + 2*pi*R) == phi(r)
// holds exactly.
class WarpProfile {
  public:
    static WarpProfile constant(double circle_radius);
    static WarpProfile flatBump(double circle_radius, int k);
    static WarpProfile analyticPower(double circle_radius, int m, double eps = 0.25);

    WarpFamily family() const { return family_; }
    double circleRadius() const { return radius_; }
    double period() const { return period_; } // 2*pi*R
    int flatteningIndex() const { return k_; }
    int touchingOrder() const { return m_; }
    double depth() const;     // 1 - min(phi)
    double minPosition() const { return 1.0; }
    double minValue() const;  // phi at the minimum (1 for Constant)

    double phi(double r) const;
    double dphi(double r) const;
    double ddphi(double r) const;

    // Exact sign of phi'(r); bisection refinement relies on this where the
    // derivative value itself underflows (deep in a FlatBump well).
    int derivSign(double r) const;

    // phi(c+u) - phi(c) evaluated without cancellation.  Near a degenerate
    // minimum the direct difference underflows long before the true gap
    // does; defect pipelines must use this path.
    double gapAt(double c, double u) const;

    // phi(1+x) - phi(1); the quantity driving the perimeter defect.
    double gapFromMin(double x) const { return gapAt(1.0, x); }

    // Positions in [0, period) where the profile changes character (bump
    // edges, extrema).  Integrators split at these points; a narrow bump
    // inside a long panel is otherwise invisible to adaptive refinement.
    std::vector<double> features() const;

    nlohmann::json toJson() const;
    static WarpProfile fromJson(const nlohmann::json& j);

  private:
    WarpProfile() = default;

    double wrap(double x) const; // reduce to [-period/2, period/2]

    WarpFamily family_ = WarpFamily::Constant;
    double radius_ = 1.0;
    double period_ = 0.0;
    int k_ = 0;
    int m_ = 0;
    double eps_ = 0.0;
};

// (p0 + d)^e - p0^e without cancellation (e >= 1).
double powDiff(double p0, double d, int e);

// Integer power by repeated multiplication.
double ipow(double x, int e);

} // namespace isolab

#endif
