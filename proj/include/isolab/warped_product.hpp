#ifndef ISOLAB_WARPED_PRODUCT_HPP
#define ISOLAB_WARPED_PRODUCT_HPP

#include <json.hpp>

#include "isolab/warp_profile.hpp"

namespace isolab {

// The manifold S^1(R) x S^{n-1} with metric dr^2 + phi(r)^2 g_{S^{n-1}}.
// Slices {r} x S^{n-1} have area sphereArea()*phi(r)^{n-1}; the volume
// element is sphereArea()*phi(r)^{n-1} dr.
class WarpedProduct {
  public:
    WarpedProduct(int n, WarpProfile profile);

    int dimension() const { return n_; }
    double circleRadius() const { return profile_.circleRadius(); }
    double period() const { return profile_.period(); }
    const WarpProfile& profile() const { return profile_; }

    double sphereArea() const { return sphere_area_; } // sigma_{n-1}
    double totalVolume() const { return total_volume_; }

    double sliceArea(double r) const;

    // sigma_{n-1} * int_a^b phi^{n-1} dr (signed, period-reduced).
    double volumeBetween(double a, double b) const;

    nlohmann::json toJson() const;
    static WarpedProduct fromJson(const nlohmann::json& j);

  private:
    int n_;
    WarpProfile profile_;
    double sphere_area_;
    double period_volume_;
    double total_volume_;
};

double unitSphereArea(int n); // sigma_{n-1} = area of the unit S^{n-1}

} // namespace isolab

#endif
