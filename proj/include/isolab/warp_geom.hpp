#ifndef ISOLAB_WARP_GEOM_HPP
#define ISOLAB_WARP_GEOM_HPP

#include "isolab/slab_region.hpp"
#include "isolab/warped_product.hpp"

namespace isolab {

// Weighted volume of a slab region: sigma_{n-1} * sum_i int_{a_i}^{b_i} phi^{n-1} dr.
double slabVolume(const WarpedProduct& M, const SlabRegion& E);

// Perimeter of a slab region: sigma_{n-1} * sum over boundary slices of phi^{n-1}.
double slabPerimeter(const WarpedProduct& M, const SlabRegion& E);

// Mean curvature of the slice {r0} x S^{n-1} with respect to d/dr.
double sliceMeanCurvature(const WarpedProduct& M, double r0);

// Volume of the arc-set symmetric difference |E delta F|.
double symmetricDifference(const WarpedProduct& M, const SlabRegion& E, const SlabRegion& F);

// The unique b > a with volume of (a,b) x S^{n-1} equal to V.
// Throws ConfigError when V is outside (0, |M|).
double solveVolumeEndpoint(const WarpedProduct& M, double a, double V);

// slabPerimeter(E) - slabPerimeter(ref) evaluated without cancellation by
// pairing nearby boundary slices; E and ref must have equally many arcs
// with endpoints within maxShift of each other.
double slabPerimeterDelta(const WarpedProduct& M, const SlabRegion& E,
                          const SlabRegion& ref, double maxShift = 0.5);

} // namespace isolab

#endif
