#include "isolab/warp_geom.hpp"

#include <algorithm>
#include <cmath>

#include "isolab/errors.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

double slabVolume(const WarpedProduct& M, const SlabRegion& E) {
    double v = 0.0;
    for (const Arc& a : E.arcs()) v += M.volumeBetween(a.start, a.end());
    return v;
}

double slabPerimeter(const WarpedProduct& M, const SlabRegion& E) {
    double p = 0.0;
    for (double r : E.endpoints()) p += M.sliceArea(r);
    return p;
}

double sliceMeanCurvature(const WarpedProduct& M, double r0) {
    const WarpProfile& pr = M.profile();
    return (M.dimension() - 1) * pr.dphi(r0) / pr.phi(r0);
}

double symmetricDifference(const WarpedProduct& M, const SlabRegion& E, const SlabRegion& F) {
    const SlabRegion d = E.symmetricDifferenceWith(F);
    if (d.empty()) return 0.0;
    return slabVolume(M, d);
}

double solveVolumeEndpoint(const WarpedProduct& M, double a, double V) {
    if (!(V > 0.0) || !(V < M.totalVolume()))
        throw ConfigError("target volume must lie strictly between 0 and |M|");
    const double L = M.period();
    const int e = M.dimension() - 1;
    const WarpProfile& pr = M.profile();
    const double sigma = M.sphereArea();

    // Volume of (a, b) is strictly increasing in b with slope
    // sigma*phi(b)^{n-1} >= sigma*(1/2)^{n-1} > 0, so bisection brackets a
    // unique root; a Newton polish on the residual interval then matches
    // the volume to ~1e-14 relative.
    double lo = a, hi = a + L;
    double flo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = M.volumeBetween(a, mid);
        if (fm < V) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double b = lo;
    double deficit = V - flo; // volume still missing beyond b
    for (int it = 0; it < 60; ++it) {
        const double slope = sigma * ipow(pr.phi(b), e);
        const double step = deficit / slope;
        b += step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(b))) break;
        deficit -= sigma * quad::integrate(
                       [&](double r) { return ipow(pr.phi(r), e); }, b - step, b);
        if (std::abs(deficit) < 1e-15 * std::max(1.0, V)) break;
    }
    return b;
}

double slabPerimeterDelta(const WarpedProduct& M, const SlabRegion& E,
                          const SlabRegion& ref, double maxShift) {
    std::vector<double> pe = E.endpoints();
    std::vector<double> pr = ref.endpoints();
    if (pe.size() != pr.size())
        throw ContractError("perimeter delta needs equally many boundary slices");
    std::sort(pe.begin(), pe.end());
    std::sort(pr.begin(), pr.end());
    const double L = M.period();
    const int e = M.dimension() - 1;
    const WarpProfile& prof = M.profile();
    double delta = 0.0;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        double u = std::remainder(pe[i] - pr[i], L);
        if (std::abs(u) > maxShift)
            throw ContractError("perimeter delta: endpoints too far apart to pair");
        const double p0 = prof.phi(pr[i]);
        delta += powDiff(p0, prof.gapAt(pr[i], u), e);
    }
    return M.sphereArea() * delta;
}

} // namespace isolab
