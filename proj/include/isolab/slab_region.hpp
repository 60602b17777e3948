#ifndef ISOLAB_SLAB_REGION_HPP
#define ISOLAB_SLAB_REGION_HPP

#include <vector>

namespace isolab {

// One arc of the circle, start in [0, L), length in (0, L).  start+length
// may exceed L, in which case the arc wraps through 0.
struct Arc {
    double start;
    double length;
    double end() const { return start + length; } // may exceed L
};

// A rotationally symmetric region: a disjoint union of arcs on the circle
// of circumference L, each arc standing for (a,b) x S^{n-1}.  Canonical
// form: arcs sorted by start, pairwise disjoint, overlaps within 1e-13
// merged.  The region must be neither empty nor the full circle.
class SlabRegion {
  public:
    SlabRegion(double circumference, std::vector<Arc> arcs);

    // Single arc from a to b > a (b - a < L); positions are taken mod L.
    static SlabRegion interval(double circumference, double a, double b);

    double circumference() const { return circ_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    bool singleArc() const { return arcs_.size() == 1; }
    double totalLength() const;

    // Boundary slice positions, two per arc, reduced mod L.
    std::vector<double> endpoints() const;

    SlabRegion shifted(double s) const;
    SlabRegion reflected(double center) const; // r -> 2*center - r
    SlabRegion complement() const;

    // Arc-set symmetric difference; may be empty or full (only reachable
    // through this algebra, never through the public constructors).
    SlabRegion symmetricDifferenceWith(const SlabRegion& other) const;

    bool empty() const { return arcs_.empty(); }

  private:
    SlabRegion() = default;
    static SlabRegion fromSegmentsUnchecked(double L, std::vector<Arc> arcs);
    void canonicalize();

    double circ_ = 0.0;
    std::vector<Arc> arcs_;
};

} // namespace isolab

#endif
