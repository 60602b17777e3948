#include "isolab/slab_region.hpp"

#include <algorithm>
#include <cmath>

#include "isolab/errors.hpp"

namespace isolab {

namespace {

// Arcs closer than this are merged; keeps interval algebra free of
// spurious zero-length components.
constexpr double kMergeTol = 1e-13;

double wrapPos(double x, double L) {
    double w = std::fmod(x, L);
    if (w < 0.0) w += L;
    if (w >= L) w -= L;
    return w;
}

// Split into non-wrapping [lo, hi) segments on [0, L).
std::vector<std::pair<double, double>> toSegments(const std::vector<Arc>& arcs, double L) {
    std::vector<std::pair<double, double>> s;
    for (const Arc& a : arcs) {
        if (a.end() <= L) {
            s.emplace_back(a.start, a.end());
        } else {
            s.emplace_back(a.start, L);
            s.emplace_back(0.0, a.end() - L);
        }
    }
    std::sort(s.begin(), s.end());
    return s;
}

bool covers(const std::vector<std::pair<double, double>>& segs, double x) {
    for (const auto& [lo, hi] : segs)
        if (x >= lo && x < hi) return true;
    return false;
}

} // namespace

SlabRegion::SlabRegion(double circumference, std::vector<Arc> arcs) {
    if (!(circumference > 0.0)) throw ConfigError("circumference must be positive");
    circ_ = circumference;
    arcs_ = std::move(arcs);
    if (arcs_.empty()) throw ConfigError("slab region must contain at least one arc");
    canonicalize();
    const double len = totalLength();
    if (!(len > 0.0) || len >= circ_ - kMergeTol)
        throw ConfigError("slab region must cover a proper nonempty part of the circle");
}

SlabRegion SlabRegion::interval(double circumference, double a, double b) {
    if (!(b > a)) throw ConfigError("interval requires b > a");
    if (!(b - a < circumference)) throw ConfigError("interval longer than the circle");
    return SlabRegion(circumference, {Arc{a, b - a}});
}

SlabRegion SlabRegion::fromSegmentsUnchecked(double L, std::vector<Arc> arcs) {
    SlabRegion r;
    r.circ_ = L;
    r.arcs_ = std::move(arcs);
    r.canonicalize();
    return r;
}

void SlabRegion::canonicalize() {
    const double L = circ_;
    for (Arc& a : arcs_) {
        if (!std::isfinite(a.start) || !std::isfinite(a.length))
            throw ConfigError("arc coordinates must be finite");
        if (!(a.length > 0.0) || a.length > L)
            throw ConfigError("arc length must lie in (0, circumference]");
        a.start = wrapPos(a.start, L);
    }
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc& x, const Arc& y) { return x.start < y.start; });
    // merge forward overlaps
    std::vector<Arc> merged;
    for (const Arc& a : arcs_) {
        if (!merged.empty() && a.start <= merged.back().end() + kMergeTol) {
            Arc& m = merged.back();
            m.length = std::max(m.end(), a.end()) - m.start;
        } else {
            merged.push_back(a);
        }
    }
    // merge wrap-around contact between the last arc and the leading ones
    while (merged.size() > 1) {
        Arc& last = merged.back();
        const Arc& first = merged.front();
        if (last.end() >= L + first.start - kMergeTol) {
            const double new_end = std::max(last.end(), L + first.end());
            last.length = new_end - last.start;
            merged.erase(merged.begin());
        } else {
            break;
        }
    }
    if (!merged.empty() && merged.front().length > L) merged.front().length = L;
    arcs_ = std::move(merged);
}

double SlabRegion::totalLength() const {
    double t = 0.0;
    for (const Arc& a : arcs_) t += a.length;
    return t;
}

std::vector<double> SlabRegion::endpoints() const {
    std::vector<double> e;
    for (const Arc& a : arcs_) {
        e.push_back(a.start);
        e.push_back(wrapPos(a.end(), circ_));
    }
    return e;
}

SlabRegion SlabRegion::shifted(double s) const {
    std::vector<Arc> arcs = arcs_;
    for (Arc& a : arcs) a.start = wrapPos(a.start + s, circ_);
    return fromSegmentsUnchecked(circ_, std::move(arcs));
}

SlabRegion SlabRegion::reflected(double center) const {
    std::vector<Arc> arcs;
    for (const Arc& a : arcs_)
        arcs.push_back(Arc{wrapPos(2.0 * center - a.end(), circ_), a.length});
    return fromSegmentsUnchecked(circ_, std::move(arcs));
}

SlabRegion SlabRegion::complement() const {
    const double L = circ_;
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const double gap_start = arcs_[i].end();
        const double gap_end =
            (i + 1 < arcs_.size()) ? arcs_[i + 1].start : arcs_.front().start + L;
        if (gap_end - gap_start > kMergeTol)
            arcs.push_back(Arc{wrapPos(gap_start, L), gap_end - gap_start});
    }
    return fromSegmentsUnchecked(L, std::move(arcs));
}

SlabRegion SlabRegion::symmetricDifferenceWith(const SlabRegion& other) const {
    if (std::abs(circ_ - other.circ_) > kMergeTol)
        throw ConfigError("symmetric difference of regions on different circles");
    const double L = circ_;
    const auto sa = toSegments(arcs_, L);
    const auto sb = toSegments(other.arcs_, L);

    std::vector<double> cuts{0.0, L};
    for (const auto& [lo, hi] : sa) { cuts.push_back(lo); cuts.push_back(hi); }
    for (const auto& [lo, hi] : sb) { cuts.push_back(lo); cuts.push_back(hi); }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<std::pair<double, double>> kept;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0.0) continue;
        const double mid = 0.5 * (lo + hi);
        if (covers(sa, mid) != covers(sb, mid)) {
            if (!kept.empty() && lo <= kept.back().second + kMergeTol)
                kept.back().second = hi;
            else
                kept.emplace_back(lo, hi);
        }
    }
    std::vector<Arc> arcs;
    for (const auto& [lo, hi] : kept)
        if (hi - lo > kMergeTol) arcs.push_back(Arc{lo, hi - lo});
    return fromSegmentsUnchecked(L, std::move(arcs));
}

} // namespace isolab
