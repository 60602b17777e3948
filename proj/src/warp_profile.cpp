#include "isolab/warp_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isolab/errors.hpp"

namespace isolab {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// Superpolynomially flat barrier on (-1,1): h(0) = 0 with all derivatives
// zero, h -> +inf at |t| -> 1.  exp(-h) then glues C^infty to the constant
// outside the bump and is flat to infinite order at the bottom.
double barrier(double t) {
    const double at = std::abs(t);
    if (at <= 0.0) return 0.0;
    if (at >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(-1.0 / at) / (1.0 - t * t);
}

double barrierDeriv(double t) {
    const double at = std::abs(t);
    if (at <= 0.0 || at >= 1.0) return 0.0;
    const double om = 1.0 - t * t;
    const double e = std::exp(-1.0 / at);
    // d/dt [e^{-1/|t|}/(1-t^2)], odd in t
    const double d = e * (1.0 / (at * at) / om + 2.0 * at / (om * om));
    return t > 0.0 ? d : -d;
}

double barrierSecond(double t) {
    const double at = std::abs(t);
    if (at <= 0.0 || at >= 1.0) return 0.0;
    const double om = 1.0 - at * at;
    const double e = std::exp(-1.0 / at);
    // h = e^{-1/s} A(s), s = |t|, A = 1/(1-s^2);  h'' is even in t.
    // h'(s) = e^{-1/s} (A/s^2 + A'), A' = 2s/(1-s^2)^2
    // h''(s) = e^{-1/s} (A/s^4 + 2A'/s^2 - 2A/s^3 + A'')
    const double A = 1.0 / om;
    const double Ap = 2.0 * at / (om * om);
    const double App = (2.0 * om + 8.0 * at * at) / (om * om * om);
    const double s2 = at * at;
    return e * (A / (s2 * s2) + 2.0 * Ap / s2 - 2.0 * A / (s2 * at) + App);
}

} // namespace

std::string toString(WarpFamily f) {
    switch (f) {
        case WarpFamily::Constant: return "constant";
        case WarpFamily::FlatBump: return "flat-bump";
        case WarpFamily::AnalyticPower: return "analytic-power";
    }
    return "constant";
}

WarpFamily warpFamilyFromString(const std::string& s) {
    if (s == "constant") return WarpFamily::Constant;
    if (s == "flat-bump") return WarpFamily::FlatBump;
    if (s == "analytic-power") return WarpFamily::AnalyticPower;
    throw ConfigError("unknown warp family: " + s);
}

WarpProfile WarpProfile::constant(double circle_radius) {
    if (!(circle_radius > 0.0)) throw ConfigError("circle radius must be positive");
    WarpProfile p;
    p.family_ = WarpFamily::Constant;
    p.radius_ = circle_radius;
    p.period_ = two_pi * circle_radius;
    return p;
}

WarpProfile WarpProfile::flatBump(double circle_radius, int k) {
    if (!(circle_radius > 0.0)) throw ConfigError("circle radius must be positive");
    if (k < 3) throw ConfigError("flat-bump index k must be >= 3");
    if (1.0 / k >= circle_radius) throw ConfigError("bump wider than the circle");
    WarpProfile p;
    p.family_ = WarpFamily::FlatBump;
    p.radius_ = circle_radius;
    p.period_ = two_pi * circle_radius;
    p.k_ = k;
    return p;
}

WarpProfile WarpProfile::analyticPower(double circle_radius, int m, double eps) {
    if (!(circle_radius > 0.0)) throw ConfigError("circle radius must be positive");
    if (m < 1) throw ConfigError("touching order m must be >= 1");
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("depth eps must lie in (0, 1/2)");
    WarpProfile p;
    p.family_ = WarpFamily::AnalyticPower;
    p.radius_ = circle_radius;
    p.period_ = two_pi * circle_radius;
    p.m_ = m;
    p.eps_ = eps;
    return p;
}

double WarpProfile::depth() const {
    switch (family_) {
        case WarpFamily::Constant: return 0.0;
        case WarpFamily::FlatBump: return 1.0 / k_;
        case WarpFamily::AnalyticPower: return eps_;
    }
    return 0.0;
}

double WarpProfile::minValue() const { return 1.0 - depth(); }

double WarpProfile::wrap(double x) const {
    double w = std::remainder(x, period_);
    if (w >= 0.5 * period_) w -= period_;
    return w;
}

double WarpProfile::phi(double r) const {
    switch (family_) {
        case WarpFamily::Constant: return 1.0;
        case WarpFamily::FlatBump: {
            const double t = double(k_) * wrap(r - 1.0);
            if (std::abs(t) >= 1.0) return 1.0;
            return 1.0 - std::exp(-barrier(t)) / k_;
        }
        case WarpFamily::AnalyticPower: {
            const double s = std::sin(wrap(r - 1.0) / radius_);
            return 1.0 - eps_ + eps_ * ipow(s, 2 * m_);
        }
    }
    return 1.0;
}

double WarpProfile::dphi(double r) const {
    switch (family_) {
        case WarpFamily::Constant: return 0.0;
        case WarpFamily::FlatBump: {
            const double t = double(k_) * wrap(r - 1.0);
            if (std::abs(t) >= 1.0) return 0.0;
            // phi = 1 - g(k(r-1))/k, g = exp(-h):  phi' = h'(t) exp(-h(t))
            return barrierDeriv(t) * std::exp(-barrier(t));
        }
        case WarpFamily::AnalyticPower: {
            const double x = wrap(r - 1.0) / radius_;
            const double s = std::sin(x), c = std::cos(x);
            return eps_ * 2.0 * m_ * ipow(s, 2 * m_ - 1) * c / radius_;
        }
    }
    return 0.0;
}

double WarpProfile::ddphi(double r) const {
    switch (family_) {
        case WarpFamily::Constant: return 0.0;
        case WarpFamily::FlatBump: {
            const double t = double(k_) * wrap(r - 1.0);
            if (std::abs(t) >= 1.0) return 0.0;
            const double h1 = barrierDeriv(t), h2 = barrierSecond(t);
            return double(k_) * (h2 - h1 * h1) * std::exp(-barrier(t));
        }
        case WarpFamily::AnalyticPower: {
            const double x = wrap(r - 1.0) / radius_;
            const double s = std::sin(x), c = std::cos(x);
            const int p = 2 * m_;
            return eps_ * p / (radius_ * radius_) *
                   ((p - 1) * ipow(s, p - 2) * c * c - ipow(s, p));
        }
    }
    return 0.0;
}

int WarpProfile::derivSign(double r) const {
    switch (family_) {
        case WarpFamily::Constant: return 0;
        case WarpFamily::FlatBump: {
            const double t = double(k_) * wrap(r - 1.0);
            if (std::abs(t) >= 1.0 || t == 0.0) return 0;
            return t > 0.0 ? 1 : -1;
        }
        case WarpFamily::AnalyticPower: {
            const double x = wrap(r - 1.0) / radius_;
            const double s = std::sin(x), c = std::cos(x);
            if (s == 0.0 || c == 0.0) return 0;
            return (s > 0.0) == (c > 0.0) ? 1 : -1;
        }
    }
    return 0;
}

double WarpProfile::gapAt(double c, double u) const {
    switch (family_) {
        case WarpFamily::Constant: return 0.0;
        case WarpFamily::FlatBump: {
            const double t0 = double(k_) * wrap(c - 1.0);
            const double t1 = double(k_) * wrap(c + u - 1.0);
            const bool in0 = std::abs(t0) < 1.0, in1 = std::abs(t1) < 1.0;
            if (!in0 && !in1) return 0.0;
            const double h0 = in0 ? barrier(t0) : std::numeric_limits<double>::infinity();
            const double h1 = in1 ? barrier(t1) : std::numeric_limits<double>::infinity();
            // phi(c+u) - phi(c) = (exp(-h0) - exp(-h1))/k
            if (!in1) return std::exp(-h0) / k_;
            if (!in0) return -std::exp(-h1) / k_;
            return -std::exp(-h0) * std::expm1(-(h1 - h0)) / k_;
        }
        case WarpFamily::AnalyticPower: {
            const double x0 = wrap(c - 1.0) / radius_;
            const double du = u / radius_;
            const double s0 = std::sin(x0);
            const double s1 = std::sin(x0 + du);
            // s1 - s0 via the product identity; robust when both sines are
            // tiny and the power difference would otherwise vanish.
            const double ds = 2.0 * std::cos(x0 + 0.5 * du) * std::sin(0.5 * du);
            double sum = 0.0;
            for (int j = 0; j < 2 * m_; ++j) sum += ipow(s1, j) * ipow(s0, 2 * m_ - 1 - j);
            return eps_ * ds * sum;
        }
    }
    return 0.0;
}

std::vector<double> WarpProfile::features() const {
    auto reduce = [&](double x) {
        double w = std::fmod(x, period_);
        if (w < 0.0) w += period_;
        return w;
    };
    std::vector<double> f;
    switch (family_) {
        case WarpFamily::Constant:
            break;
        case WarpFamily::FlatBump:
            f = {reduce(1.0 - 1.0 / k_), reduce(1.0), reduce(1.0 + 1.0 / k_)};
            break;
        case WarpFamily::AnalyticPower: {
            const double q = 0.5 * M_PI * radius_;
            f = {reduce(1.0), reduce(1.0 + q), reduce(1.0 + 2.0 * q), reduce(1.0 + 3.0 * q)};
            break;
        }
    }
    std::sort(f.begin(), f.end());
    return f;
}

nlohmann::json WarpProfile::toJson() const {
    nlohmann::json j;
    j["family"] = toString(family_);
    j["R"] = radius_;
    if (family_ == WarpFamily::FlatBump) j["k"] = k_;
    if (family_ == WarpFamily::AnalyticPower) {
        j["m"] = m_;
        j["eps"] = eps_;
    }
    return j;
}

WarpProfile WarpProfile::fromJson(const nlohmann::json& j) {
    if (!j.contains("family")) throw ConfigError("profile config: missing 'family'");
    if (!j.contains("R")) throw ConfigError("profile config: missing 'R'");
    const WarpFamily f = warpFamilyFromString(j.at("family").get<std::string>());
    const double R = j.at("R").get<double>();
    switch (f) {
        case WarpFamily::Constant: return constant(R);
        case WarpFamily::FlatBump:
            if (!j.contains("k")) throw ConfigError("profile config: flat-bump needs 'k'");
            return flatBump(R, j.at("k").get<int>());
        case WarpFamily::AnalyticPower:
            if (!j.contains("m")) throw ConfigError("profile config: analytic-power needs 'm'");
            return analyticPower(R, j.at("m").get<int>(), j.value("eps", 0.25));
    }
    throw ConfigError("profile config: unreachable family");
}

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double powDiff(double p0, double d, int e) {
    const double p1 = p0 + d;
    double sum = 0.0;
    for (int j = 0; j < e; ++j) sum += ipow(p1, j) * ipow(p0, e - 1 - j);
    return d * sum;
}

} // namespace isolab
