#include "isolab/warped_product.hpp"

#include <cmath>

#include "isolab/errors.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

double unitSphereArea(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

// Integrate f over [a, b] splitting at every profile feature point (taken
// mod period), so narrow bumps cannot hide inside a long panel.
template <class F>
double integrateSplit(const WarpProfile& pr, F&& f, double a, double b) {
    const double L = pr.period();
    std::vector<double> cuts{a};
    const auto feats = pr.features();
    if (!feats.empty()) {
        const double j0 = std::floor((a - feats.back()) / L);
        for (double base = j0 * L; base < b; base += L) {
            for (double p : feats) {
                const double x = base + p;
                if (x > a && x < b) cuts.push_back(x);
            }
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) v += quad::integrate(f, cuts[i], cuts[i + 1]);
    return v;
}

} // namespace

WarpedProduct::WarpedProduct(int n, WarpProfile profile)
    : n_(n), profile_(std::move(profile)) {
    if (n < 2 || n > 7) throw ConfigError("ambient dimension n must lie in 2..7");
    sphere_area_ = unitSphereArea(n);
    const auto& pr = profile_;
    const int e = n_ - 1;
    period_volume_ = integrateSplit(
        pr, [&](double r) { return ipow(pr.phi(r), e); }, 0.0, pr.period());
    total_volume_ = sphere_area_ * period_volume_;
    if (!(total_volume_ > 0.0) || !std::isfinite(total_volume_))
        throw ContractError("total volume must be finite and positive");
}

double WarpedProduct::sliceArea(double r) const {
    return sphere_area_ * ipow(profile_.phi(r), n_ - 1);
}

double WarpedProduct::volumeBetween(double a, double b) const {
    if (a == b) return 0.0;
    if (b < a) return -volumeBetween(b, a);
    const double L = period();
    const double len = b - a;
    const double whole = std::floor(len / L);
    double rest = len - whole * L;
    double v = whole * period_volume_;
    if (rest > 0.0) {
        const int e = n_ - 1;
        const auto& pr = profile_;
        v += integrateSplit(pr, [&](double r) { return ipow(pr.phi(r), e); }, a, a + rest);
    }
    return sphere_area_ * v;
}

nlohmann::json WarpedProduct::toJson() const {
    nlohmann::json j = profile_.toJson();
    j["n"] = n_;
    return j;
}

WarpedProduct WarpedProduct::fromJson(const nlohmann::json& j) {
    if (!j.contains("n")) throw ConfigError("manifold config: missing 'n'");
    return WarpedProduct(j.at("n").get<int>(), WarpProfile::fromJson(j));
}

} // namespace isolab
