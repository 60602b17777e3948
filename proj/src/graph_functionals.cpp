#include "isolab/graph_functionals.hpp"

#include <cmath>

#include "isolab/errors.hpp"
#include "isolab/warp_geom.hpp"

namespace isolab {

namespace {

double rpow(double x, int e) { return e >= 0 ? ipow(x, e) : 1.0 / ipow(x, -e); }

} // namespace

GraphPerturbation GraphPerturbation::zero(const WarpedProduct& M, const SlabRegion& base, int N) {
    if (!base.singleArc()) throw ConfigError("graph perturbations require a single-arc base");
    GraphPerturbation u{base, M.dimension() == 2 ? SphereMode::Full : SphereMode::Zonal, N, {}, {}};
    const int modes = (u.mode == SphereMode::Full) ? 2 * N + 1 : N + 1;
    u.coeffs_a.assign(modes, 0.0);
    u.coeffs_b.assign(modes, 0.0);
    return u;
}

nlohmann::json GraphPerturbation::toJson() const {
    const Arc& arc = base.arcs().front();
    nlohmann::json j;
    j["base"] = {{"a", arc.start}, {"b", arc.end()}};
    j["mode"] = (mode == SphereMode::Full) ? "full" : "zonal";
    j["N"] = N;
    j["coeffs_a"] = coeffs_a;
    j["coeffs_b"] = coeffs_b;
    return j;
}

GraphPerturbation GraphPerturbation::fromJson(const WarpedProduct& M, const nlohmann::json& j) {
    for (const char* key : {"base", "mode", "N", "coeffs_a", "coeffs_b"})
        if (!j.contains(key)) throw ConfigError(std::string("perturbation: missing '") + key + "'");
    const double a = j.at("base").at("a").get<double>();
    const double b = j.at("base").at("b").get<double>();
    GraphPerturbation u{SlabRegion::interval(M.period(), a, b),
                        j.at("mode").get<std::string>() == "full" ? SphereMode::Full
                                                                  : SphereMode::Zonal,
                        j.at("N").get<int>(),
                        j.at("coeffs_a").get<std::vector<double>>(),
                        j.at("coeffs_b").get<std::vector<double>>()};
    const int modes = (u.mode == SphereMode::Full) ? 2 * u.N + 1 : u.N + 1;
    if (int(u.coeffs_a.size()) != modes || int(u.coeffs_b.size()) != modes)
        throw ConfigError("perturbation: coefficient count does not match N");
    return u;
}

// Per-node geometric state of one sheet.  G(r, s) = phi^{n-2} sqrt(phi^2+s^2)
// is the area integrand; partials are against the radial position r and the
// angular slope s.
struct GraphSystem::NodeState {
    double u, s;      // sheet offset and angular derivative at the node
    double p, dp, ddp; // phi and derivatives at r = c + u
    double S;          // sqrt(p^2 + s^2)
};

GraphSystem::GraphSystem(const WarpedProduct& M, const SlabRegion& base, int N, int Q)
    : M_(M),
      base_(base),
      grid_(SphereGrid::make(M.dimension(), N, Q)) {
    if (!base.singleArc()) throw ConfigError("graph system requires a single-arc base slab");
    const Arc& arc = base.arcs().front();
    a_ = arc.start;
    b_ = arc.end();
    base_perimeter_ = slabPerimeter(M, base);
    base_volume_ = slabVolume(M, base);
}

double GraphSystem::areaDelta(const Eigen::VectorXd& x) const {
    return areaDeltaScaled(x).delta;
}

GraphSystem::DeltaWithScale GraphSystem::areaDeltaScaled(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    double total = 0.0, magnitude = 0.0;
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        const double p0 = pr.phi(c);
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0, s = 0.0;
            for (int j = 0; j < m; ++j) {
                const double cj = x(sheet * m + j);
                u += cj * grid_.value(q, j);
                s += cj * grid_.deriv(q, j);
            }
            const double d = pr.gapAt(c, u);
            const double p1 = p0 + d;
            const double xs = (s / p1) * (s / p1);
            // G(c+u, s) - G(c, 0) split into the slope part and the
            // radial-gap part, both free of cancellation
            const double slope_part = ipow(p1, n - 1) * xs / (1.0 + std::sqrt(1.0 + xs));
            const double gap_part = powDiff(p0, d, n - 1);
            total += grid_.weight(q) * (slope_part + gap_part);
            magnitude += grid_.weight(q) * (slope_part + std::abs(gap_part));
        }
    }
    return {total, magnitude};
}

double GraphSystem::volumeDelta(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    double total = 0.0;
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        const double sign = sheet == 0 ? -1.0 : 1.0;
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0;
            for (int j = 0; j < m; ++j) u += x(sheet * m + j) * grid_.value(q, j);
            if (u != 0.0)
                total += sign * grid_.weight(q) * M_.volumeBetween(c, c + u) / M_.sphereArea();
        }
    }
    return total;
}

Eigen::VectorXd GraphSystem::areaGradient(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * m);
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0, s = 0.0;
            for (int j = 0; j < m; ++j) {
                const double cj = x(sheet * m + j);
                u += cj * grid_.value(q, j);
                s += cj * grid_.deriv(q, j);
            }
            const double r = c + u;
            const double p = pr.phi(r), dp = pr.dphi(r);
            const double S = std::hypot(p, s);
            const double Gr = dp * rpow(p, n - 3) * ((n - 2) * S + p * p / S);
            const double Gs = rpow(p, n - 2) * s / S;
            const double w = grid_.weight(q);
            for (int j = 0; j < m; ++j)
                g(sheet * m + j) += w * (Gr * grid_.value(q, j) + Gs * grid_.deriv(q, j));
        }
    }
    return g;
}

Eigen::MatrixXd GraphSystem::areaHessian(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0, s = 0.0;
            for (int j = 0; j < m; ++j) {
                const double cj = x(sheet * m + j);
                u += cj * grid_.value(q, j);
                s += cj * grid_.deriv(q, j);
            }
            const double r = c + u;
            const double p = pr.phi(r), dp = pr.dphi(r), ddp = pr.ddphi(r);
            const double S = std::hypot(p, s);
            const double S3 = S * S * S;
            const double bracket = (n - 2) * S + p * p / S;
            const double Gss = rpow(p, n) / S3;
            const double Grs = dp * s * rpow(p, n - 3) * ((n - 2) / S - p * p / S3);
            const double Grr =
                ddp * rpow(p, n - 3) * bracket +
                dp * dp * rpow(p, n - 4) * ((n - 3) * bracket + p * p * (n / S - p * p / S3));
            const double w = grid_.weight(q);
            for (int j = 0; j < m; ++j) {
                const double Bj = grid_.value(q, j), Dj = grid_.deriv(q, j);
                for (int l = j; l < m; ++l) {
                    const double Bl = grid_.value(q, l), Dl = grid_.deriv(q, l);
                    const double hjl =
                        w * (Grr * Bj * Bl + Grs * (Bj * Dl + Dj * Bl) + Gss * Dj * Dl);
                    H(sheet * m + j, sheet * m + l) += hjl;
                    if (l != j) H(sheet * m + l, sheet * m + j) += hjl;
                }
            }
        }
    }
    return H;
}

Eigen::VectorXd GraphSystem::volumeGradient(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * m);
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        const double sign = sheet == 0 ? -1.0 : 1.0;
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0;
            for (int j = 0; j < m; ++j) u += x(sheet * m + j) * grid_.value(q, j);
            const double wq = sign * grid_.weight(q) * ipow(pr.phi(c + u), n - 1);
            for (int j = 0; j < m; ++j) g(sheet * m + j) += wq * grid_.value(q, j);
        }
    }
    return g;
}

Eigen::MatrixXd GraphSystem::volumeHessian(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double c = sheet == 0 ? a_ : b_;
        const double sign = sheet == 0 ? -1.0 : 1.0;
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0;
            for (int j = 0; j < m; ++j) u += x(sheet * m + j) * grid_.value(q, j);
            const double r = c + u;
            const double wq =
                sign * grid_.weight(q) * (n - 1) * ipow(pr.phi(r), n - 2) * pr.dphi(r);
            for (int j = 0; j < m; ++j)
                for (int l = j; l < m; ++l) {
                    const double hjl = wq * grid_.value(q, j) * grid_.value(q, l);
                    H(sheet * m + j, sheet * m + l) += hjl;
                    if (l != j) H(sheet * m + l, sheet * m + j) += hjl;
                }
        }
    }
    return H;
}

FirstVariation GraphSystem::firstVariation(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd ga = areaGradient(x);
    const Eigen::VectorXd gv = volumeGradient(x);
    const double lambda = ga.dot(gv) / gv.dot(gv);
    FirstVariation fv;
    fv.gradient = ga - lambda * gv;
    fv.multiplier = lambda;
    fv.norm = fv.gradient.norm();
    return fv;
}

Eigen::VectorXd GraphSystem::projectToVolume(const Eigen::VectorXd& x, double target_volume,
                                             double tol_abs) const {
    const int m = modesPerSheet();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * m);
    const double c0 = std::sqrt(M_.sphereArea()); // coefficient of the unit constant
    e(0) = -c0;      // outward shift moves sheet a towards smaller r
    e(m) = c0;
    const double target_delta = target_volume - base_volume_;

    Eigen::VectorXd y = x;
    double res = volumeDelta(y) - target_delta;
    double best = std::abs(res);
    const double tol = tol_abs > 0.0 ? tol_abs : 1e-13 * std::max(1.0, std::abs(target_volume));
    // guarded Newton: the slope along e is at least sigma*(min phi)^{n-1} > 0
    const double corridor =
        std::min(0.25 * M_.profile().minValue(), 0.25 * (b_ - a_));
    for (int it = 0; std::abs(res) > tol; ++it) {
        if (it >= 50)
            throw SolverError("projectToVolume: Newton failed to converge in 50 iterations", res);
        const double slope = volumeGradient(y).dot(e);
        const double step = -res / slope;
        if (std::abs(step) > corridor)
            throw SolverError("projectToVolume: required correction leaves the graph regime",
                              res);
        y += step * e;
        res = volumeDelta(y) - target_delta;
        // Newton contracts rapidly until the quadrature noise floor; once
        // the residual stops improving there is nothing left to gain
        if (std::abs(res) >= 0.5 * best) break;
        best = std::abs(res);
    }
    return y;
}

void GraphSystem::checkEmbedded(const Eigen::VectorXd& x) const {
    const double cap = std::min(0.25 * M_.profile().minValue(), 0.25 * (b_ - a_));
    if (supNorm(x) >= cap)
        throw EmbeddednessError("graph perturbation leaves the embedded corridor");
}

double GraphSystem::supNorm(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int samples = 4 * grid_.nodes() + 1;
    const double theta_max = (grid_.mode() == SphereMode::Full) ? 2.0 * M_PI : M_PI;
    double sup = 0.0;
    for (int sheet = 0; sheet < 2; ++sheet) {
        const Eigen::VectorXd block = x.segment(sheet * m, m);
        for (int i = 0; i < samples; ++i) {
            const double th = theta_max * i / (samples - 1);
            sup = std::max(sup, std::abs(grid_.evaluate(block, th)));
        }
    }
    return sup;
}

double GraphSystem::weightedDot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    const double wa = ipow(pr.phi(a_), n - 1);
    const double wb = ipow(pr.phi(b_), n - 1);
    return wa * x.head(m).dot(y.head(m)) + wb * x.tail(m).dot(y.tail(m));
}

double GraphSystem::sobolevNormSq(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    double total = 0.0;
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double p = pr.phi(sheet == 0 ? a_ : b_);
        const double w = ipow(p, n - 1);
        for (int j = 0; j < m; ++j) {
            const double cj = x(sheet * m + j);
            total += w * cj * cj * (1.0 + grid_.laplaceEigenvalue(j) / (p * p));
        }
    }
    return total;
}

double GraphSystem::l1Norm(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    const int n = M_.dimension();
    const WarpProfile& pr = M_.profile();
    double total = 0.0;
    for (int sheet = 0; sheet < 2; ++sheet) {
        const double w = ipow(pr.phi(sheet == 0 ? a_ : b_), n - 1);
        for (int q = 0; q < grid_.nodes(); ++q) {
            double u = 0.0;
            for (int j = 0; j < m; ++j) u += x(sheet * m + j) * grid_.value(q, j);
            total += w * grid_.weight(q) * std::abs(u);
        }
    }
    return total;
}

double GraphSystem::symmetricDifferenceWithSlab(const Eigen::VectorXd& x,
                                                const SlabRegion& other) const {
    const int m = modesPerSheet();
    const double L = M_.period();
    const double sigma = M_.sphereArea();

    // fast path: a single aligned arc, symmetric difference reduces to two
    // boundary strips per node
    const bool aligned = other.singleArc() &&
                         std::abs(std::remainder(other.arcs().front().start - a_, L)) < 0.4 &&
                         std::abs(std::remainder(other.arcs().front().end() - b_, L)) < 0.4;
    double total = 0.0;
    for (int q = 0; q < grid_.nodes(); ++q) {
        double ua = 0.0, ub = 0.0;
        for (int j = 0; j < m; ++j) {
            ua += x(j) * grid_.value(q, j);
            ub += x(m + j) * grid_.value(q, j);
        }
        const double lo = a_ + ua, hi = b_ + ub;
        if (!(hi > lo)) throw EmbeddednessError("graph sheets crossed");
        double node_measure;
        if (aligned) {
            const Arc& arc = other.arcs().front();
            const double lo2 = a_ + std::remainder(arc.start - a_, L);
            const double hi2 = b_ + std::remainder(arc.end() - b_, L);
            node_measure = (std::abs(M_.volumeBetween(lo2, lo)) +
                            std::abs(M_.volumeBetween(hi2, hi))) /
                           sigma;
        } else {
            const SlabRegion node_interval = SlabRegion::interval(L, lo, hi);
            node_measure = slabVolume(M_, node_interval.symmetricDifferenceWith(other)) / sigma;
        }
        total += grid_.weight(q) * node_measure;
    }
    return total;
}

Eigen::VectorXd GraphSystem::toVector(const GraphPerturbation& u) const {
    const int m = modesPerSheet();
    if (int(u.coeffs_a.size()) != m || int(u.coeffs_b.size()) != m)
        throw ConfigError("perturbation coefficient count does not match the system");
    Eigen::VectorXd x(2 * m);
    for (int j = 0; j < m; ++j) {
        x(j) = u.coeffs_a[j];
        x(m + j) = u.coeffs_b[j];
    }
    return x;
}

GraphPerturbation GraphSystem::toPerturbation(const Eigen::VectorXd& x) const {
    const int m = modesPerSheet();
    GraphPerturbation u{base_,
                        grid_.mode(),
                        grid_.maxDegree(),
                        std::vector<double>(m),
                        std::vector<double>(m)};
    for (int j = 0; j < m; ++j) {
        u.coeffs_a[j] = x(j);
        u.coeffs_b[j] = x(m + j);
    }
    return u;
}

double graphArea(const WarpedProduct& M, const GraphPerturbation& u, int Q) {
    GraphSystem sys(M, u.base, u.N, Q);
    const Eigen::VectorXd x = sys.toVector(u);
    sys.checkEmbedded(x);
    return sys.area(x);
}

double graphVolume(const WarpedProduct& M, const GraphPerturbation& u, int Q) {
    GraphSystem sys(M, u.base, u.N, Q);
    const Eigen::VectorXd x = sys.toVector(u);
    sys.checkEmbedded(x);
    return sys.volume(x);
}

GraphPerturbation projectToVolume(const WarpedProduct& M, const GraphPerturbation& u,
                                  double target_volume, int Q) {
    GraphSystem sys(M, u.base, u.N, Q);
    const Eigen::VectorXd y = sys.projectToVolume(sys.toVector(u), target_volume);
    sys.checkEmbedded(y);
    return sys.toPerturbation(y);
}

FirstVariation firstVariationResidual(const WarpedProduct& M, const GraphPerturbation& u, int Q) {
    GraphSystem sys(M, u.base, u.N, Q);
    const Eigen::VectorXd x = sys.toVector(u);
    sys.checkEmbedded(x);
    return sys.firstVariation(x);
}

} // namespace isolab
