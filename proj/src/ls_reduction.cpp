#include "isolab/ls_reduction.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "isolab/errors.hpp"
#include "isolab/power_fit.hpp"

namespace isolab {

std::vector<double> geometricGrid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("geometric grid needs 0 < lo < hi");
    if (points_per_decade < 2) throw ConfigError("geometric grid needs >= 2 points per decade");
    const double decades = std::log10(hi / lo);
    const int steps = std::max(1, int(std::round(decades * points_per_decade)));
    std::vector<double> g(steps + 1);
    for (int i = 0; i <= steps; ++i)
        g[i] = lo * std::pow(10.0, decades * i / steps);
    g.back() = hi;
    return g;
}

LSReduction::LSReduction(const WarpedProduct& M, const SlabRegion& slab,
                         const SpectralReport& report, int N, int Q, double zeta_max)
    : sys_(M, slab, N, Q), zeta_max_(zeta_max) {
    kernel_on_ = materializeKernel(report, sys_);
    if (kernel_on_.empty())
        throw ContractError("LS reduction requires a degenerate critical slab");
    for (const Eigen::VectorXd& k : kernel_on_) {
        // sup-normalize so that a unit kernel coordinate is a unit r-shift
        const double sup = sys_.supNorm(k);
        kernel_sup_.push_back(k / sup);
        kernel_scale_.push_back(std::sqrt(sys_.weightedDot(k / sup, k / sup)));
    }

    // weighted-orthonormal basis of the complement of the kernel
    const int d = sys_.dim();
    const int l = int(kernel_on_.size());
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(d - l);
    for (int j = 0; j < d && int(cols.size()) < d - l; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(d, j);
        for (const Eigen::VectorXd& k : kernel_on_) v -= sys_.weightedDot(v, k) * k;
        for (const Eigen::VectorXd& c : cols) v -= sys_.weightedDot(v, c) * c;
        const double nrm2 = sys_.weightedDot(v, v);
        if (nrm2 > 1e-20) cols.push_back(v / std::sqrt(nrm2));
    }
    if (int(cols.size()) != d - l)
        throw SolverError("failed to build the transverse complement basis");
    Z_.resize(d, d - l);
    for (int j = 0; j < d - l; ++j) Z_.col(j) = cols[j];

    base_multiplier_ = sys_.firstVariation(Eigen::VectorXd::Zero(d)).multiplier;
}

Eigen::VectorXd LSReduction::kernelCoordinates(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z(kernelDim());
    for (int i = 0; i < kernelDim(); ++i) z(i) = sys_.weightedDot(x, kernel_on_[i]);
    return z;
}

LSReduction::Solution LSReduction::solveUpsilon(const Eigen::VectorXd& zeta) const {
    if (zeta.size() != kernelDim())
        throw ConfigError("solveUpsilon: kernel coordinate dimension mismatch");
    if (zeta.cwiseAbs().maxCoeff() > zeta_max_)
        throw ConfigError("solveUpsilon: zeta outside the trust region");

    const int d = sys_.dim();
    const int t = int(Z_.cols());
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < kernelDim(); ++i) offset += zeta(i) * kernel_sup_[i];

    Eigen::VectorXd w = Eigen::VectorXd::Zero(t);
    double lambda = base_multiplier_;
    const double tol_grad = 1e-10;
    const double tol_vol = 1e-12 * std::max(1.0, sys_.baseVolume());

    double res_norm = 0.0;
    for (int it = 0;; ++it) {
        const Eigen::VectorXd x = offset + Z_ * w;
        const Eigen::VectorXd ga = sys_.areaGradient(x);
        const Eigen::VectorXd gv = sys_.volumeGradient(x);
        const Eigen::VectorXd rg = Z_.transpose() * (ga - lambda * gv);
        const double rv = sys_.volumeDelta(x);
        res_norm = rg.norm();
        if (res_norm < tol_grad && std::abs(rv) < tol_vol) {
            Solution s;
            s.state = x;
            s.upsilon = Z_ * w;
            s.lambda = lambda;
            s.residual = res_norm;
            s.iterations = it;
            return s;
        }
        if (it >= 40)
            throw SolverError("solveUpsilon: Newton did not converge", res_norm);

        const Eigen::MatrixXd HA = sys_.areaHessian(x);
        const Eigen::MatrixXd HV = sys_.volumeHessian(x);
        Eigen::MatrixXd J(t + 1, t + 1);
        J.topLeftCorner(t, t) = Z_.transpose() * (HA - lambda * HV) * Z_;
        J.topRightCorner(t, 1) = -Z_.transpose() * gv;
        J.bottomLeftCorner(1, t) = (Z_.transpose() * gv).transpose();
        J(t, t) = 0.0;
        Eigen::VectorXd rhs(t + 1);
        rhs.head(t) = -rg;
        rhs(t) = -rv;
        const Eigen::VectorXd step = J.partialPivLu().solve(rhs);
        if (!step.allFinite())
            throw SolverError("solveUpsilon: singular transverse system", res_norm);
        w += step.head(t);
        lambda += step(t);
    }
}

ReductionResult LSReduction::reducedFunction(const std::vector<double>& zeta_grid) const {
    ReductionResult out;
    const double scale = kernel_scale_[0];
    std::vector<Eigen::VectorXd> upsilons;
    std::vector<double> delta_scales;
    for (double z : zeta_grid) {
        Eigen::VectorXd zeta = Eigen::VectorXd::Zero(kernelDim());
        zeta(0) = z;
        const Solution s = solveUpsilon(zeta);
        out.zetas.push_back(z);
        const auto ds = sys_.areaDeltaScaled(s.state);
        out.reducedDelta.push_back(ds.delta);
        delta_scales.push_back(ds.magnitude);
        // kernel-projected gradient, orthonormal coordinate; equals dP/dzeta
        const Eigen::VectorXd res =
            sys_.areaGradient(s.state) - s.lambda * sys_.volumeGradient(s.state);
        out.gradP.push_back(kernel_on_[0].dot(res));
        out.residuals.push_back(s.residual);
        out.upsilonNorms.push_back(std::sqrt(sys_.weightedDot(s.upsilon, s.upsilon)));
        upsilons.push_back(s.upsilon);
        out.largestConvergedZeta = std::max(out.largestConvergedZeta, z);
    }

    // invariants at zero: Upsilon(0) = 0 and dUpsilon/dzeta(0) = 0
    {
        const Solution s0 = solveUpsilon(Eigen::VectorXd::Zero(kernelDim()));
        out.upsilonAtZeroNorm = std::sqrt(sys_.weightedDot(s0.upsilon, s0.upsilon));
        const double h = zeta_grid.empty() ? 1e-3 : zeta_grid.front();
        Eigen::VectorXd zp = Eigen::VectorXd::Zero(kernelDim());
        zp(0) = h;
        const Solution sp = solveUpsilon(zp);
        zp(0) = -h;
        const Solution sm = solveUpsilon(zp);
        const Eigen::VectorXd du = (sp.upsilon - sm.upsilon) / (2.0 * h);
        out.upsilonGradAtZeroFD = std::sqrt(sys_.weightedDot(du, du));
    }

    for (std::size_t i = 0; i + 1 < upsilons.size(); ++i) {
        const Eigen::VectorXd du = upsilons[i + 1] - upsilons[i];
        const double ratio = std::sqrt(sys_.weightedDot(du, du)) /
                             ((out.zetas[i + 1] - out.zetas[i]) * scale);
        out.maxUpsilonDerivRatio = std::max(out.maxUpsilonDerivRatio, ratio);
    }

    // integrable iff the reduced energy is constant along the kernel: each
    // tabulated value must vanish at the resolution of the pointwise delta
    // evaluator (1e-12 of the accumulated term magnitude), which sits far
    // below 1e-12*(1 + P(0)) because the deltas never subtract large areas
    const double p0 = sys_.basePerimeter();
    out.integrable = true;
    for (std::size_t i = 0; i < out.reducedDelta.size(); ++i) {
        const double tol = 1e-12 * std::min(delta_scales[i], 1.0 + p0);
        if (std::abs(out.reducedDelta[i]) > tol) out.integrable = false;
    }

    if (!out.integrable) {
        std::vector<double> zs, ps;
        for (std::size_t i = 0; i < out.zetas.size(); ++i) {
            if (out.zetas[i] >= 1e-3 * (1.0 - 1e-12) && out.zetas[i] <= 1e-2 * (1.0 + 1e-12) &&
                out.reducedDelta[i] > 0.0) {
                zs.push_back(out.zetas[i]);
                ps.push_back(out.reducedDelta[i]);
            }
        }
        if (zs.size() >= 3) {
            const PowerFit fit = fitLogLog(zs, ps);
            out.order = fit.slope;
            out.orderCoefficient = std::pow(10.0, fit.intercept);
            out.orderResidual = fit.maxResidual;
        }
        out.perDecadeSlopes = perDecadeSlopes(out.zetas, out.reducedDelta);
    }
    return out;
}

CoercivityResult LSReduction::transverseCoercivity(int samples, double cap,
                                                   unsigned long seed) const {
    CoercivityResult out;
    out.minRatio = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    auto urand = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    const int d = sys_.dim();
    const int m = sys_.modesPerSheet();
    const double V0 = sys_.baseVolume();

    for (int trial = 0; trial < samples; ++trial) {
        Eigen::VectorXd x(d);
        for (int j = 0; j < d; ++j) {
            const double lap = sys_.grid().laplaceEigenvalue(j % m);
            x(j) = (2.0 * urand() - 1.0) / (1.0 + lap);
        }
        x *= cap * (0.1 + 0.9 * urand()) / sys_.supNorm(x);
        const Eigen::VectorXd u = sys_.projectToVolume(x, V0, 1e-300);

        const Eigen::VectorXd zeta_on = kernelCoordinates(u);
        Eigen::VectorXd zeta_len(kernelDim());
        for (int i = 0; i < kernelDim(); ++i) zeta_len(i) = zeta_on(i) / kernel_scale_[i];
        const Solution s = solveUpsilon(zeta_len);

        const Eigen::VectorXd diff = u - s.state;
        const double denom = sys_.sobolevNormSq(diff);
        if (denom < 1e-12) {
            ++out.skipped; // u is (numerically) a kernel-family member
            continue;
        }
        const double num = sys_.areaDelta(u) - sys_.areaDelta(s.state);
        out.minRatio = std::min(out.minRatio, num / denom);
        ++out.used;
    }
    return out;
}

nlohmann::json ReductionResult::toJson() const {
    nlohmann::json j;
    j["zetas"] = zetas;
    j["reduced_delta"] = reducedDelta;
    j["grad_P"] = gradP;
    j["residuals"] = residuals;
    j["upsilon_norms"] = upsilonNorms;
    j["integrable"] = integrable;
    j["order"] = order;
    j["order_coefficient"] = orderCoefficient;
    j["order_residual"] = orderResidual;
    j["upsilon_at_zero"] = upsilonAtZeroNorm;
    j["upsilon_grad_at_zero_fd"] = upsilonGradAtZeroFD;
    j["max_upsilon_deriv_ratio"] = maxUpsilonDerivRatio;
    j["largest_converged_zeta"] = largestConvergedZeta;
    nlohmann::json slopes = nlohmann::json::array();
    for (const auto& [c, s] : perDecadeSlopes) slopes.push_back({{"log10_center", c}, {"slope", s}});
    j["per_decade_slopes"] = slopes;
    return j;
}

nlohmann::json CoercivityResult::toJson() const {
    return nlohmann::json{{"min_ratio", minRatio}, {"used", used}, {"skipped", skipped}};
}

} // namespace isolab
