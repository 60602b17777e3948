#include "isolab/jacobi_spectrum.hpp"

#include <cmath>

#include "isolab/errors.hpp"

namespace isolab {

double jacobiPotential(const WarpedProduct& M, double r0) {
    const WarpProfile& pr = M.profile();
    const double p = pr.phi(r0), dp = pr.dphi(r0), ddp = pr.ddphi(r0);
    return (M.dimension() - 1) * ((dp / p) * (dp / p) - ddp / p);
}

double jacobiEigenvalue(const WarpedProduct& M, double r0, int k) {
    const double p = M.profile().phi(r0);
    return double(k) * (k + M.dimension() - 2) / (p * p) - jacobiPotential(M, r0);
}

SpectralReport constrainedSpectrum(const WarpedProduct& M, const SlabRegion& slab, int K,
                                   double zero_tol) {
    if (!slab.singleArc()) throw ContractError("constrainedSpectrum: single-arc slab required");
    const Arc& arc = slab.arcs().front();
    const double a = arc.start, b = arc.end();
    const WarpProfile& pr = M.profile();
    const int n = M.dimension();

    // criticality: the two boundary spheres carry the same outward mean
    // curvature, i.e. phi'/phi(a) + phi'/phi(b) = 0
    const double crit = pr.dphi(a) / pr.phi(a) + pr.dphi(b) / pr.phi(b);
    if (std::abs(crit) > 1e-8)
        throw ContractError("constrainedSpectrum: slab is not a critical point");

    SpectralReport rep;
    rep.n = n;
    rep.a = a;
    rep.b = b;
    rep.qa = jacobiPotential(M, a);
    rep.qb = jacobiPotential(M, b);
    rep.maxDegree = K;
    rep.mu_a.resize(K + 1);
    rep.mu_b.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        rep.mu_a[k] = jacobiEigenvalue(M, a, k);
        rep.mu_b[k] = jacobiEigenvalue(M, b, k);
    }

    // k = 0: two constants against one volume constraint.  In r-coordinates
    // the volume-preserving direction is (x_a, x_b) = (phi(b)^{n-1}, phi(a)^{n-1}).
    const double wa = ipow(pr.phi(a), n - 1);
    const double wb = ipow(pr.phi(b), n - 1);
    double xa = wb, xb = wa;
    const double sup = std::max(std::abs(xa), std::abs(xb));
    xa /= sup;
    xb /= sup;
    rep.pairA = xa;
    rep.pairB = xb;
    rep.constrainedMu0 =
        (wa * rep.mu_a[0] * xa * xa + wb * rep.mu_b[0] * xb * xb) /
        (wa * xa * xa + wb * xb * xb);

    // multiplicity of degree k on the discretized sphere: the zonal basis
    // has one mode per degree, the full circle basis two (cos and sin)
    const int mult = (n == 2) ? 2 : 1;

    rep.lambda1 = rep.constrainedMu0;
    rep.kernelDim = 0;
    rep.kernelDimRaw = 0;
    rep.kernel.clear();
    if (std::abs(rep.constrainedMu0) < zero_tol) {
        rep.kernelDim += 1;
        rep.kernel.push_back(KernelMode{0, xa, xb});
    }
    if (std::abs(rep.mu_a[0]) < zero_tol) rep.kernelDimRaw += 1;
    if (std::abs(rep.mu_b[0]) < zero_tol) rep.kernelDimRaw += 1;

    const double pa = pr.phi(a), pb = pr.phi(b);
    double coercivity = rep.constrainedMu0; // W-norm ratio of the pair (gradient term 0)
    for (int k = 1; k <= K; ++k) {
        const double lap = double(k) * (k + n - 2);
        for (int sheet = 0; sheet < 2; ++sheet) {
            const double mu = sheet == 0 ? rep.mu_a[k] : rep.mu_b[k];
            const double p = sheet == 0 ? pa : pb;
            rep.lambda1 = std::min(rep.lambda1, mu);
            coercivity = std::min(coercivity, mu / (1.0 + lap / (p * p)));
            if (std::abs(mu) < zero_tol) {
                rep.kernelDim += mult;
                rep.kernelDimRaw += mult;
                rep.kernel.push_back(
                    KernelMode{k, sheet == 0 ? 1.0 : 0.0, sheet == 0 ? 0.0 : 1.0});
            }
        }
    }
    rep.coercivity = coercivity;
    rep.rawKernelMismatch = rep.kernelDimRaw != rep.kernelDim;
    return rep;
}

Classification classifyMinimizer(const SpectralReport& report, double zero_tol) {
    Classification c;
    c.strictly_stable = report.lambda1 > zero_tol;
    c.constant = c.strictly_stable ? report.coercivity : 0.0;
    c.kernel = report.kernel;
    return c;
}

std::vector<Eigen::VectorXd> materializeKernel(const SpectralReport& report,
                                               const GraphSystem& sys) {
    const int m = sys.modesPerSheet();
    const double c0 = std::sqrt(sys.manifold().sphereArea());
    std::vector<Eigen::VectorXd> basis;
    for (const KernelMode& km : report.kernel) {
        if (km.degree == 0) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
            v(0) = km.amp_a * c0; // constant shift km.amp on each sheet
            v(m) = km.amp_b * c0;
            basis.push_back(v);
        } else if (sys.grid().mode() == SphereMode::Zonal) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
            if (km.degree >= m) throw ConfigError("kernel degree beyond truncation");
            v(km.degree) = km.amp_a;
            v(m + km.degree) = km.amp_b;
            basis.push_back(v);
        } else {
            // full circle: cos and sin span the degree
            for (int off = 0; off < 2; ++off) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
                const int idx = 2 * km.degree - 1 + off;
                if (idx >= m) throw ConfigError("kernel degree beyond truncation");
                v(idx) = km.amp_a;
                v(m + idx) = km.amp_b;
                basis.push_back(v);
            }
        }
    }
    // Gram-Schmidt in the weighted L^2(dA) inner product
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            basis[i] -= sys.weightedDot(basis[i], basis[j]) * basis[j];
        basis[i] /= std::sqrt(sys.weightedDot(basis[i], basis[i]));
    }
    return basis;
}

nlohmann::json SpectralReport::toJson() const {
    nlohmann::json j;
    j["n"] = n;
    j["a"] = a;
    j["b"] = b;
    j["potential_a"] = qa;
    j["potential_b"] = qb;
    j["max_degree"] = maxDegree;
    j["mu_a"] = mu_a;
    j["mu_b"] = mu_b;
    j["constrained_mu0"] = constrainedMu0;
    j["pair"] = {pairA, pairB};
    j["lambda1"] = lambda1;
    j["kernel_dim"] = kernelDim;
    j["kernel_dim_raw"] = kernelDimRaw;
    j["raw_kernel_mismatch"] = rawKernelMismatch;
    j["coercivity"] = coercivity;
    nlohmann::json jk = nlohmann::json::array();
    for (const KernelMode& km : kernel)
        jk.push_back({{"degree", km.degree}, {"amp_a", km.amp_a}, {"amp_b", km.amp_b}});
    j["kernel"] = jk;
    return j;
}

} // namespace isolab
