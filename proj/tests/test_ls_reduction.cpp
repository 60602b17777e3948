#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isolab/errors.hpp"
#include "isolab/ls_reduction.hpp"
#include "isolab/warp_geom.hpp"
#include "test_support.hpp"

using namespace isolab;
using namespace isolab::testsupport;

namespace {
const double kPi = 3.14159265358979323846;

LSReduction makeReduction(const WarpedProduct& M, const SlabRegion& slab, int N = 16) {
    const SpectralReport rep = constrainedSpectrum(M, slab, 16);
    return LSReduction(M, slab, rep, N);
}
} // namespace

TEST_CASE("solveUpsilon: zero at zero, zero along flat translations") {
    WarpedProduct flat(3, WarpProfile::constant(10.0));
    const SlabRegion slab = SlabRegion::interval(flat.period(), 2.0, 2.0 + kPi * 10.0);
    LSReduction red = makeReduction(flat, slab);
    REQUIRE(red.kernelDim() == 1);

    const auto s0 = red.solveUpsilon(Eigen::VectorXd::Zero(1));
    CHECK(s0.upsilon.norm() == 0.0);
    CHECK(s0.iterations == 0);

    // translates of the flat slab are exactly critical: w = 0 for all zeta
    for (double z : {1e-3, 1e-2, 4e-2, -3e-2}) {
        Eigen::VectorXd zeta(1);
        zeta(0) = z;
        const auto s = red.solveUpsilon(zeta);
        CHECK(s.upsilon.norm() < 1e-14);
        CHECK(s.residual < 1e-10);
    }

    Eigen::VectorXd big(1);
    big(0) = 0.2;
    CHECK_THROWS_AS(red.solveUpsilon(big), ConfigError);
}

TEST_CASE("solveUpsilon: analytic translation kernel and quadratic smallness") {
    WarpedProduct M(3, WarpProfile::analyticPower(10.0, 2));
    const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, 1.0 + kPi * 10.0);
    LSReduction red = makeReduction(M, slab);
    REQUIRE(red.kernelDim() == 1);
    // ||Upsilon(zeta)|| = O(zeta^2), verified by halving
    double prev_bound = -1.0;
    for (double z = 4e-2; z > 4e-3; z /= 2.0) {
        Eigen::VectorXd zeta(1);
        zeta(0) = z;
        const auto s = red.solveUpsilon(zeta);
        const double norm = std::sqrt(red.system().weightedDot(s.upsilon, s.upsilon));
        CHECK(norm <= 1e-8 + 1.0 * z * z);
        if (prev_bound >= 0.0) CHECK(norm <= prev_bound + 1e-14);
        prev_bound = norm;
    }
}

TEST_CASE("reducedFunction: integrable flat case") {
    WarpedProduct flat(3, WarpProfile::constant(10.0));
    const SlabRegion slab = SlabRegion::interval(flat.period(), 0.0, kPi * 10.0);
    LSReduction red = makeReduction(flat, slab);
    const ReductionResult rr = red.reducedFunction(geometricGrid(1e-3, 5e-2, 16));
    CHECK(rr.integrable);
    CHECK(rr.upsilonAtZeroNorm == 0.0);
    CHECK(rr.upsilonGradAtZeroFD < 1e-8);
    for (double dv : rr.reducedDelta) CHECK(std::abs(dv) < 1e-12 * (1.0 + kPi * 40.0));
    // every grid point is a critical point of P: the perimeter equals the
    // base perimeter to 1e-10
    for (std::size_t i = 0; i < rr.zetas.size(); ++i)
        if (std::abs(rr.gradP[i]) < 1e-10)
            CHECK(std::abs(rr.reducedDelta[i]) < 1e-10);
}

TEST_CASE("reducedFunction: leading order 2m for analytic powers") {
    for (int m : {2, 3}) {
        WarpedProduct M(3, WarpProfile::analyticPower(10.0, m));
        const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, 1.0 + kPi * 10.0);
        LSReduction red = makeReduction(M, slab);
        const ReductionResult rr = red.reducedFunction(geometricGrid(1e-3, 5e-2, 16));
        CHECK_FALSE(rr.integrable);
        CHECK(rr.order == doctest::Approx(2.0 * m).epsilon(0.05 / (2.0 * m)));
        CHECK(rr.upsilonAtZeroNorm == 0.0);
        CHECK(rr.upsilonGradAtZeroFD < 1e-8);

        // oracle: the reduced energy along the translation kernel is the
        // closed-form slab energy of the translated slab
        const double sigma = M.sphereArea();
        const WarpProfile& pr = M.profile();
        for (std::size_t i = 0; i < rr.zetas.size(); i += 5) {
            const double z = rr.zetas[i];
            const double closed =
                sigma * (powDiff(pr.phi(1.0), pr.gapFromMin(z), 2) +
                         powDiff(pr.phi(1.0 + kPi * 10.0), pr.gapAt(1.0 + kPi * 10.0, z), 2));
            CHECK(rr.reducedDelta[i] == doctest::Approx(closed).epsilon(1e-8));
        }
    }
}

TEST_CASE("reducedFunction: flat bump has unbounded per-decade slopes") {
    WarpedProduct M(3, WarpProfile::flatBump(10.0, 8));
    const double rho0 = solveVolumeEndpoint(M, 1.0, 0.5 * M.totalVolume());
    const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, rho0);
    LSReduction red = makeReduction(M, slab);
    const ReductionResult rr = red.reducedFunction(geometricGrid(1e-3, 5e-2, 16));
    CHECK_FALSE(rr.integrable);
    REQUIRE(rr.perDecadeSlopes.size() >= 2);
    for (std::size_t i = 0; i + 1 < rr.perDecadeSlopes.size(); ++i)
        CHECK(rr.perDecadeSlopes[i].second > rr.perDecadeSlopes[i + 1].second);
    CHECK(rr.perDecadeSlopes.front().second > 10.0);
}

TEST_CASE("pi_K residual identity: kernel-projected gradient equals dP/dzeta") {
    WarpedProduct M(3, WarpProfile::analyticPower(10.0, 2));
    const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, 1.0 + kPi * 10.0);
    LSReduction red = makeReduction(M, slab);
    const std::vector<double> grid = geometricGrid(5e-3, 5e-2, 24);
    const ReductionResult rr = red.reducedFunction(grid);
    // dP/dzeta_on by nonuniform central differences of the tabulated P
    const double scale = red.kernelScale(0);
    for (std::size_t i = 1; i + 1 < rr.zetas.size(); ++i) {
        const double hl = (rr.zetas[i] - rr.zetas[i - 1]) * scale;
        const double hr = (rr.zetas[i + 1] - rr.zetas[i]) * scale;
        const double fd =
            (hl * hl * rr.reducedDelta[i + 1] - hr * hr * rr.reducedDelta[i - 1] +
             (hr * hr - hl * hl) * rr.reducedDelta[i]) /
            (hl * hr * (hl + hr));
        CHECK(rr.gradP[i] == doctest::Approx(fd).epsilon(1e-3).scale(1e-6));
    }
}

TEST_CASE("transverse coercivity: positive ratio and mode predictions") {
    WarpedProduct M(3, WarpProfile::analyticPower(10.0, 2));
    const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, 1.0 + kPi * 10.0);
    const SpectralReport rep = constrainedSpectrum(M, slab, 16);
    LSReduction red(M, slab, rep, 16);

    const CoercivityResult cr = red.transverseCoercivity(200, 0.02, 12345);
    CHECK(cr.used >= 190);
    CHECK(cr.minRatio > 0.0);

    // pure k-mode samples: the quotient approaches mu_k/(2(1 + lap/phi^2))
    GraphSystem& sys = const_cast<GraphSystem&>(red.system());
    const int mm = sys.modesPerSheet();
    for (int k = 1; k <= 3; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * mm);
        v(mm + k) = 1.0; // sheet b, degree k
        const double t = 0.005;
        const Eigen::VectorXd u = sys.projectToVolume(t * v, sys.baseVolume(), 1e-300);
        const double num = sys.areaDelta(u); // u_L = 0 for kernel-orthogonal modes
        const double den = sys.sobolevNormSq(u);
        const double p = M.profile().phi(1.0 + kPi * 10.0);
        const double lap = double(k) * (k + 1);
        const double predict = 0.5 * rep.mu_b[k] / (1.0 + lap / (p * p));
        CHECK(num / den == doctest::Approx(predict).epsilon(0.02));
    }

    // a sample exactly in the kernel family is skipped
    Eigen::VectorXd kdir = red.kernelDirection(0) * 0.01;
    const Eigen::VectorXd zeta = red.kernelCoordinates(kdir);
    Eigen::VectorXd zl(1);
    zl(0) = zeta(0) / red.kernelScale(0);
    const auto s = red.solveUpsilon(zl);
    const Eigen::VectorXd diff = kdir + s.upsilon - s.state; // == kdir - zeta part
    CHECK(red.system().sobolevNormSq(diff) < 1e-10);
}

TEST_CASE("reduction requires a degenerate slab") {
    WarpedProduct M(3, WarpProfile::analyticPower(10.0, 1));
    const SlabRegion slab = SlabRegion::interval(M.period(), 1.0, 1.0 + kPi * 10.0);
    const SpectralReport rep = constrainedSpectrum(M, slab, 16);
    CHECK_THROWS_AS(LSReduction(M, slab, rep, 12), ContractError);
}
