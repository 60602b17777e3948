#ifndef ISOLAB_JACOBI_SPECTRUM_HPP
#define ISOLAB_JACOBI_SPECTRUM_HPP

#include <Eigen/Dense>
#include <json.hpp>
#include <vector>

#include "isolab/graph_functionals.hpp"
#include "isolab/slab_region.hpp"
#include "isolab/warped_product.hpp"

namespace isolab {

// Jacobi eigenvalue of the slice {r0} x S^{n-1} on spherical harmonics of
// degree k:  mu_k = k(k+n-2)/phi^2 - (n-1)[(phi'/phi)^2 - phi''/phi].
double jacobiEigenvalue(const WarpedProduct& M, double r0, int k);

// Zeroth-order potential q = (n-1)[(phi'/phi)^2 - phi''/phi] = |A|^2 + Ric(nu,nu).
double jacobiPotential(const WarpedProduct& M, double r0);

// A kernel element of the constrained second variation: amplitude pair on
// the two sheets of a single harmonic degree (r-coordinate convention).
struct KernelMode {
    int degree;
    double amp_a;
    double amp_b;
};

struct SpectralReport {
    int n;
    double a, b;              // slab endpoints
    double qa, qb;            // per-sheet potentials
    int maxDegree;
    std::vector<double> mu_a; // degree 0..K eigenvalues, sheet a
    std::vector<double> mu_b;
    double constrainedMu0;    // k=0 eigenvalue on the volume-preserving pair
    double pairA, pairB;      // that pair direction, sup-normalized
    double lambda1;           // smallest constrained eigenvalue
    int kernelDim;            // after the volume-constraint reduction
    int kernelDimRaw;         // zero modes before the reduction
    bool rawKernelMismatch;    // raw and reduced kernel dimensions disagree
    double coercivity;        // Rayleigh constant w.r.t. the W^{1,2} norm
    std::vector<KernelMode> kernel;

    nlohmann::json toJson() const;
};

// Assemble the constrained second-variation spectrum of a critical slab by
// harmonic degree.  Throws ContractError when the slab is not critical or
// not a single arc.  zero_tol decides membership in the kernel.
SpectralReport constrainedSpectrum(const WarpedProduct& M, const SlabRegion& slab, int K,
                                   double zero_tol = 1e-9);

struct Classification {
    bool strictly_stable;
    double constant; // coercivity certificate when strictly stable
    std::vector<KernelMode> kernel;
};

Classification classifyMinimizer(const SpectralReport& report, double zero_tol = 1e-9);

// Kernel modes as coefficient vectors of a GraphSystem over the same slab,
// orthonormalized in the base L^2(dA) inner product.
std::vector<Eigen::VectorXd> materializeKernel(const SpectralReport& report,
                                               const GraphSystem& sys);

} // namespace isolab

#endif
