#ifndef ISOLAB_LS_REDUCTION_HPP
#define ISOLAB_LS_REDUCTION_HPP

#include <Eigen/Dense>
#include <json.hpp>
#include <optional>
#include <vector>

#include "isolab/graph_functionals.hpp"
#include "isolab/jacobi_spectrum.hpp"

namespace isolab {

struct ReductionResult {
    std::vector<double> zetas;        // kernel coordinate, r-shift length units
    std::vector<double> reducedDelta; // P(zeta) - P(0)
    std::vector<double> gradP;        // dP/dzeta, orthonormal kernel coordinate
    std::vector<double> residuals;    // transverse gradient norm at the solution
    std::vector<double> upsilonNorms; // weighted L2 norm of Upsilon(zeta)

    bool integrable = false;
    double order = 0.0;            // fitted leading vanishing order p
    double orderCoefficient = 0.0; // exp(intercept) of the log-log fit
    double orderResidual = 0.0;    // max log10 residual of that fit
    std::vector<std::pair<double, double>> perDecadeSlopes; // (log10 center, slope)

    double upsilonAtZeroNorm = 0.0;
    double upsilonGradAtZeroFD = 0.0;  // ||dUpsilon/dzeta(0)||, finite differences
    double maxUpsilonDerivRatio = 0.0; // FD bound check on the grid
    double largestConvergedZeta = 0.0;

    nlohmann::json toJson() const;
};

struct CoercivityResult {
    double minRatio = 0.0; // min over samples of (P(u) - P(u_L)) / ||u - u_L||_W^2
    int used = 0;
    int skipped = 0; // samples with u essentially in the kernel family
    nlohmann::json toJson() const;
};

// Finite-dimensional Lyapunov-Schmidt reduction at a degenerate critical
// slab: for kernel coordinates zeta, solve for the transverse correction
// Upsilon(zeta) that kills the gradient off the kernel while holding the
// enclosed volume, then study the reduced energy P(zeta).
class LSReduction {
  public:
    LSReduction(const WarpedProduct& M, const SlabRegion& slab, const SpectralReport& report,
                int N, int Q = 0, double zeta_max = 0.05);

    const GraphSystem& system() const { return sys_; }
    int kernelDim() const { return int(kernel_sup_.size()); }
    // sup-normalized kernel direction i as a coefficient vector
    const Eigen::VectorXd& kernelDirection(int i) const { return kernel_sup_[i]; }
    // conversion factor between length-unit and orthonormal coordinates
    double kernelScale(int i) const { return kernel_scale_[i]; }

    struct Solution {
        Eigen::VectorXd state;   // full coefficient vector zeta + Upsilon
        Eigen::VectorXd upsilon; // transverse part alone
        double lambda;           // volume multiplier
        double residual;         // transverse gradient norm
        int iterations;
    };

    // zeta in length units along each kernel direction.  Throws SolverError
    // on Newton divergence and ConfigError outside the trust region.
    Solution solveUpsilon(const Eigen::VectorXd& zeta) const;

    // Tabulate P(zeta) - P(0) along the first kernel direction.
    ReductionResult reducedFunction(const std::vector<double>& zeta_grid) const;

    // min over random volume-preserving u of the transverse quotient
    // (P(u) - P(u_L)) / ||u - u_L||^2_{W^{1,2}},  u_L = P_K u + Upsilon(P_K u).
    CoercivityResult transverseCoercivity(int samples, double cap, unsigned long seed) const;

    // kernel projection of a state, orthonormal coordinates
    Eigen::VectorXd kernelCoordinates(const Eigen::VectorXd& x) const;

  private:
    GraphSystem sys_;
    std::vector<Eigen::VectorXd> kernel_on_;  // weighted-orthonormal kernel basis
    std::vector<Eigen::VectorXd> kernel_sup_; // same directions, sup-normalized
    std::vector<double> kernel_scale_;        // ||kernel_sup||_M
    Eigen::MatrixXd Z_;                       // weighted-orthonormal complement basis
    double zeta_max_;
    double base_multiplier_;
};

// Geometric grid with points_per_decade points per factor of ten.
std::vector<double> geometricGrid(double lo, double hi, int points_per_decade);

} // namespace isolab

#endif
