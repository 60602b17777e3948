#ifndef ISOLAB_GRAPH_FUNCTIONALS_HPP
#define ISOLAB_GRAPH_FUNCTIONALS_HPP

#include <Eigen/Dense>
#include <json.hpp>
#include <memory>

#include "isolab/slab_region.hpp"
#include "isolab/sphere_grid.hpp"
#include "isolab/warped_product.hpp"

namespace isolab {

// A graphical deformation of a single-arc slab (a,b) x S^{n-1}: the two
// boundary spheres move to r = a + u_a(w) and r = b + u_b(w), with u_a,
// u_b truncated harmonic expansions (Full for n = 2, Zonal otherwise).
struct GraphPerturbation {
    SlabRegion base;
    SphereMode mode;
    int N;
    std::vector<double> coeffs_a;
    std::vector<double> coeffs_b;

    static GraphPerturbation zero(const WarpedProduct& M, const SlabRegion& base, int N);

    nlohmann::json toJson() const;
    static GraphPerturbation fromJson(const WarpedProduct& M, const nlohmann::json& j);
};

struct FirstVariation {
    Eigen::VectorXd gradient; // volume-projected gradient, coefficient space
    double multiplier;        // mean curvature estimate
    double norm;
};

// Discretization of the perimeter and volume functionals on graphs over a
// fixed base slab.  Coefficient vectors are stacked [sheet a; sheet b];
// the harmonic basis is orthonormal in L^2(S^{n-1}, dsigma).
class GraphSystem {
  public:
    GraphSystem(const WarpedProduct& M, const SlabRegion& base, int N, int Q = 0);

    const WarpedProduct& manifold() const { return M_; }
    const SlabRegion& base() const { return base_; }
    const SphereGrid& grid() const { return grid_; }
    int modesPerSheet() const { return grid_.numModes(); }
    int dim() const { return 2 * grid_.numModes(); }
    double endpointA() const { return a_; }
    double endpointB() const { return b_; }
    double basePerimeter() const { return base_perimeter_; }
    double baseVolume() const { return base_volume_; }

    // Area of the two graph sheets minus the base perimeter, evaluated
    // pointwise without cancellation; exact 0 at x = 0.
    double areaDelta(const Eigen::VectorXd& x) const;
    double area(const Eigen::VectorXd& x) const { return base_perimeter_ + areaDelta(x); }

    // Same sum with the accumulated magnitude sum_q w_q |dG_q|; the delta is
    // numerically indistinguishable from zero only relative to this scale.
    struct DeltaWithScale {
        double delta;
        double magnitude;
    };
    DeltaWithScale areaDeltaScaled(const Eigen::VectorXd& x) const;

    // Enclosed volume minus the base volume (per-node small integrals).
    double volumeDelta(const Eigen::VectorXd& x) const;
    double volume(const Eigen::VectorXd& x) const { return base_volume_ + volumeDelta(x); }

    Eigen::VectorXd areaGradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd areaHessian(const Eigen::VectorXd& x) const;
    Eigen::VectorXd volumeGradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd volumeHessian(const Eigen::VectorXd& x) const;

    FirstVariation firstVariation(const Eigen::VectorXd& x) const;

    // Add c times the outward constant direction so the enclosed volume
    // matches target_volume; Newton, throws SolverError after 50 steps.
    // tol_abs <= 0 selects the default 1e-13*max(1, |target|); passing a
    // tiny tolerance drives the residual to its rounding floor.
    Eigen::VectorXd projectToVolume(const Eigen::VectorXd& x, double target_volume,
                                    double tol_abs = 0.0) const;

    // Throws EmbeddednessError if a sheet leaves its safe corridor.
    void checkEmbedded(const Eigen::VectorXd& x) const;

    // sup |u| over both sheets on a dense angular sample.
    double supNorm(const Eigen::VectorXd& x) const;

    // L2(dA) inner product at the base slab (weights phi(endpoint)^{n-1}).
    double weightedDot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    // W^{1,2} norm squared: per sheet int (|grad_S v|^2/phi^2 + v^2) phi^{n-1} dsigma.
    double sobolevNormSq(const Eigen::VectorXd& x) const;

    // L1(dA) norm (used by the symmetric-difference bound checks).
    double l1Norm(const Eigen::VectorXd& x) const;

    // Volume of the symmetric difference between the graph region and an
    // arbitrary slab region (per-node interval algebra).
    double symmetricDifferenceWithSlab(const Eigen::VectorXd& x, const SlabRegion& other) const;

    Eigen::VectorXd toVector(const GraphPerturbation& u) const;
    GraphPerturbation toPerturbation(const Eigen::VectorXd& x) const;

  private:
    struct NodeState; // per-node r, slope and G-derivatives

    const WarpedProduct& M_;
    SlabRegion base_;
    double a_, b_;
    SphereGrid grid_;
    double base_perimeter_;
    double base_volume_;
};

// Convenience wrappers implementing the module operations directly on
// GraphPerturbation values (a fresh GraphSystem per call).
double graphArea(const WarpedProduct& M, const GraphPerturbation& u, int Q = 0);
double graphVolume(const WarpedProduct& M, const GraphPerturbation& u, int Q = 0);
GraphPerturbation projectToVolume(const WarpedProduct& M, const GraphPerturbation& u,
                                  double target_volume, int Q = 0);
FirstVariation firstVariationResidual(const WarpedProduct& M, const GraphPerturbation& u,
                                      int Q = 0);

} // namespace isolab

#endif
