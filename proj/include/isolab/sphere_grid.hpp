#ifndef ISOLAB_SPHERE_GRID_HPP
#define ISOLAB_SPHERE_GRID_HPP

#include <Eigen/Dense>
#include <vector>

namespace isolab {

enum class SphereMode { Full, Zonal };

// Quadrature nodes/weights on S^{n-1} together with the truncated harmonic
// basis evaluated there.
//
//   Full  (n = 2):  uniform trapezoid in the angle, basis 1, cos k0, sin k0
//   Zonal (n >= 3): Gauss nodes for the weight (1-t^2)^{(n-3)/2} in
//                   t = cos(polar angle), basis = normalized Gegenbauer
//                   (Legendre for n = 3)
//
// Basis functions are orthonormal in L^2(S^{n-1}, dsigma); weights sum to
// sigma_{n-1}.  deriv(q, m) holds the derivative of mode m with respect to
// the polar angle at node q, so |grad_S u| at a node is |sum c_m deriv|.
class SphereGrid {
  public:
    static SphereGrid make(int n, int N, int Q);

    SphereMode mode() const { return mode_; }
    int dimension() const { return n_; }
    int maxDegree() const { return N_; }
    int nodes() const { return Q_; }
    int numModes() const { return int(degree_.size()); }

    double weight(int q) const { return w_[q]; }
    double value(int q, int m) const { return B_(q, m); }
    double deriv(int q, int m) const { return D_(q, m); }
    int degree(int m) const { return degree_[m]; }
    // -Laplace-Beltrami eigenvalue k(k+n-2) of mode m on the unit sphere
    double laplaceEigenvalue(int m) const;

    // Evaluate a coefficient vector at an arbitrary polar angle.
    double evaluate(const Eigen::VectorXd& coeffs, double theta) const;

    double sphereArea() const { return sigma_; }

  private:
    SphereMode mode_;
    int n_ = 2, N_ = 0, Q_ = 0;
    double sigma_ = 0.0;
    std::vector<double> w_;
    std::vector<double> theta_; // polar angle of each node
    Eigen::MatrixXd B_, D_;
    std::vector<int> degree_;
};

} // namespace isolab

#endif
