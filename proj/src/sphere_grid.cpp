#include "isolab/sphere_grid.hpp"

#include <cmath>

#include "isolab/errors.hpp"
#include "isolab/warped_product.hpp"

namespace isolab {

namespace {

// Recurrence coefficients of the orthonormal polynomials for the weight
// (1-t^2)^{(n-3)/2} on [-1,1]:  t p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
double offdiag(int k, int n) {
    const double num = double(k) * (k + n - 3);
    const double den = double(2 * k + n - 2) * (2 * k + n - 4);
    return std::sqrt(num / den);
}

// Evaluate p_0..p_N and their t-derivatives at t.
void gegenbauerEval(int N, int n, double mu0, double t,
                    std::vector<double>& p, std::vector<double>& dp) {
    p.assign(N + 1, 0.0);
    dp.assign(N + 1, 0.0);
    p[0] = 1.0 / std::sqrt(mu0);
    if (N == 0) return;
    const double b1 = offdiag(1, n);
    p[1] = t * p[0] / b1;
    dp[1] = p[0] / b1;
    for (int k = 1; k < N; ++k) {
        const double bk = offdiag(k, n), bk1 = offdiag(k + 1, n);
        p[k + 1] = (t * p[k] - bk * p[k - 1]) / bk1;
        dp[k + 1] = (p[k] + t * dp[k] - bk * dp[k - 1]) / bk1;
    }
}

} // namespace

SphereGrid SphereGrid::make(int n, int N, int Q) {
    if (n < 2 || n > 7) throw ConfigError("sphere grid: n must lie in 2..7");
    if (N < 1) throw ConfigError("sphere grid: need at least one nonconstant mode");
    SphereGrid g;
    g.n_ = n;
    g.N_ = N;
    g.sigma_ = unitSphereArea(n);

    if (n == 2) {
        g.mode_ = SphereMode::Full;
        if (Q <= 0) Q = 2 * N + 16;
        if (Q < 2 * N + 2) throw ConfigError("sphere grid: Q too small for N");
        g.Q_ = Q;
        const int modes = 2 * N + 1;
        g.w_.assign(Q, 2.0 * M_PI / Q);
        g.theta_.resize(Q);
        g.B_.resize(Q, modes);
        g.D_.resize(Q, modes);
        g.degree_.resize(modes);
        g.degree_[0] = 0;
        for (int k = 1; k <= N; ++k) {
            g.degree_[2 * k - 1] = k;
            g.degree_[2 * k] = k;
        }
        const double c0 = 1.0 / std::sqrt(2.0 * M_PI);
        const double ck = 1.0 / std::sqrt(M_PI);
        for (int q = 0; q < Q; ++q) {
            const double th = 2.0 * M_PI * q / Q;
            g.theta_[q] = th;
            g.B_(q, 0) = c0;
            g.D_(q, 0) = 0.0;
            for (int k = 1; k <= N; ++k) {
                g.B_(q, 2 * k - 1) = ck * std::cos(k * th);
                g.B_(q, 2 * k) = ck * std::sin(k * th);
                g.D_(q, 2 * k - 1) = -ck * k * std::sin(k * th);
                g.D_(q, 2 * k) = ck * k * std::cos(k * th);
            }
        }
        return g;
    }

    g.mode_ = SphereMode::Zonal;
    if (Q <= 0) Q = 2 * N + 16;
    if (Q < N + 2) throw ConfigError("sphere grid: Q too small for N");
    g.Q_ = Q;
    const double sigma_fiber = unitSphereArea(n - 1);
    const double mu0 = g.sigma_ / sigma_fiber; // int (1-t^2)^{(n-3)/2} dt

    // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix,
    // weights mu0 * (first eigenvector component)^2.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Q, Q);
    for (int k = 1; k < Q; ++k) {
        const double b = offdiag(k, n);
        J(k - 1, k) = b;
        J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw SolverError("Golub-Welsch eigensolve failed");

    const int modes = N + 1;
    g.w_.resize(Q);
    g.theta_.resize(Q);
    g.B_.resize(Q, modes);
    g.D_.resize(Q, modes);
    g.degree_.resize(modes);
    for (int k = 0; k <= N; ++k) g.degree_[k] = k;

    std::vector<double> p, dp;
    const double bnorm = 1.0 / std::sqrt(sigma_fiber);
    for (int q = 0; q < Q; ++q) {
        const double t = es.eigenvalues()(q);
        const double wq = sigma_fiber * mu0 * es.eigenvectors()(0, q) * es.eigenvectors()(0, q);
        g.w_[q] = wq;
        g.theta_[q] = std::acos(std::clamp(t, -1.0, 1.0));
        gegenbauerEval(N, n, mu0, t, p, dp);
        const double sin_th = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int m = 0; m <= N; ++m) {
            g.B_(q, m) = bnorm * p[m];
            g.D_(q, m) = -bnorm * dp[m] * sin_th; // d/dtheta = -sin(theta) d/dt
        }
    }
    return g;
}

double SphereGrid::laplaceEigenvalue(int m) const {
    const int k = degree_[m];
    return double(k) * (k + n_ - 2);
}

double SphereGrid::evaluate(const Eigen::VectorXd& coeffs, double theta) const {
    if (mode_ == SphereMode::Full) {
        double v = coeffs(0) / std::sqrt(2.0 * M_PI);
        const double ck = 1.0 / std::sqrt(M_PI);
        for (int k = 1; k <= N_; ++k) {
            v += ck * (coeffs(2 * k - 1) * std::cos(k * theta) +
                       coeffs(2 * k) * std::sin(k * theta));
        }
        return v;
    }
    const double sigma_fiber = unitSphereArea(n_ - 1);
    const double mu0 = sigma_ / sigma_fiber;
    std::vector<double> p, dp;
    gegenbauerEval(N_, n_, mu0, std::cos(theta), p, dp);
    double v = 0.0;
    for (int m = 0; m <= N_; ++m) v += coeffs(m) * p[m] / std::sqrt(sigma_fiber);
    return v;
}

} // namespace isolab
