#ifndef ISOLAB_QUADRATURE_HPP
#define ISOLAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "isolab/errors.hpp"

namespace isolab {
namespace quad {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = gk15_wk[7] * fc;
    double resg = gk15_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk15_x[i];
        const double fsum = f(c - dx) + f(c + dx);
        resk += gk15_wk[i] * fsum;
        if (i % 2 == 1) resg += gk15_wg[i / 2] * fsum;
    }
    const double value = resk * h;
    double err = std::abs((resk - resg) * h);
    // QUADPACK-style sharpening of the raw Gauss/Kronrod discrepancy.
    err = err * std::min(1.0, std::pow(200.0 * err / (std::abs(value) + 1e-300), 1.5)) + 1e-17 * std::abs(value);
    return {a, b, value, err};
}

struct Options {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_panels = 4000;
};

// Globally adaptive Gauss-Kronrod integration of f over [a, b].
// Throws QuadratureError when the panel budget runs out before the
// tolerance is met; the exception carries the achieved error estimate.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = Options{}) {
    if (a == b) return 0.0;
    std::priority_queue<Panel> heap;
    Panel p0 = gk15(f, a, b);
    double total = p0.value;
    double toterr = p0.error;
    heap.push(p0);
    int panels = 1;
    while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (panels >= opt.max_panels) {
            throw QuadratureError("adaptive quadrature did not converge",
                                  toterr / std::max(1.0, std::abs(total)));
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at rounding resolution: accept current estimate
            heap.push({worst.a, worst.b, worst.value, 0.0});
            toterr -= worst.error;
            continue;
        }
        Panel l = gk15(f, worst.a, mid);
        Panel r = gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        toterr += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    return total;
}

} // namespace quad
} // namespace isolab

#endif
