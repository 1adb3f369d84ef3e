#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "spinforge/errors.hpp"

namespace spinforge {

// Composite Simpson rule with `intervals` subdivisions (rounded up to even).
template <class F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double odd = 0.0, even = 0.0;
    for (int k = 1; k < intervals; k += 2) odd += f(a + k * h);
    for (int k = 2; k < intervals; k += 2) even += f(a + k * h);
    return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Simpson rule over uniformly spaced samples. An odd interval count is
// handled with a 3/8 tail so the composite stays fourth order.
inline double simpson_samples(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 2) throw ConfigError("simpson_samples needs at least two samples");
    const std::size_t intervals = n - 1;
    if (intervals == 1) return 0.5 * h * (v[0] + v[1]);
    if (intervals == 3)
        return 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);

    std::size_t body = intervals;
    double tail = 0.0;
    if (intervals % 2 != 0) {
        body = intervals - 3;
        const std::size_t i = body;
        tail = 3.0 * h / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
    }
    double odd = 0.0, even = 0.0;
    for (std::size_t k = 1; k < body; k += 2) odd += v[k];
    for (std::size_t k = 2; k < body; k += 2) even += v[k];
    double s = body > 0 ? (h / 3.0) * (v[0] + v[body] + 4.0 * odd + 2.0 * even) : 0.0;
    return s + tail;
}

// Trapezoid rule for a periodic integrand sampled on [0, T] with v.back()
// the same node as v.front(); for smooth periodic data this converges
// faster than any power of h.
inline double periodic_trapezoid(const std::vector<double>& v, double h) {
    if (v.size() < 2) throw ConfigError("periodic_trapezoid needs at least two samples");
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) s += v[k];
    return h * s;
}

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with an absolute tolerance. The range is cut
// into unit-width panels first so the error budget holds on long intervals.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw ConfigError("adaptive_simpson requires finite bounds");
    if (a == b) return 0.0;
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double panel_tol = tol / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = lo + (hi - lo) * p / panels;
        const double pb = lo + (hi - lo) * (p + 1) / panels;
        const double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::adaptive_simpson_rec(f, pa, pb, fa, fm, fb, whole, panel_tol, 48);
    }
    return sign * total;
}

}  // namespace spinforge
