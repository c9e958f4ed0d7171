#ifndef COPOLEM_NUMERIC_HPP
#define COPOLEM_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace copolem {

// log(sum_i exp(args[i])), stable against overflow.
inline double log_sum_exp(std::span<const double> args)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double a : args) m = std::max(m, a);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double a : args) s += std::exp(a - m);
    return m + std::log(s);
}

inline double log_add(double a, double b)
{
    if (a < b) std::swap(a, b);
    if (!std::isfinite(a)) return a;
    return a + std::log1p(std::exp(b - a));
}

struct BrentResult {
    double x = 0.0;
    double fx = 0.0;
    int evals = 0;
};

// Brent's method for minimizing a smooth 1D function on [lo, hi].
inline BrentResult brent_minimize(const std::function<double(double)>& f,
                                  double lo, double hi,
                                  double tol = 1e-12, int max_iter = 200)
{
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    int evals = 1;
    for (int it = 0; it < max_iter; ++it) {
        double m = 0.5 * (a + b);
        double t = tol * std::abs(x) + 1e-15;
        if (std::abs(x - m) <= 2.0 * t - 0.5 * (b - a)) break;
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::abs(e) > t) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) &&
                p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < 2.0 * t || b - u < 2.0 * t)
                    d = (x < m) ? t : -t;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? (b - x) : (a - x);
            d = gold * e;
        }
        double u = (std::abs(d) >= t) ? (x + d) : (x + ((d > 0.0) ? t : -t));
        double fu = f(u);
        ++evals;
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, evals};
}

inline BrentResult brent_maximize(const std::function<double(double)>& f,
                                  double lo, double hi,
                                  double tol = 1e-12, int max_iter = 200)
{
    auto r = brent_minimize([&](double x) { return -f(x); }, lo, hi, tol, max_iter);
    r.fx = -r.fx;
    return r;
}

// Bisection for a root of f on [lo, hi]; requires a sign change.
inline double bisect_root(const std::function<double(double)>& f,
                          double lo, double hi, double xtol = 1e-10)
{
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("bisect_root: no sign change in bracket");
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Least-squares fit of y = c0 + c1*u over given points; returns (c0, c1, max residual).
struct LinFit {
    double intercept = 0.0;
    double slope = 0.0;
    double max_residual = 0.0;
};

inline LinFit fit_linear(std::span<const double> u, std::span<const double> y)
{
    const std::size_t n = u.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_linear: need >= 2 points");
    double su = 0, sy = 0, suu = 0, suy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        su += u[i]; sy += y[i]; suu += u[i] * u[i]; suy += u[i] * y[i];
    }
    double det = n * suu - su * su;
    LinFit out;
    out.slope = (n * suy - su * sy) / det;
    out.intercept = (sy * suu - su * suy) / det;
    for (std::size_t i = 0; i < n; ++i)
        out.max_residual = std::max(out.max_residual,
                                    std::abs(y[i] - out.intercept - out.slope * u[i]));
    return out;
}

inline double mean(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Standard error of the mean.
inline double stderr_of_mean(std::span<const double> v)
{
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    double m = mean(v), s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return std::sqrt(s2 / static_cast<double>(n - 1) / static_cast<double>(n));
}

} // namespace copolem

#endif
