// roots.hpp - Bisection with geometric bracket expansion, golden-section maximisation

#pragma once

#include "xyotto/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace xyotto::roots {

struct Bracket {
    double lo;
    double hi;
};

// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign (or zero).
// Stops when the bracket width drops below rel_tol * |midpoint|.
template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-8, int max_iter = 200) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0)) {
        throw NumericalFailure("bisect: no sign change on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::abs(mid)) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Grows hi by `factor` until pred(hi) holds. Returns the last bracket [prev, hi].
template <typename Pred>
Bracket expand_up(Pred&& pred, double start, double factor = 2.0, int max_doublings = 60) {
    double prev = start;
    double x = start;
    for (int i = 0; i <= max_doublings; ++i) {
        if (pred(x)) return {prev, x};
        prev = x;
        x *= factor;
    }
    throw NumericalFailure("expand_up: bracket expansion failed after " +
                           std::to_string(max_doublings) + " doublings from " +
                           std::to_string(start));
}

// Shrinks lo by `factor` until pred(lo) holds. Returns [lo, prev].
template <typename Pred>
Bracket expand_down(Pred&& pred, double start, double factor = 2.0, int max_doublings = 60) {
    double prev = start;
    double x = start;
    for (int i = 0; i <= max_doublings; ++i) {
        if (pred(x)) return {x, prev};
        prev = x;
        x /= factor;
    }
    throw NumericalFailure("expand_down: bracket expansion failed after " +
                           std::to_string(max_doublings) + " halvings from " +
                           std::to_string(start));
}

// Maximiser of a unimodal f on [a, b].
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double rel_tol = 1e-10,
                                             int max_iter = 500) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > rel_tol * (std::abs(c) + std::abs(d)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace xyotto::roots
