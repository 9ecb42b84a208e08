#pragma once

// Scalar minimization helpers: golden-section search on a bracket plus a
// log-grid bracketing pass for positive-domain unimodal functions.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rydberg {

template <class F>
double golden_section_min(F&& f, double lo, double hi, double rel_tol = 1e-9) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("golden_section_min needs 0 < lo < hi");
    }
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 400 && (b - a) > rel_tol * 0.5 * (a + b); ++iter) {
        if (fc < fd) {
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
    return 0.5 * (a + b);
}

// Scans a log-spaced grid over [lo, hi] and returns a bracket around the
// smallest sampled value.
template <class F>
std::pair<double, double> bracket_min_log(F&& f, double lo, double hi, int points = 200) {
    if (!(lo > 0.0) || !(hi > lo) || points < 3) {
        throw std::invalid_argument("bracket_min_log needs 0 < lo < hi and >= 3 points");
    }
    double best_x = lo, best_f = f(lo);
    double step = std::log(hi / lo) / (points - 1);
    for (int i = 1; i < points; ++i) {
        double x = lo * std::exp(step * i);
        double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    double factor = std::exp(step);
    return {best_x / factor, best_x * factor};
}

template <class F>
double minimize_positive(F&& f, double lo, double hi, double rel_tol = 1e-9) {
    auto [a, b] = bracket_min_log(f, lo, hi);
    return golden_section_min(f, a, b, rel_tol);
}

}  // namespace rydberg
