#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "curvkit/errors.hpp"

namespace curvkit {

struct SearchResult {
    double x_min;       // midpoint of the final bracket
    double f_min;       // best interior evaluation inside the final bracket
    int evaluations;
    std::vector<std::pair<double, double>> bracket_history;  // (lo, hi) per iteration
    std::vector<std::pair<double, double>> probes;            // every (x, f(x)) evaluated
};

// Golden-section interval reduction until hi - lo <= tol_x. One evaluation per
// iteration after the initial two, so evaluations <= ceil(log((hi-lo)/tol)/log(phi)) + 2.
template <class F>
SearchResult golden_section(F&& f, double lo, double hi, double tol_x = 1e-4) {
    if (!(lo < hi)) throw InvalidBracket("golden_section: need lo < hi");
    if (!(tol_x > 0.0)) throw InvalidParameter("golden_section: tol_x must be positive");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    SearchResult result;
    result.evaluations = 0;
    auto eval = [&](double x) {
        double v = f(x);
        result.evaluations++;
        result.probes.emplace_back(x, v);
        return v;
    };

    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = eval(c);
    double fd = eval(d);
    result.bracket_history.emplace_back(lo, hi);

    while (hi - lo > tol_x) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = eval(d);
        }
        result.bracket_history.emplace_back(lo, hi);
    }

    result.x_min = 0.5 * (lo + hi);
    result.f_min = std::min(fc, fd);
    return result;
}

}  // namespace curvkit
