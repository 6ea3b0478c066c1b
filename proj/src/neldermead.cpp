#include "gridfreq/neldermead.hpp"

#include <algorithm>
#include <cmath>

#include "gridfreq/errors.hpp"

namespace gridfreq {
namespace {

void clamp_into(std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

}  // namespace

NmResult nelder_mead(const NmObjective& f, std::vector<double> x0,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     const NmOptions& opt,
                     const std::function<bool(std::span<const double>, double)>& accept) {
    const std::size_t n = x0.size();
    if (n == 0 || lo.size() != n || hi.size() != n)
        throw InvalidParameter("nelder_mead: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (!(lo[i] < hi[i])) throw InvalidParameter("nelder_mead: empty box");
    clamp_into(x0, lo, hi);

    NmResult res;
    res.x = x0;
    bool stop = false;
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        if (std::isnan(v)) throw NumericError("nelder_mead: objective returned NaN");
        if (v < res.fx || res.history.empty()) {
            res.x = x;
            res.fx = v;
            if (accept && accept(x, v)) stop = true;
        }
        return v;
    };

    // Simplex: x0 plus one point stepped along each axis (reflected off the
    // upper bound when x0 sits against it).
    std::vector<std::vector<double>> sx(n + 1, x0);
    std::vector<double> sf(n + 1);
    res.fx = eval(x0);
    res.history.push_back(res.fx);
    sf[0] = res.fx;
    for (std::size_t i = 0; i < n && !stop; ++i) {
        double h = opt.init_step * (hi[i] - lo[i]);
        if (x0[i] + h > hi[i]) h = -h;
        sx[i + 1][i] = std::min(std::max(x0[i] + h, lo[i]), hi[i]);
        sf[i + 1] = eval(sx[i + 1]);
    }

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return sf[a] < sf[b]; });
        std::vector<std::vector<double>> nx(n + 1);
        std::vector<double> nf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            nx[i] = sx[idx[i]];
            nf[i] = sf[idx[i]];
        }
        sx.swap(nx);
        sf.swap(nf);
    };

    for (int it = 0; it < opt.max_iters && !stop; ++it) {
        order();
        if (std::abs(sf[n] - sf[0]) < opt.ftol) {
            res.history.push_back(res.fx);
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += sx[i][j] / double(n);

        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (sx[n][j] - centroid[j]);
            clamp_into(p, lo, hi);
            return p;
        };

        const auto xr = along(-1.0);  // reflection
        const double fr = eval(xr);
        if (stop) break;
        if (fr < sf[0]) {
            const auto xe = along(-2.0);  // expansion
            const double fe = eval(xe);
            if (fe < fr) {
                sx[n] = xe;
                sf[n] = fe;
            } else {
                sx[n] = xr;
                sf[n] = fr;
            }
        } else if (fr < sf[n - 1]) {
            sx[n] = xr;
            sf[n] = fr;
        } else {
            const bool outside = fr < sf[n];
            const auto xc = along(outside ? -0.5 : 0.5);  // contraction
            const double fc = eval(xc);
            if (!stop && fc < std::min(fr, sf[n])) {
                sx[n] = xc;
                sf[n] = fc;
            } else if (!stop) {
                for (std::size_t i = 1; i <= n; ++i) {  // shrink toward best
                    for (std::size_t j = 0; j < n; ++j)
                        sx[i][j] = sx[0][j] + 0.5 * (sx[i][j] - sx[0][j]);
                    sf[i] = eval(sx[i]);
                    if (stop) break;
                }
            }
        }
        res.iterations = it + 1;
        res.history.push_back(res.fx);
    }

    res.stopped_early = stop;
    return res;
}

}  // namespace gridfreq
