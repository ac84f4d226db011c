#pragma once

// Hoelder seminorms, local exponent fits, and the two bound probes: the
// log-modulus bound on T_k f and the factorial growth of T_k f at a point of
// analyticity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sivt/expr.hpp"
#include "sivt/operators.hpp"
#include "sivt/probe.hpp"

namespace sivt {

struct HolderNorm {
    double seminorm = 0.0;
    double sup = 0.0;

    double norm() const noexcept { return seminorm + sup; }
};

/// Seminorm max |f(x2) - f(x1)|/|x2 - x1|^alpha over the dyadic pairs of I
/// (adjacent nodes at every level until n_pairs pairs are used), and the
/// sampled sup |f| over the same nodes.
inline HolderNorm holder_seminorm(const std::function<double(double)>& f, const Interval& I, double alpha,
                                  long n_pairs = 4096) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
    HolderNorm out;
    long used = 0;
    int level = 0;
    std::vector<double> vals{f(I.a), f(I.b)};
    out.sup = std::max(std::fabs(vals[0]), std::fabs(vals[1]));
    while (true) {
        const long cells = 1L << level;
        const double h = I.length() / static_cast<double>(cells);
        const double q = std::pow(h, alpha);
        for (long i = 0; i < cells; ++i) out.seminorm = std::max(out.seminorm, std::fabs(vals[i + 1] - vals[i]) / q);
        used += cells;
        if (used >= n_pairs || level >= 24) break;
        // Refine: insert midpoints.
        std::vector<double> next;
        next.reserve(2 * cells + 1);
        for (long i = 0; i < cells; ++i) {
            next.push_back(vals[i]);
            const double m = f(I.a + (i + 0.5) * h);
            out.sup = std::max(out.sup, std::fabs(m));
            next.push_back(m);
        }
        next.push_back(vals.back());
        vals.swap(next);
        ++level;
    }
    return out;
}

inline HolderNorm holder_seminorm(const FuncSpec& f, const Interval& I, double alpha, long n_pairs = 4096) {
    return holder_seminorm([&f](double x) { return f(x); }, I, alpha, n_pairs);
}

/// sum_{i<k} sup|f^(i)| + ||f^(k)||, the C^{k,alpha} norm on I.
inline double holder_norm(const FuncSpec& f, const Interval& I, int k, double alpha, long n_pairs = 4096) {
    const auto tower = derivative_tower(f, k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) total += holder_seminorm(tower[i], I, alpha, n_pairs).sup;
    return total + holder_seminorm(tower[k], I, alpha, n_pairs).norm();
}

struct HolderFit {
    double alpha_hat = 0.0;
    double log_const = 0.0;
    double r2 = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    /// Scales that survived the noise filter.
    int n_scales = 0;
};

/// Offsets sampled around x0 for a dyadic list of scales: n_per points in
/// each band (h/2, h] on both sides, down to half the smallest scale.
inline std::vector<double> modulus_offsets(std::span<const double> scales, int n_per = 12) {
    if (scales.empty()) throw std::invalid_argument("modulus_offsets: no scales");
    std::vector<double> hs(scales.begin(), scales.end());
    std::sort(hs.begin(), hs.end());
    hs.insert(hs.begin(), 0.5 * hs.front());
    std::vector<double> out;
    for (double h : hs)
        for (int i = 1; i <= n_per; ++i) {
            const double d = h * (0.5 + 0.5 * i / n_per);
            out.push_back(-d);
            out.push_back(d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Fit log sup_{|d|<=h} |f(x0+d) - f(x0)| against log h by unweighted least
/// squares. Scales whose modulus is below 1e3 x noise are dropped; if nothing
/// is left the fit returns the sentinel exponent 1.5.
inline HolderFit modulus_and_fit(const std::function<double(double)>& f, double x0, std::span<const double> scales,
                                 double noise = 0.0, int n_per = 12) {
    HolderFit fit;
    std::vector<double> hs(scales.begin(), scales.end());
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (hs.size() < 2 || !(hs.front() > 0.0)) throw std::invalid_argument("modulus_and_fit: need two positive scales");
    fit.h_min = hs.front();
    fit.h_max = hs.back();

    const double f0 = f(x0);
    const auto offsets = modulus_offsets(hs, n_per);
    std::vector<std::pair<double, double>> diffs;  // (|d|, |f(x0+d) - f0|)
    diffs.reserve(offsets.size());
    for (double d : offsets) diffs.emplace_back(std::fabs(d), std::fabs(f(x0 + d) - f0));
    std::sort(diffs.begin(), diffs.end());

    std::vector<double> lx, ly;
    double running = 0.0;
    std::size_t j = 0;
    for (double h : hs) {
        while (j < diffs.size() && diffs[j].first <= h) running = std::max(running, diffs[j++].second);
        if (!(running > 0.0) || running < 1e3 * noise) continue;
        lx.push_back(std::log(h));
        ly.push_back(std::log(running));
    }
    fit.n_scales = static_cast<int>(lx.size());
    if (lx.size() < 2) {
        fit.alpha_hat = 1.5;
        fit.r2 = 1.0;
        return fit;
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    fit.alpha_hat = std::clamp(slope, 0.0, 1.5);
    fit.log_const = my - slope * mx;
    fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return fit;
}

/// h = (b - a) 2^{-j}, j = j_min..j_max.
inline std::vector<double> dyadic_scales(double length, int j_min, int j_max) {
    if (j_min > j_max) throw std::invalid_argument("dyadic_scales: j_min > j_max");
    std::vector<double> out;
    for (int j = j_min; j <= j_max; ++j) out.push_back(std::ldexp(length, -j));
    return out;
}

/// Pairs (m - h, m + h), h = (b - a) 2^{-j}, at each anchor m.
struct PairFamily {
    std::vector<double> anchors;
    int j_min = 3;
    int j_max = 16;

    /// Five anchors at 1/8, 1/4, 1/2, 3/4, 7/8 of I.
    static PairFamily standard(const Interval& I) {
        PairFamily p;
        for (double t : {0.125, 0.25, 0.5, 0.75, 0.875}) p.anchors.push_back(I.a + t * I.length());
        return p;
    }
};

/// Ratios |T_k f(x2) - T_k f(x1)| / (||f||_{C^{k,alpha}} D^alpha (ln((b-a)/D) + 1)),
/// D = x2 - x1, over a dyadic pair family. The unknown constant of the bound
/// is not asserted; the gating record requires the worst ratio over the
/// finest decade of scales to stay within 5x the worst over the coarsest.
inline ProbeReport t_bound_ratio(const FuncSpec& f, const Interval& I, double alpha, int k,
                                 const PairFamily& pairs, const OpConfig& cfg = {}) {
    ProbeReport rep("t_bound_ratio k=" + std::to_string(k));
    const double norm = holder_norm(f, I, k, alpha);
    const double L = I.length();
    const double h_fine = std::ldexp(L, -pairs.j_max), h_coarse = std::ldexp(L, -pairs.j_min);
    double fine_worst = 0.0, coarse_worst = 0.0;
    auto Tk = [&](double x) { return apply_Tk(f, I, x, k, cfg).value; };
    for (double m : pairs.anchors) {
        for (int j = pairs.j_min; j <= pairs.j_max; ++j) {
            const double h = std::ldexp(L, -j);
            const double x1 = m - h, x2 = m + h;
            if (!(I.interior(x1) && I.interior(x2))) continue;
            const double D = x2 - x1;
            const double num = std::fabs(Tk(x2) - Tk(x1));
            const double den = norm * std::pow(D, alpha) * (std::log(L / D) + 1.0);
            const double ratio = den > 0.0 ? num / den : 0.0;
            rep.note("m=" + expr::detail::fmt17(m) + " j=" + std::to_string(j), ratio);
            if (h <= 10.0 * h_fine) fine_worst = std::max(fine_worst, ratio);
            if (h >= 0.1 * h_coarse) coarse_worst = std::max(coarse_worst, ratio);
        }
    }
    rep.note("coarsest-decade worst ratio", coarse_worst);
    rep.note("finest-decade worst ratio", fine_worst);
    rep.check("scale stability", fine_worst, 5.0 * coarse_worst);
    return rep;
}

struct AnalyticityProbeConfig {
    double x0 = 0.0;
    double delta = 1.0;
    /// Taylor coefficient bound |f^(l)(x0)| <= l! c^l.
    double c = 0.5;
    /// Radius on which the Taylor series is known to converge.
    double delta1 = 1.0;
    int k_max = 6;

    void validate() const {
        if (!(delta > 0.0)) throw std::invalid_argument("analyticity probe: delta must be positive");
        if (delta > delta1 * (1.0 + 1e-12) || delta > 1.0 / (2.0 * c) * (1.0 + 1e-12))
            throw std::invalid_argument("analyticity probe: delta must not exceed min(delta1, 1/(2c))");
        if (k_max < 0 || k_max > kMaxDerivativeOrder)
            throw std::invalid_argument("analyticity probe: k_max must lie in [0, 8]");
    }
};

/// |T_k f(x0)| on (x0 - delta, x0 + delta) against 2 k! (1/(2 delta))^k for k = 0..k_max.
inline ProbeReport analyticity_probe(const FuncSpec& f, const AnalyticityProbeConfig& cfg,
                                     const OpConfig& opcfg = {}) {
    cfg.validate();
    ProbeReport rep("analyticity_probe", 1e-6);
    const Interval I(cfg.x0 - cfg.delta, cfg.x0 + cfg.delta);
    for (int k = 0; k <= cfg.k_max; ++k) {
        const QuadResult r = apply_Tk(f, I, cfg.x0, k, opcfg);
        if (!r.converged) throw std::runtime_error("analyticity probe: T_" + std::to_string(k) + " did not converge");
        const double bound = 2.0 * detail::factorial(k) * std::pow(0.5 / cfg.delta, k);
        rep.check("k=" + std::to_string(k), std::fabs(r.value), bound);
    }
    return rep;
}

}  // namespace sivt
