#ifndef LLINBO_BENCHLAB_ORACLE_HPP
#define LLINBO_BENCHLAB_ORACLE_HPP

#include <algorithm>
#include <limits>
#include <utility>
#include <numeric>
#include <vector>

#include <llinbo/acquisition/sobol.hpp>
#include <llinbo/benchlab/functions.hpp>
#include <llinbo/core/pattern_search.hpp>

namespace llinbo::bench {

struct OracleResult {
    double value;
    std::vector<double> argmax;
    long evaluations;
};

namespace detail {

/// max over x2 of f(x1, x2): 1001-point line scan, then 1-D compass search.
template <typename Eval>
std::pair<double, double> best_on_line(Eval& eval, double x1)
{
    constexpr int n = 1001;
    double best_x2 = 0.0, best_v = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double x2 = j / (n - 1.0);
        const double v = eval(std::vector<double>{x1, x2});
        if (v > best_v) {
            best_v = v;
            best_x2 = x2;
        }
    }
    const std::vector<double> lo{0.0}, hi{1.0};
    auto line = [&](std::span<const double> t) { return eval(std::vector<double>{x1, t[0]}); };
    auto r = pattern_search_maximize(line, {best_x2}, best_v, lo, hi, {1.0 / (n - 1.0), 1e-15, 5000});
    return {r.value, r.x[0]};
}

} // namespace detail

/// Global maximum by brute force: a 1001^2 grid (2-D) or 2^17 Sobol points
/// (higher D), then compass search from the best grid/scatter points. In 2-D a
/// nested profile search (outer compass search over x1 of the line maxima over
/// x2) runs as well, which follows narrow curved ridges that defeat axis polling.
inline OracleResult compute_known_max(FunctionName name)
{
    const BenchmarkFunction& f = benchmark(name);
    const std::size_t D = f.dim;
    long evals = 0;
    auto eval = [&](std::span<const double> x) {
        ++evals;
        return f.fn(x);
    };

    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
    int starts;
    double step;
    if (D == 2) {
        constexpr int n = 1001;
        pts.reserve(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pts.push_back({i / (n - 1.0), j / (n - 1.0)});
        starts = 16;
        step = 1.0 / (n - 1.0);
    } else {
        SobolSequence sobol(D, 20240601);
        for (int i = 0; i < (1 << 17); ++i)
            pts.push_back(sobol.next());
        starts = 32;
        step = 0.02;
    }
    vals.reserve(pts.size());
    for (const auto& p : pts)
        vals.push_back(eval(p));

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                      [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

    const std::vector<double> lo(D, 0.0), hi(D, 1.0);
    OracleResult best{vals[order[0]], pts[order[0]], 0};
    for (int s = 0; s < starts; ++s) {
        const std::size_t i = order[static_cast<std::size_t>(s)];
        auto r = pattern_search_maximize(eval, pts[i], vals[i], lo, hi, {step, 1e-13, 200000});
        if (r.value > best.value) {
            best.value = r.value;
            best.argmax = r.x;
        }
    }
    if (D == 2) {
        for (int s = 0; s < 4; ++s) {
            const std::size_t i = order[static_cast<std::size_t>(s)];
            auto profile = [&](std::span<const double> t) { return detail::best_on_line(eval, t[0]).first; };
            const std::vector<double> lo1{0.0}, hi1{1.0};
            auto r = pattern_search_maximize(profile, {pts[i][0]}, profile(std::span<const double>(pts[i].data(), 1)),
                                             lo1, hi1, {step, 1e-13, 400});
            const auto [v, x2] = detail::best_on_line(eval, r.x[0]);
            if (v > best.value) {
                best.value = v;
                best.argmax = {r.x[0], x2};
            }
        }
    }
    best.evaluations = evals;
    return best;
}

} // namespace llinbo::bench

#endif
