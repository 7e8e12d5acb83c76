#ifndef LLINBO_CORE_PATTERN_SEARCH_HPP
#define LLINBO_CORE_PATTERN_SEARCH_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace llinbo {

struct PatternSearchOptions {
    double initial_step = 0.1;
    double min_step = 1e-7;
    long max_evals = 1000;
};

struct PatternSearchResult {
    std::vector<double> x;
    double value;
    long evaluations;
};

/// Bounded coordinate-wise pattern search (compass search), maximizing.
///
/// Polls +step then -step along each axis in order, moving on the first strict
/// improvement. A full sweep without improvement halves the step. Stops when the
/// step drops below min_step or the evaluation budget is spent. `start_value`
/// must be f(start); it is not re-evaluated.
template <typename F>
PatternSearchResult pattern_search_maximize(F&& f, std::vector<double> start, double start_value,
                                            std::span<const double> lower, std::span<const double> upper,
                                            const PatternSearchOptions& opts)
{
    std::vector<double> x = std::move(start);
    double fx = start_value;
    long evals = 0;
    double step = opts.initial_step;
    std::vector<double> cand(x.size());

    while (step >= opts.min_step && evals < opts.max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size() && evals < opts.max_evals; ++i) {
            for (double dir : {1.0, -1.0}) {
                const double moved = std::clamp(x[i] + dir * step, lower[i], upper[i]);
                if (moved == x[i])
                    continue;
                cand = x;
                cand[i] = moved;
                const double v = f(std::span<const double>(cand));
                ++evals;
                if (v > fx) {
                    x = cand;
                    fx = v;
                    improved = true;
                    break;
                }
                if (evals >= opts.max_evals)
                    break;
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return {std::move(x), fx, evals};
}

} // namespace llinbo

#endif
