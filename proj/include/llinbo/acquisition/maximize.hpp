#ifndef LLINBO_ACQUISITION_MAXIMIZE_HPP
#define LLINBO_ACQUISITION_MAXIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <llinbo/acquisition/sobol.hpp>
#include <llinbo/core/design.hpp>
#include <llinbo/core/pattern_search.hpp>

namespace llinbo {

class AcquisitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AcquisitionResult {
    Design argmax;
    double value;
    long evaluations;
};

template <typename F>
concept AcquisitionFunctional = std::invocable<const F&, const Design&>
    && std::convertible_to<std::invoke_result_t<const F&, const Design&>, double>;

inline constexpr long kMinAcquisitionBudget = 64;
inline constexpr int kRefinementStarts = 4;
inline constexpr double kTieTolerance = 1e-12;

inline long default_acquisition_budget(std::size_t dim)
{
    return dim <= 2 ? 4096L : 4096L * static_cast<long>(dim);
}

namespace detail {

/// Higher value wins; values within kTieTolerance go to the lexicographically smaller design.
inline bool better_candidate(double va, const std::vector<double>& xa, double vb, const std::vector<double>& xb)
{
    if (va > vb + kTieTolerance)
        return true;
    if (vb > va + kTieTolerance)
        return false;
    return xa < xb;
}

} // namespace detail

/// Maximizes `af` over [0,1]^D: a Sobol scatter of ceil(budget/2) points, then
/// compass-search refinement from the best four, splitting the remaining budget.
/// Deterministic given `rng_seed`.
template <AcquisitionFunctional F>
AcquisitionResult maximize_acquisition(const F& af, std::size_t dim, long budget, std::uint64_t rng_seed)
{
    if (dim == 0)
        throw std::invalid_argument("maximize_acquisition: dimension must be positive");
    if (budget < kMinAcquisitionBudget)
        throw std::invalid_argument("maximize_acquisition: budget must be at least 64");

    long evaluations = 0;
    auto evaluate = [&](std::span<const double> x) {
        Design d(std::vector<double>(x.begin(), x.end()));
        const double v = af(d);
        ++evaluations;
        if (!std::isfinite(v))
            throw AcquisitionError("non-finite acquisition value " + std::to_string(v) + " at design " + d.str());
        return v;
    };

    const long n_scatter = (budget + 1) / 2;
    SobolSequence sobol(dim, rng_seed);
    std::vector<std::vector<double>> points(static_cast<std::size_t>(n_scatter));
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i] = sobol.next();
        values[i] = evaluate(points[i]);
    }

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b])
            return values[a] > values[b];
        return points[a] < points[b];
    });

    const int starts = static_cast<int>(std::min<std::size_t>(kRefinementStarts, order.size()));
    const long refine_budget = budget - n_scatter;
    const std::vector<double> lower(dim, 0.0), upper(dim, 1.0);
    const double step = 0.5 / std::pow(static_cast<double>(n_scatter), 1.0 / static_cast<double>(dim));

    std::vector<double> best_x = points[order[0]];
    double best_v = values[order[0]];
    for (int s = 0; s < starts; ++s) {
        long share = refine_budget / starts + (s == 0 ? refine_budget % starts : 0);
        const std::size_t idx = order[static_cast<std::size_t>(s)];
        if (share <= 0)
            continue;
        auto r = pattern_search_maximize(evaluate, points[idx], values[idx], lower, upper, {step, 1e-7, share});
        if (detail::better_candidate(r.value, r.x, best_v, best_x)) {
            best_v = r.value;
            best_x = std::move(r.x);
        }
    }
    return {Design(std::move(best_x)), best_v, evaluations};
}

} // namespace llinbo

#endif
