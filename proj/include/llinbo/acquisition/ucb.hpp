#ifndef LLINBO_ACQUISITION_UCB_HPP
#define LLINBO_ACQUISITION_UCB_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>

#include <llinbo/core/design.hpp>
#include <llinbo/core/gp.hpp>

namespace llinbo {

/// Anything with a Gaussian marginal belief at a design.
template <typename B>
concept Belief = requires(const B& b, const Design& x) {
    { b.posterior(x) } -> std::convertible_to<Posterior>;
    { b.dim() } -> std::convertible_to<std::size_t>;
};

/// Exploration weight beta_t multiplying the posterior standard deviation.
struct BetaSchedule {
    enum class Mode {
        /// 2 ln(t D pi^2 / (6 delta))
        Practical,
        Constant,
        /// 2B + 2R sqrt(2(gamma + 1 + ln(4T/delta))) + sqrt(2 ln(4 S_t T / delta)),
        /// with a user-supplied bound on the information gain gamma.
        Theoretical,
    };

    Mode mode = Mode::Practical;
    double delta = 0.1;
    double value = 1.0;
    double rkhs_bound = 1.0;
    double noise_bound = 1.0;
    double gamma_bound = 1.0;

    static BetaSchedule practical(double delta = 0.1) { return {Mode::Practical, delta}; }
    static BetaSchedule constant(double value)
    {
        BetaSchedule b;
        b.mode = Mode::Constant;
        b.value = value;
        return b;
    }
    static BetaSchedule theoretical(double rkhs_bound, double noise_bound, double gamma_bound, double delta = 0.1)
    {
        BetaSchedule b;
        b.mode = Mode::Theoretical;
        b.delta = delta;
        b.rkhs_bound = rkhs_bound;
        b.noise_bound = noise_bound;
        b.gamma_bound = gamma_bound;
        return b;
    }

    /// `samples` and `horizon` only enter the theoretical mode; S_t = 0 is treated as 1.
    double at(int t, std::size_t dim, int samples = 1, int horizon = 1) const
    {
        if (t < 1)
            throw std::invalid_argument("BetaSchedule: t must be >= 1");
        switch (mode) {
        case Mode::Practical:
            if (!(delta > 0.0 && delta < 1.0))
                throw std::invalid_argument("BetaSchedule: delta must lie in (0,1)");
            return 2.0 * std::log(static_cast<double>(t) * static_cast<double>(dim) * std::numbers::pi
                                  * std::numbers::pi / (6.0 * delta));
        case Mode::Constant:
            return value;
        case Mode::Theoretical: {
            const double T = std::max(horizon, 1);
            const double S = std::max(samples, 1);
            return 2.0 * rkhs_bound
                + 2.0 * noise_bound * std::sqrt(2.0 * (gamma_bound + 1.0 + std::log(4.0 * T / delta)))
                + std::sqrt(2.0 * std::log(4.0 * S * T / delta));
        }
        }
        return value;
    }
};

/// mean(x) + beta * sqrt(variance(x)).
template <Belief B>
double ucb(const B& belief, const Design& x, double beta)
{
    if (beta < 0.0)
        throw std::invalid_argument("ucb: beta must be non-negative");
    const Posterior p = belief.posterior(x);
    return p.mean + beta * std::sqrt(p.variance);
}

} // namespace llinbo

#endif
