#ifndef LLINBO_BENCHLAB_FUNCTIONS_HPP
#define LLINBO_BENCHLAB_FUNCTIONS_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <llinbo/benchlab/known_maxima.hpp>
#include <llinbo/core/design.hpp>

namespace llinbo::bench {

enum class FunctionName { Levy2, Rastrigin2, Branin2, Bukin2, Hartmann4, Ackley6 };

inline constexpr std::array kAllFunctions{FunctionName::Levy2,   FunctionName::Rastrigin2, FunctionName::Branin2,
                                          FunctionName::Bukin2, FunctionName::Hartmann4,  FunctionName::Ackley6};

// Objectives on [0,1]^D in the maximization framing. Each body follows the
// rescaled, sign-adjusted form used by the experiments verbatim; several differ
// from the textbook definitions (Rastrigin's -12 offset, the truncated Levy sum,
// un-negated Hartmann and Ackley).

inline double levy2(std::span<const double> x)
{
    constexpr double pi = std::numbers::pi;
    const double w1 = 1.0 + (x[0] - 0.5) / 4.0;
    const double w2 = 1.0 + (x[1] - 0.5) / 4.0;
    const double s1 = std::sin(pi * w1);
    const double s_mid = std::sin(pi * w1 + 1.0);
    const double s_tail = std::sin(2.0 * pi * w2);
    return -s1 * s1 - (w1 - 1.0) * (w1 - 1.0) * (1.0 + 10.0 * s_mid * s_mid)
        - (w2 - 1.0) * (w2 - 1.0) * (1.0 + s_tail * s_tail);
}

inline double rastrigin2(std::span<const double> x)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double xp = 10.24 * x[i] - 5.0;
        sum += xp * xp - 10.0 * std::cos(2.0 * std::numbers::pi * xp);
    }
    return -12.0 - sum;
}

inline double branin2(std::span<const double> x)
{
    constexpr double pi = std::numbers::pi;
    const double x1 = 15.0 * x[0] - 5.0;
    const double x2 = 15.0 * x[1];
    const double inner = x2 - 5.1 / (4.0 * pi * pi) * x1 * x1 + 5.0 / pi * x1 - 6.0;
    return -inner * inner - 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x1) - 10.0;
}

inline double bukin2(std::span<const double> x)
{
    const double x1 = 20.0 * x[0] - 15.0;
    const double x2 = 6.0 * x[1] - 3.0;
    return -100.0 * std::sqrt(std::abs(x2 - 0.01 * x1 * x1)) - 0.01 * std::abs(x1 + 10.0);
}

namespace hartmann {
inline constexpr std::array<double, 4> a{1.0, 1.2, 3.0, 3.2};
inline constexpr std::array<std::array<double, 4>, 4> A{{
    {10.0, 3.0, 17.0, 3.5},
    {0.05, 10.0, 17.0, 0.1},
    {3.0, 3.5, 1.7, 10.0},
    {17.0, 8.0, 0.05, 10.0},
}};
inline constexpr std::array<std::array<double, 4>, 4> P{{
    {0.1312, 0.1696, 0.5569, 0.0124},
    {0.2329, 0.4135, 0.8307, 0.3736},
    {0.2348, 0.1451, 0.3522, 0.2883},
    {0.4047, 0.8828, 0.8732, 0.5743},
}};
} // namespace hartmann

inline double hartmann4(std::span<const double> x)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = x[j] - hartmann::P[i][j];
            inner += hartmann::A[i][j] * d * d;
        }
        sum += hartmann::a[i] * std::exp(-inner);
    }
    return -sum;
}

inline double ackley6(std::span<const double> x)
{
    double sq = 0.0, cs = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        sq += x[i] * x[i];
        cs += std::cos(2.0 * std::numbers::pi * x[i]);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / 6.0)) - std::exp(cs / 6.0) + 20.0 + std::numbers::e;
}

struct BenchmarkFunction {
    FunctionName name;
    std::string_view id;
    std::size_t dim;
    double (*fn)(std::span<const double>);
    /// Pinned by the `oracle` subcommand; see known_maxima.hpp.
    double known_max;
    std::span<const double> known_argmax;
    /// Function patterns text for the agent's description card.
    std::string_view description;

    double eval(const Design& x) const
    {
        if (x.dim() != dim)
            throw std::invalid_argument(std::string(id) + ": expected dimension " + std::to_string(dim) + ", got "
                                        + std::to_string(x.dim()));
        return fn(x.coords());
    }

    double operator()(const Design& x) const { return eval(x); }
    Design argmax() const { return Design(std::vector<double>(known_argmax.begin(), known_argmax.end())); }
};

inline const BenchmarkFunction& benchmark(FunctionName name)
{
    using namespace known_maxima;
    static const std::array<BenchmarkFunction, 6> table{{
        {FunctionName::Levy2, "Levy2", 2, &levy2, kLevy2, kLevy2Argmax,
         "highly multimodal but with a unique global maximum"},
        {FunctionName::Rastrigin2, "Rastrigin2", 2, &rastrigin2, kRastrigin2, kRastrigin2Argmax,
         "which is highly multimodal, non-convex function with a large number of regularly spaced local minima"},
        {FunctionName::Branin2, "Branin2", 2, &branin2, kBranin2, kBranin2Argmax,
         "smooth, multimodal benchmark with three global maxima"},
        {FunctionName::Bukin2, "Bukin2", 2, &bukin2, kBukin2, kBukin2Argmax,
         "steep, narrow, and highly non-convex landscape with a sharp valley and a unique global maximum"},
        {FunctionName::Hartmann4, "Hartmann4", 4, &hartmann4, kHartmann4, kHartmann4Argmax,
         "4-dimensional, non-convex, multi-modal and is composed of weighted, anisotropic Gaussian-like bumps "
         "centered at different points, making it highly non-separable and challenging to optimize"},
        {FunctionName::Ackley6, "Ackley6", 6, &ackley6, kAckley6, kAckley6Argmax,
         "6-dimensional, non-convex, and multi-modal. The function exhibits a nearly flat outer region and a large "
         "hole at the center, resulting in many local optima surrounding a single global optimum. It is highly "
         "symmetric and separable in nature, but optimization is still challenging due to the numerous local "
         "maxima"},
    }};
    return table[static_cast<std::size_t>(name)];
}

inline double eval_benchmark(FunctionName name, const Design& x) { return benchmark(name).eval(x); }

inline FunctionName parse_function_name(std::string_view s)
{
    for (auto f : kAllFunctions)
        if (benchmark(f).id == s)
            return f;
    throw std::invalid_argument("unknown benchmark function: " + std::string(s));
}

} // namespace llinbo::bench

#endif
