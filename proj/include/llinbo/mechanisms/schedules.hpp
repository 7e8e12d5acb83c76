#ifndef LLINBO_MECHANISMS_SCHEDULES_HPP
#define LLINBO_MECHANISMS_SCHEDULES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <llinbo/acquisition/maximize.hpp>
#include <llinbo/acquisition/ucb.hpp>

namespace llinbo {

/// Probability p_t of taking the GP's choice in the transient mechanism.
struct ProbabilitySchedule {
    enum class Kind {
        QuadraticOverHorizon, // min(t^2 / T, 1)
        Constant,
        OneMinusInverse, // 1 - 1/t
        OneMinusInverseSquare, // 1 - 1/t^2
    };
    Kind kind = Kind::QuadraticOverHorizon;
    double value = 1.0;

    double at(int t, int horizon) const
    {
        const double td = t;
        switch (kind) {
        case Kind::QuadraticOverHorizon:
            return std::min(td * td / static_cast<double>(horizon), 1.0);
        case Kind::Constant:
            return std::clamp(value, 0.0, 1.0);
        case Kind::OneMinusInverse:
            return 1.0 - 1.0 / td;
        case Kind::OneMinusInverseSquare:
            return 1.0 - 1.0 / (td * td);
        }
        return 1.0;
    }
};

/// Tolerance psi_t of the justify mechanism.
struct PsiSchedule {
    enum class Kind {
        InverseTimeSigma0, // sigma_0(x_llm,1) / t
        Constant,
        Infinite,
    };
    Kind kind = Kind::InverseTimeSigma0;
    double value = 0.0;

    /// `sigma0` is the posterior standard deviation at the first agent suggestion.
    double at(int t, double sigma0) const
    {
        switch (kind) {
        case Kind::InverseTimeSigma0:
            if (!std::isfinite(sigma0))
                throw std::logic_error("PsiSchedule: sigma0 has not been captured");
            return sigma0 / static_cast<double>(t);
        case Kind::Constant:
            return value;
        case Kind::Infinite:
            return std::numeric_limits<double>::infinity();
        }
        return value;
    }
};

/// Rejection-sampling draw count S_t of the constrained mechanism.
struct SampleSchedule {
    enum class Kind {
        InverseSquare, // floor(scale / t^2)
        Constant,
    };
    Kind kind = Kind::InverseSquare;
    double scale = 1e4;
    int value = 0;

    int at(int t) const
    {
        switch (kind) {
        case Kind::InverseSquare: {
            const double td = t;
            return std::max(0, static_cast<int>(std::floor(scale / (td * td))));
        }
        case Kind::Constant:
            return std::max(0, value);
        }
        return 0;
    }
};

struct Schedules {
    ProbabilitySchedule p{};
    PsiSchedule psi{};
    SampleSchedule samples{};
    BetaSchedule beta = BetaSchedule::practical(0.1);
    /// Exploration weight for CGP-UCB; defaults to `beta` when unset.
    std::optional<BetaSchedule> beta_tilde{};
    int horizon = 1;
    /// 0 selects default_acquisition_budget(D).
    long acquisition_budget = 0;
    /// Posterior standard deviation at the first agent suggestion; set by the run loop.
    double sigma0 = std::numeric_limits<double>::quiet_NaN();

    double p_at(int t) const { return p.at(t, horizon); }
    double psi_at(int t) const { return psi.at(t, sigma0); }
    int samples_at(int t) const { return samples.at(t); }
    double beta_at(int t, std::size_t dim) const { return beta.at(t, dim, 1, horizon); }
    double beta_tilde_at(int t, std::size_t dim, int s_t) const
    {
        return beta_tilde ? beta_tilde->at(t, dim, s_t, horizon) : beta_at(t, dim);
    }
    long budget(std::size_t dim) const
    {
        return acquisition_budget > 0 ? acquisition_budget : default_acquisition_budget(dim);
    }
};

} // namespace llinbo

#endif
