#ifndef LLINBO_ACQUISITION_CONSTRAINED_HPP
#define LLINBO_ACQUISITION_CONSTRAINED_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <llinbo/acquisition/maximize.hpp>
#include <llinbo/acquisition/ucb.hpp>
#include <llinbo/core/gp.hpp>

namespace llinbo {

/// Largest posterior mean over the unit hypercube.
template <Belief B>
double kappa(const B& belief, std::size_t dim, long budget, std::uint64_t rng_seed)
{
    auto mean = [&](const Design& x) { return belief.posterior(x).mean; };
    return maximize_acquisition(mean, dim, budget, rng_seed).value;
}

/// The GP conditioned on f(x_llm) > kappa, represented by the fantasy models
/// built from retained posterior draws at x_llm.
///
/// posterior(x) reports the Monte-Carlo moments used by CGP-UCB:
///   mean     = average of the fantasy means,
///   variance = common fantasy variance + sample variance of the fantasy means
/// (law of total variance; the sample variance is 0 with fewer than two models).
/// With no retained models every query delegates to the base model.
class ConstrainedPosterior {
public:
    ConstrainedPosterior(GPModel base, Design x_llm, double kappa, std::vector<GPModel> retained,
                         std::vector<double> retained_samples = {}, int drawn = 0)
        : base_(std::move(base)), x_llm_(std::move(x_llm)), kappa_(kappa), retained_(std::move(retained)),
          samples_(std::move(retained_samples)), drawn_(drawn)
    {
        shared_frame_ = !retained_.empty();
        for (const auto& m : retained_) {
            if (m.dim() != base_.dim())
                throw std::invalid_argument("ConstrainedPosterior: fantasy model dimension mismatch");
            shared_frame_ = shared_frame_ && m.shares_frame_with(retained_.front());
        }
    }

    const GPModel& base() const noexcept { return base_; }
    const Design& x_llm() const noexcept { return x_llm_; }
    double kappa() const noexcept { return kappa_; }
    const std::vector<GPModel>& retained_models() const noexcept { return retained_; }
    const std::vector<double>& retained_samples() const noexcept { return samples_; }
    std::size_t retained_count() const noexcept { return retained_.size(); }
    int drawn_count() const noexcept { return drawn_; }
    std::size_t dim() const noexcept { return base_.dim(); }

    Posterior posterior(const Design& x) const
    {
        if (retained_.empty())
            return base_.posterior(x);

        double fantasy_var;
        std::vector<double> means(retained_.size());
        if (shared_frame_) {
            const Eigen::VectorXd k = retained_.front().kernel_vector(x.coords());
            fantasy_var = retained_.front().variance_from_kernel_vector(k);
            for (std::size_t s = 0; s < retained_.size(); ++s)
                means[s] = retained_[s].mean_from_kernel_vector(k);
        } else {
            fantasy_var = retained_.front().variance(x);
            for (std::size_t s = 0; s < retained_.size(); ++s)
                means[s] = retained_[s].mean(x);
        }

        const double n = static_cast<double>(means.size());
        double mean = 0.0;
        for (double m : means)
            mean += m;
        mean /= n;
        double spread = 0.0;
        if (means.size() >= 2) {
            for (double m : means)
                spread += (m - mean) * (m - mean);
            spread /= n - 1.0;
        }
        return {mean, fantasy_var + spread};
    }

private:
    GPModel base_;
    Design x_llm_;
    double kappa_;
    std::vector<GPModel> retained_;
    std::vector<double> samples_;
    int drawn_;
    bool shared_frame_ = false;
};

/// Rejection step: draw `samples` values of f(x_llm) from the posterior, keep
/// those strictly above `kappa`, and condition one fantasy model on each.
inline ConstrainedPosterior build_constrained(const GPModel& model, const Design& x_llm, double kappa, int samples,
                                              std::uint64_t rng_seed)
{
    if (samples < 0)
        throw std::invalid_argument("build_constrained: sample count must be non-negative");
    const std::vector<double> draws = sample_at(model, x_llm, samples, rng_seed);
    std::vector<double> kept;
    for (double v : draws)
        if (v > kappa)
            kept.push_back(v);

    std::vector<GPModel> fantasies;
    if (!kept.empty()) {
        const FantasyBuilder builder(model, x_llm);
        fantasies.reserve(kept.size());
        for (double v : kept)
            fantasies.push_back(builder.with_outcome(v));
    }
    return ConstrainedPosterior(model, x_llm, kappa, std::move(fantasies), std::move(kept), samples);
}

/// CGP-UCB: UCB over the constrained posterior's Monte-Carlo moments.
inline double cgp_ucb(const ConstrainedPosterior& cp, const Design& x, double beta_tilde)
{
    return ucb(cp, x, beta_tilde);
}

} // namespace llinbo

#endif
