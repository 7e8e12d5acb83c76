#ifndef LLINBO_CORE_GP_HPP
#define LLINBO_CORE_GP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <llinbo/core/design.hpp>
#include <llinbo/core/kernel.hpp>
#include <llinbo/core/pattern_search.hpp>
#include <llinbo/core/random.hpp>

namespace llinbo {

/// Thrown when K + noise*I stays indefinite after jitter escalation.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultNoiseVariance = 1e-6;

/// Affine map between raw outcomes and the units the GP is fitted in:
/// raw = shift + scale * internal.
struct OutputScaling {
    double shift = 0.0;
    double scale = 1.0;
};

struct Posterior {
    double mean;
    double variance;
};

struct FixedSpec {
    KernelSpec spec;
    OutputScaling scaling{};
};

struct MleOptions {
    KernelFamily family = KernelFamily::Matern52Ard;
    int starts = 8;
    double lengthscale_min = 1e-2;
    double lengthscale_max = 1e2;
    double signal_variance_min = 1e-3;
    double signal_variance_max = 1e3;
    /// Fit on z-scored outcomes; posteriors are reported in raw units.
    bool standardize = false;
    std::uint64_t seed = 0;
    long evals_per_start = 300;
    double initial_log_step = 1.0;
    double min_log_step = 1e-3;
};

struct Mle {
    MleOptions options{};
};

using FitMode = std::variant<FixedSpec, Mle>;

namespace detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Frame {
    RowMatrix designs; // n x D
    Eigen::MatrixXd chol; // lower factor of K + (noise + jitter) I
    double jitter = 0.0;
};

inline std::span<const double> row_span(const RowMatrix& m, Eigen::Index i)
{
    return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline Eigen::MatrixXd gram(const KernelSpec& spec, const RowMatrix& X)
{
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = spec.signal_variance;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double k = detail::kernel_from_sq_distance(
                spec, detail::scaled_sq_distance(spec, row_span(X, i), row_span(X, j)));
            K(i, j) = k;
            K(j, i) = k;
        }
    }
    return K;
}

inline std::optional<Eigen::MatrixXd> try_cholesky(const Eigen::MatrixXd& A)
{
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        return std::nullopt;
    Eigen::MatrixXd L = llt.matrixL();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        if (!(L(i, i) > 0.0) || !std::isfinite(L(i, i)))
            return std::nullopt;
    return L;
}

struct Factored {
    Eigen::MatrixXd chol;
    double jitter;
};

/// Factorizes A (= K + noise*I), escalating diagonal jitter 1e-10, 1e-9, ..., 1e-4
/// beyond `min_jitter` until the factorization succeeds.
inline Factored factor_with_jitter(const Eigen::MatrixXd& A, double min_jitter = 0.0)
{
    if (A.rows() == 0)
        return {Eigen::MatrixXd(0, 0), min_jitter};
    std::vector<double> ladder{min_jitter};
    for (double j = 1e-10; j <= 1e-4 * (1 + 1e-9); j *= 10.0)
        if (j > min_jitter)
            ladder.push_back(j);
    for (double jitter : ladder) {
        Eigen::MatrixXd B = A;
        if (jitter > 0.0)
            B.diagonal().array() += jitter;
        if (auto L = try_cholesky(B))
            return {std::move(*L), jitter};
    }
    throw FactorizationError("Cholesky factorization failed after jitter escalation to 1e-4 (n = "
                             + std::to_string(A.rows()) + ")");
}

inline Eigen::VectorXd chol_solve(const Eigen::MatrixXd& L, const Eigen::VectorXd& b)
{
    Eigen::VectorXd v = L.triangularView<Eigen::Lower>().solve(b);
    return L.transpose().triangularView<Eigen::Upper>().solve(v);
}

} // namespace detail

/// Exact GP regression posterior. Immutable after construction; copies share the
/// factorized design frame.
class GPModel {
public:
    const KernelSpec& spec() const noexcept { return spec_; }
    double noise_variance() const noexcept { return noise_; }
    const OutputScaling& scaling() const noexcept { return scaling_; }
    double jitter() const noexcept { return frame_->jitter; }
    std::size_t dim() const noexcept { return spec_.dim(); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(frame_->designs.rows()); }

    /// Training data in raw outcome units.
    Dataset data() const
    {
        Dataset d(dim());
        for (Eigen::Index i = 0; i < frame_->designs.rows(); ++i) {
            auto r = detail::row_span(frame_->designs, i);
            d.add(Design(std::vector<double>(r.begin(), r.end())), scaling_.shift + scaling_.scale * y_(i));
        }
        return d;
    }

    const Eigen::MatrixXd& cholesky() const noexcept { return frame_->chol; }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }

    /// Prior variance k(x,x) in raw units.
    double prior_variance() const noexcept { return scaling_.scale * scaling_.scale * spec_.signal_variance; }
    double prior_mean() const noexcept { return scaling_.shift + scaling_.scale * spec_.mean_constant; }

    Posterior posterior(const Design& x) const { return posterior(x.coords()); }

    Posterior posterior(std::span<const double> x) const
    {
        const Eigen::VectorXd k = kernel_vector(x);
        return {mean_from_kernel_vector(k), variance_from_kernel_vector(k)};
    }

    double mean(const Design& x) const { return posterior(x).mean; }
    double variance(const Design& x) const { return posterior(x).variance; }

    /// k(x, X) against training designs in the kernel's internal units.
    Eigen::VectorXd kernel_vector(std::span<const double> x) const
    {
        check_dim(x.size());
        const auto& X = frame_->designs;
        Eigen::VectorXd k(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            k(i) = detail::kernel_from_sq_distance(spec_, detail::scaled_sq_distance(spec_, x, detail::row_span(X, i)));
        return k;
    }

    double mean_from_kernel_vector(const Eigen::VectorXd& k) const
    {
        const double m = spec_.mean_constant + (k.size() ? k.dot(alpha_) : 0.0);
        return scaling_.shift + scaling_.scale * m;
    }

    double variance_from_kernel_vector(const Eigen::VectorXd& k) const
    {
        double v = spec_.signal_variance;
        if (k.size()) {
            const Eigen::VectorXd w = frame_->chol.triangularView<Eigen::Lower>().solve(k);
            v -= w.squaredNorm();
        }
        return scaling_.scale * scaling_.scale * std::max(v, 0.0);
    }

    /// Log marginal likelihood of the internal-unit outcomes.
    double log_marginal_likelihood() const
    {
        const Eigen::Index n = y_.size();
        if (n == 0)
            return 0.0;
        const Eigen::VectorXd r
            = frame_->chol.triangularView<Eigen::Lower>().solve((y_.array() - spec_.mean_constant).matrix());
        return -0.5 * r.squaredNorm() - frame_->chol.diagonal().array().log().sum()
            - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    }

    bool shares_frame_with(const GPModel& other) const noexcept { return frame_ == other.frame_; }

    nlohmann::json summary() const
    {
        return {
            {"kernel", std::string(to_string(spec_.family))},
            {"lengthscales", spec_.lengthscales},
            {"signal_variance", spec_.signal_variance},
            {"mean_constant", spec_.mean_constant},
            {"noise_variance", noise_},
            {"jitter", frame_->jitter},
            {"n", size()},
            {"output_shift", scaling_.shift},
            {"output_scale", scaling_.scale},
        };
    }

private:
    GPModel(std::shared_ptr<const detail::Frame> frame, KernelSpec spec, double noise, OutputScaling scaling,
            Eigen::VectorXd y)
        : frame_(std::move(frame)), spec_(std::move(spec)), noise_(noise), scaling_(scaling), y_(std::move(y))
    {
        if (y_.size())
            alpha_ = detail::chol_solve(frame_->chol, (y_.array() - spec_.mean_constant).matrix());
    }

    void check_dim(std::size_t d) const
    {
        if (d != dim())
            throw std::invalid_argument("GPModel: dimension mismatch (model " + std::to_string(dim()) + ", input "
                                        + std::to_string(d) + ")");
    }

    std::shared_ptr<const detail::Frame> frame_;
    KernelSpec spec_;
    double noise_;
    OutputScaling scaling_;
    Eigen::VectorXd y_; // internal units
    Eigen::VectorXd alpha_;

    friend GPModel fit_gp(const Dataset&, double, const FitMode&);
    friend class FantasyBuilder;
};

namespace detail {

inline RowMatrix design_matrix(const Dataset& data, std::size_t dim)
{
    RowMatrix X(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i].design[j];
    return X;
}

inline OutputScaling standardizer(const Dataset& data)
{
    const double n = static_cast<double>(data.size());
    double mean = 0.0;
    for (const auto& o : data)
        mean += o.outcome;
    mean /= n;
    double ss = 0.0;
    for (const auto& o : data)
        ss += (o.outcome - mean) * (o.outcome - mean);
    double sd = data.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 1.0;
    if (!(sd > 1e-12) || !std::isfinite(sd))
        sd = 1.0;
    return {mean, sd};
}

/// Profiled log marginal likelihood: the constant mean is set to its GLS optimum
/// (1' A^-1 y) / (1' A^-1 1). Returns -inf when the factorization fails.
struct ProfiledFit {
    double lml;
    double mean_constant;
};

inline ProfiledFit profiled_lml(const KernelSpec& spec, const RowMatrix& X, const Eigen::VectorXd& y, double noise)
{
    Eigen::MatrixXd A = gram(spec, X);
    A.diagonal().array() += noise;
    Factored f;
    try {
        f = factor_with_jitter(A);
    } catch (const FactorizationError&) {
        return {-std::numeric_limits<double>::infinity(), 0.0};
    }
    const auto L = f.chol.triangularView<Eigen::Lower>();
    const Eigen::VectorXd a = L.solve(Eigen::VectorXd::Ones(y.size()));
    const Eigen::VectorXd b = L.solve(y);
    const double m = a.dot(b) / a.squaredNorm();
    const Eigen::VectorXd r = b - m * a;
    const double lml = -0.5 * r.squaredNorm() - f.chol.diagonal().array().log().sum()
        - 0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
    return {std::isfinite(lml) ? lml : -std::numeric_limits<double>::infinity(), m};
}

} // namespace detail

/// Fits a GP to `data`. FixedSpec factorizes directly; Mle maximizes the log
/// marginal likelihood over lengthscales and signal variance (multi-start pattern
/// search in log space) with the constant mean profiled out in closed form.
inline GPModel fit_gp(const Dataset& data, double noise_variance, const FitMode& mode)
{
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw std::invalid_argument("fit_gp: noise_variance must be positive");

    KernelSpec spec;
    OutputScaling scaling;
    if (const auto* fixed = std::get_if<FixedSpec>(&mode)) {
        spec = fixed->spec;
        spec.validate();
        scaling = fixed->scaling;
        if (!(scaling.scale > 0.0))
            throw std::invalid_argument("fit_gp: output scale must be positive");
        if (data.dim() != 0 && data.dim() != spec.dim())
            throw std::invalid_argument("fit_gp: data dimension does not match kernel");
    } else {
        const MleOptions& opt = std::get<Mle>(mode).options;
        if (data.empty())
            throw std::invalid_argument("fit_gp: MLE mode needs at least one observation");
        const std::size_t D = data.dim();
        scaling = opt.standardize ? detail::standardizer(data) : OutputScaling{};
        const detail::RowMatrix X = detail::design_matrix(data, D);
        Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
        for (std::size_t i = 0; i < data.size(); ++i)
            y(static_cast<Eigen::Index>(i)) = (data[i].outcome - scaling.shift) / scaling.scale;

        std::vector<double> lo(D + 1), hi(D + 1);
        for (std::size_t i = 0; i < D; ++i) {
            lo[i] = std::log(opt.lengthscale_min);
            hi[i] = std::log(opt.lengthscale_max);
        }
        lo[D] = std::log(opt.signal_variance_min);
        hi[D] = std::log(opt.signal_variance_max);

        auto spec_at = [&](std::span<const double> theta) {
            KernelSpec s{opt.family, std::vector<double>(D), std::exp(theta[D]), 0.0};
            for (std::size_t i = 0; i < D; ++i)
                s.lengthscales[i] = std::exp(theta[i]);
            return s;
        };
        auto objective = [&](std::span<const double> theta) {
            return detail::profiled_lml(spec_at(theta), X, y, noise_variance).lml;
        };

        Rng rng(opt.seed);
        std::vector<double> best_theta;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < std::max(opt.starts, 1); ++s) {
            std::vector<double> theta(D + 1);
            if (s == 0) {
                for (std::size_t i = 0; i < D; ++i)
                    theta[i] = std::clamp(std::log(0.5), lo[i], hi[i]);
                theta[D] = std::clamp(0.0, lo[D], hi[D]);
            } else {
                for (std::size_t i = 0; i <= D; ++i)
                    theta[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
            }
            const double v0 = objective(theta);
            auto r = pattern_search_maximize(objective, theta, v0, lo, hi,
                                             {opt.initial_log_step, opt.min_log_step, opt.evals_per_start});
            if (r.value > best_value || best_theta.empty()) {
                best_value = r.value;
                best_theta = std::move(r.x);
            }
        }
        if (!std::isfinite(best_value))
            throw FactorizationError("fit_gp: no hyperparameter setting admits a Cholesky factorization");
        spec = spec_at(best_theta);
        spec.mean_constant = detail::profiled_lml(spec, X, y, noise_variance).mean_constant;
    }

    const std::size_t D = spec.dim();
    auto frame = std::make_shared<detail::Frame>();
    frame->designs = detail::design_matrix(data, D);
    Eigen::MatrixXd A = detail::gram(spec, frame->designs);
    A.diagonal().array() += noise_variance;
    auto f = detail::factor_with_jitter(A);
    frame->chol = std::move(f.chol);
    frame->jitter = f.jitter;

    Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = (data[i].outcome - scaling.shift) / scaling.scale;
    return GPModel(std::move(frame), std::move(spec), noise_variance, scaling, std::move(y));
}

/// `count` independent draws of f(x) ~ N(mean(x), variance(x)), seeded.
inline std::vector<double> sample_at(const GPModel& model, const Design& x, int count, std::uint64_t rng_seed)
{
    if (count < 0)
        throw std::invalid_argument("sample_at: count must be non-negative");
    const Posterior p = model.posterior(x);
    const double sd = std::sqrt(p.variance);
    Rng rng(rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (double& v : out)
        v = p.mean + sd * normal(rng);
    return out;
}

/// Conditions a fitted model on one extra design without refitting
/// hyperparameters. The Cholesky factor is extended by one row once; each
/// outcome then costs two triangular solves, and all resulting models share
/// the extended frame (hence one posterior-variance function).
class FantasyBuilder {
public:
    FantasyBuilder(const GPModel& model, const Design& x_new) : base_(model)
    {
        base_.check_dim(x_new.dim());
        const auto& old = *model.frame_;
        const Eigen::Index n = old.designs.rows();
        const Eigen::Index D = static_cast<Eigen::Index>(model.dim());

        auto frame = std::make_shared<detail::Frame>();
        frame->designs.resize(n + 1, D);
        frame->designs.topRows(n) = old.designs;
        for (Eigen::Index j = 0; j < D; ++j)
            frame->designs(n, j) = x_new[static_cast<std::size_t>(j)];

        const Eigen::VectorXd k = model.kernel_vector(x_new.coords());
        const double diag = model.spec_.signal_variance + model.noise_ + old.jitter;
        Eigen::VectorXd l = n ? Eigen::VectorXd(old.chol.triangularView<Eigen::Lower>().solve(k)) : Eigen::VectorXd();
        const double d2 = diag - (n ? l.squaredNorm() : 0.0);

        if (d2 > 0.0 && std::isfinite(d2)) {
            frame->chol = Eigen::MatrixXd::Zero(n + 1, n + 1);
            frame->chol.topLeftCorner(n, n) = old.chol;
            if (n)
                frame->chol.block(n, 0, 1, n) = l.transpose();
            frame->chol(n, n) = std::sqrt(d2);
            frame->jitter = old.jitter;
        } else {
            Eigen::MatrixXd A = detail::gram(model.spec_, frame->designs);
            A.diagonal().array() += model.noise_;
            auto f = detail::factor_with_jitter(A, old.jitter);
            frame->chol = std::move(f.chol);
            frame->jitter = f.jitter;
        }
        frame_ = std::move(frame);
    }

    GPModel with_outcome(double y_imagined) const
    {
        if (!std::isfinite(y_imagined))
            throw std::invalid_argument("fantasy outcome must be finite");
        const Eigen::Index n = base_.y_.size();
        Eigen::VectorXd y(n + 1);
        y.head(n) = base_.y_;
        y(n) = (y_imagined - base_.scaling_.shift) / base_.scaling_.scale;
        return GPModel(frame_, base_.spec_, base_.noise_, base_.scaling_, std::move(y));
    }

private:
    GPModel base_;
    std::shared_ptr<const detail::Frame> frame_;
};

inline GPModel fantasy_update(const GPModel& model, const Design& x_new, double y_imagined)
{
    return FantasyBuilder(model, x_new).with_outcome(y_imagined);
}

} // namespace llinbo

#endif
