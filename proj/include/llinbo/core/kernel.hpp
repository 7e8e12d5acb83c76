#ifndef LLINBO_CORE_KERNEL_HPP
#define LLINBO_CORE_KERNEL_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <llinbo/core/design.hpp>

namespace llinbo {

enum class KernelFamily { Matern52Ard, RbfArd };

inline std::string_view to_string(KernelFamily f)
{
    return f == KernelFamily::Matern52Ard ? "Matern52ARD" : "RBFARD";
}

inline KernelFamily parse_kernel_family(std::string_view s)
{
    if (s == "Matern52ARD" || s == "matern52")
        return KernelFamily::Matern52Ard;
    if (s == "RBFARD" || s == "rbf")
        return KernelFamily::RbfArd;
    throw std::invalid_argument("unknown kernel family: " + std::string(s));
}

/// Stationary ARD kernel plus the constant prior mean.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52Ard;
    std::vector<double> lengthscales;
    double signal_variance = 1.0;
    double mean_constant = 0.0;

    static KernelSpec isotropic(KernelFamily family, std::size_t dim, double lengthscale,
                                double signal_variance = 1.0, double mean_constant = 0.0)
    {
        return {family, std::vector<double>(dim, lengthscale), signal_variance, mean_constant};
    }

    std::size_t dim() const noexcept { return lengthscales.size(); }

    void validate() const
    {
        if (lengthscales.empty())
            throw std::invalid_argument("KernelSpec: no lengthscales");
        for (double l : lengthscales)
            if (!(l > 0.0) || !std::isfinite(l))
                throw std::invalid_argument("KernelSpec: lengthscales must be positive and finite");
        if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
            throw std::invalid_argument("KernelSpec: signal_variance must be positive and finite");
        if (!std::isfinite(mean_constant))
            throw std::invalid_argument("KernelSpec: mean_constant must be finite");
    }
};

namespace detail {

inline double scaled_sq_distance(const KernelSpec& spec, std::span<const double> a, std::span<const double> b)
{
    double r2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / spec.lengthscales[i];
        r2 += d * d;
    }
    return r2;
}

inline double kernel_from_sq_distance(const KernelSpec& spec, double r2)
{
    switch (spec.family) {
    case KernelFamily::Matern52Ard: {
        const double s5r = std::sqrt(5.0 * r2);
        return spec.signal_variance * (1.0 + s5r + 5.0 * r2 / 3.0) * std::exp(-s5r);
    }
    case KernelFamily::RbfArd:
        return spec.signal_variance * std::exp(-0.5 * r2);
    }
    return 0.0;
}

} // namespace detail

/// k(a, b). No validation beyond dimensions; hot path.
inline double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b)
{
    if (a.size() != spec.dim() || b.size() != spec.dim())
        throw std::invalid_argument("kernel_eval: dimension mismatch (kernel " + std::to_string(spec.dim())
                                    + ", inputs " + std::to_string(a.size()) + "/" + std::to_string(b.size())
                                    + ")");
    return detail::kernel_from_sq_distance(spec, detail::scaled_sq_distance(spec, a, b));
}

inline double kernel_eval(const KernelSpec& spec, const Design& a, const Design& b)
{
    return kernel_eval(spec, a.coords(), b.coords());
}

} // namespace llinbo

#endif
