#ifndef LLINBO_ACQUISITION_SOBOL_HPP
#define LLINBO_ACQUISITION_SOBOL_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <llinbo/core/random.hpp>

namespace llinbo {

/// Digitally shifted Sobol sequence (Gray-code construction, 32-bit).
///
/// Direction numbers follow the Joe-Kuo tables for the first 16 dimensions.
/// Higher dimensions fall back to seeded uniform draws for the extra coordinates.
class SobolSequence {
public:
    static constexpr std::size_t kMaxSobolDim = 16;

    SobolSequence(std::size_t dim, std::uint64_t seed) : dim_(dim), rng_(seed)
    {
        if (dim == 0)
            throw std::invalid_argument("SobolSequence: dimension must be positive");
        const std::size_t sobol_dims = std::min(dim, kMaxSobolDim);
        directions_.resize(sobol_dims);
        for (std::size_t j = 0; j < sobol_dims; ++j)
            directions_[j] = direction_numbers(j);
        shift_.resize(sobol_dims);
        for (auto& s : shift_)
            s = static_cast<std::uint32_t>(rng_() >> 32);
        state_.assign(sobol_dims, 0u);
    }

    std::size_t dim() const noexcept { return dim_; }

    /// Next point in [0,1)^D.
    std::vector<double> next()
    {
        std::vector<double> x(dim_);
        if (index_ > 0) {
            // Rightmost zero bit of (index - 1).
            std::uint32_t c = 0;
            for (std::uint64_t v = index_ - 1; v & 1u; v >>= 1)
                ++c;
            if (c >= 32)
                throw std::out_of_range("SobolSequence exhausted");
            for (std::size_t j = 0; j < state_.size(); ++j)
                state_[j] ^= directions_[j][c];
        }
        ++index_;
        for (std::size_t j = 0; j < state_.size(); ++j)
            x[j] = static_cast<double>(state_[j] ^ shift_[j]) * 0x1p-32;
        for (std::size_t j = state_.size(); j < dim_; ++j)
            x[j] = uniform01(rng_);
        return x;
    }

private:
    struct Primitive {
        unsigned degree;
        unsigned coeffs;
        std::array<std::uint32_t, 6> m;
    };

    static std::array<std::uint32_t, 32> direction_numbers(std::size_t j)
    {
        static constexpr std::array<Primitive, kMaxSobolDim - 1> table{{
            {1, 0, {1}},
            {2, 1, {1, 3}},
            {3, 1, {1, 3, 1}},
            {3, 2, {1, 1, 1}},
            {4, 1, {1, 1, 3, 3}},
            {4, 4, {1, 3, 5, 13}},
            {5, 2, {1, 1, 5, 5, 17}},
            {5, 4, {1, 1, 5, 5, 5}},
            {5, 7, {1, 1, 7, 11, 19}},
            {5, 11, {1, 1, 5, 1, 1}},
            {5, 13, {1, 1, 1, 3, 11}},
            {5, 14, {1, 3, 5, 5, 31}},
            {6, 1, {1, 3, 3, 9, 7, 49}},
            {6, 13, {1, 1, 1, 15, 21, 21}},
            {6, 16, {1, 3, 1, 13, 27, 49}},
        }};
        std::array<std::uint32_t, 32> v{};
        if (j == 0) {
            for (unsigned k = 0; k < 32; ++k)
                v[k] = 1u << (31 - k);
            return v;
        }
        const Primitive& p = table[j - 1];
        const unsigned s = p.degree;
        for (unsigned k = 0; k < s; ++k)
            v[k] = p.m[k] << (31 - k);
        for (unsigned k = s; k < 32; ++k) {
            std::uint32_t val = v[k - s] ^ (v[k - s] >> s);
            for (unsigned i = 1; i < s; ++i)
                if ((p.coeffs >> (s - 1 - i)) & 1u)
                    val ^= v[k - i];
            v[k] = val;
        }
        return v;
    }

    std::size_t dim_;
    Rng rng_;
    std::vector<std::array<std::uint32_t, 32>> directions_;
    std::vector<std::uint32_t> shift_;
    std::vector<std::uint32_t> state_;
    std::uint64_t index_ = 0;
};

} // namespace llinbo

#endif
