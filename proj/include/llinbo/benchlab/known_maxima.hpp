#ifndef LLINBO_BENCHLAB_KNOWN_MAXIMA_HPP
#define LLINBO_BENCHLAB_KNOWN_MAXIMA_HPP

#include <array>

// Generated by `llinbo oracle` (compute_known_max in benchlab/oracle.hpp):
// 1001^2 grid + compass search + nested profile search for the 2-D functions,
// 2^17 Sobol points + compass search from the best 32 for Hartmann4 and Ackley6.
// Regenerate with `llinbo oracle --emit-header` and re-check with `llinbo oracle --check`.

namespace llinbo::bench::known_maxima {

inline constexpr double kLevy2 = -1.4997597826618576e-32;
inline constexpr std::array<double, 2> kLevy2Argmax{0.5, 0.5};

inline constexpr double kRastrigin2 = 8;
inline constexpr std::array<double, 2> kRastrigin2Argmax{0.48828125, 0.48828125};

// One of three global maxima.
inline constexpr double kBranin2 = -0.39788735772973816;
inline constexpr std::array<double, 2> kBranin2Argmax{0.12389382266998294, 0.81833333587646517};

// Sits on a cusp ridge; the exact maximum 0 at (0.25, 2/3) is only resolved to ~3e-6.
inline constexpr double kBukin2 = -3.123235702524596e-06;
inline constexpr std::array<double, 2> kBukin2Argmax{0.24998438382148738, 0.66667707761491846};

inline constexpr double kHartmann4 = -0.0012954185984405489;
inline constexpr std::array<double, 4> kHartmann4Argmax{1, 1, 0, 1};

inline constexpr double kAckley6 = 4.7158854164143627;
inline constexpr std::array<double, 6> kAckley6Argmax{0.59080366109497828, 0.59080366533249618, 0.59080365997739148,
                                                     1, 0.59080365314148386, 1};

} // namespace llinbo::bench::known_maxima

#endif
