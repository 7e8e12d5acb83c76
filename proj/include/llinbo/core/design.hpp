#ifndef LLINBO_CORE_DESIGN_HPP
#define LLINBO_CORE_DESIGN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace llinbo {

/// A point of the unit hypercube [0,1]^D, D >= 1.
class Design {
public:
    explicit Design(std::vector<double> coords) : coords_(std::move(coords))
    {
        if (coords_.empty())
            throw std::invalid_argument("Design: dimension must be at least 1");
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            const double c = coords_[i];
            if (!std::isfinite(c) || c < 0.0 || c > 1.0) {
                std::ostringstream os;
                os << "Design: coordinate " << i << " = " << c << " is outside [0,1]";
                throw std::invalid_argument(os.str());
            }
        }
    }

    Design(std::initializer_list<double> coords) : Design(std::vector<double>(coords)) {}

    /// Projects finite coordinates into [0,1]. Non-finite input is still an error.
    static Design clamped(std::vector<double> coords)
    {
        for (double& c : coords) {
            if (!std::isfinite(c))
                throw std::invalid_argument("Design::clamped: non-finite coordinate");
            c = std::clamp(c, 0.0, 1.0);
        }
        return Design(std::move(coords));
    }

    static Design center(std::size_t dim) { return Design(std::vector<double>(dim, 0.5)); }

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    friend bool operator==(const Design&, const Design&) = default;
    friend auto operator<=>(const Design& a, const Design& b) { return a.coords_ <=> b.coords_; }

    std::string str() const
    {
        std::ostringstream os;
        os.precision(17);
        os << '(';
        for (std::size_t i = 0; i < coords_.size(); ++i)
            os << (i ? ", " : "") << coords_[i];
        os << ')';
        return os.str();
    }

private:
    std::vector<double> coords_;
};

struct Observation {
    Design design;
    double outcome;
};

/// Ordered observations sharing one dimension.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t dim) : dim_(dim) {}

    void add(Design design, double outcome)
    {
        if (!std::isfinite(outcome))
            throw std::invalid_argument("Dataset: outcome must be finite");
        if (dim_ == 0)
            dim_ = design.dim();
        else if (design.dim() != dim_)
            throw std::invalid_argument("Dataset: dimension mismatch (expected " + std::to_string(dim_)
                                        + ", got " + std::to_string(design.dim()) + ")");
        observations_.push_back({std::move(design), outcome});
    }

    void add(const Observation& obs) { add(obs.design, obs.outcome); }

    /// 0 when empty and no dimension was declared.
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return observations_.size(); }
    bool empty() const noexcept { return observations_.empty(); }

    const std::vector<Observation>& observations() const noexcept { return observations_; }
    const Observation& operator[](std::size_t i) const { return observations_[i]; }
    auto begin() const noexcept { return observations_.begin(); }
    auto end() const noexcept { return observations_.end(); }

    double best_outcome() const
    {
        if (empty())
            throw std::logic_error("Dataset::best_outcome on empty dataset");
        double best = observations_.front().outcome;
        for (const auto& o : observations_)
            best = std::max(best, o.outcome);
        return best;
    }

    double worst_outcome() const
    {
        if (empty())
            throw std::logic_error("Dataset::worst_outcome on empty dataset");
        double worst = observations_.front().outcome;
        for (const auto& o : observations_)
            worst = std::min(worst, o.outcome);
        return worst;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Observation> observations_;
};

} // namespace llinbo

#endif
