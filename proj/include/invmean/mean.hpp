#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invmean/grid.hpp"

namespace invmean {

/// Closed bounded interval [lo, hi] with lo < hi; the common domain of a mean pair.
class Interval {
public:
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double length() const noexcept { return hi_ - lo_; }
    bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

enum class MeanProperty : std::uint8_t {
    symmetric = 1u << 0,
    strict = 1u << 1,
    comparable_le = 1u << 2,
    contractive_pair_member = 1u << 3,
};

class PropertySet {
public:
    constexpr PropertySet() = default;
    constexpr PropertySet(std::initializer_list<MeanProperty> props) {
        for (auto p : props) bits_ |= static_cast<std::uint8_t>(p);
    }

    constexpr bool has(MeanProperty p) const noexcept {
        return (bits_ & static_cast<std::uint8_t>(p)) != 0;
    }
    constexpr PropertySet with(MeanProperty p) const noexcept {
        PropertySet s = *this;
        s.bits_ |= static_cast<std::uint8_t>(p);
        return s;
    }
    constexpr PropertySet without(MeanProperty p) const noexcept {
        PropertySet s = *this;
        s.bits_ &= static_cast<std::uint8_t>(~static_cast<std::uint8_t>(p));
        return s;
    }
    constexpr PropertySet intersect(PropertySet o) const noexcept {
        PropertySet s;
        s.bits_ = bits_ & o.bits_;
        return s;
    }

    friend constexpr bool operator==(PropertySet, PropertySet) = default;

private:
    std::uint8_t bits_ = 0;
};

using MeanFunction = std::function<double(double, double)>;

/// A two-variable mean on a host interval. Immutable and cheap to copy; the
/// evaluation function is shared between copies.
class Mean {
public:
    Mean(std::string name, Interval domain, MeanFunction fn, PropertySet declared = {});

    /// Throws DomainError when x or y lies outside the host interval.
    double operator()(double x, double y) const;

    const std::string& name() const noexcept { return name_; }
    const Interval& domain() const noexcept { return domain_; }
    PropertySet properties() const noexcept { return props_; }
    bool is(MeanProperty p) const noexcept { return props_.has(p); }

    Mean renamed(std::string name) const;
    Mean with_properties(PropertySet props) const;

private:
    std::string name_;
    Interval domain_;
    std::shared_ptr<const MeanFunction> fn_;
    PropertySet props_;
};

/// The self-map (x, y) -> (M(x,y), N(x,y)) of I x I.
class MeanPair {
public:
    /// Both means must share one domain. `comparable` declares M <= N.
    MeanPair(Mean m, Mean n, bool comparable = false);

    const Mean& m() const noexcept { return m_; }
    const Mean& n() const noexcept { return n_; }
    const Interval& domain() const noexcept { return m_.domain(); }
    bool comparable() const noexcept { return comparable_; }
    bool symmetric() const noexcept {
        return m_.is(MeanProperty::symmetric) && n_.is(MeanProperty::symmetric);
    }

    Point operator()(double x, double y) const { return {m_(x, y), n_(x, y)}; }
    Point operator()(Point p) const { return (*this)(p.x, p.y); }

private:
    Mean m_;
    Mean n_;
    bool comparable_;
};

// -- built-ins ---------------------------------------------------------------

enum class BuiltinKind { arithmetic, geometric, harmonic, power, min, max };

struct Builtin {
    BuiltinKind kind = BuiltinKind::arithmetic;
    double exponent = 1.0;  // only read for BuiltinKind::power
};

/// Harmonic and negative-exponent power means need domain.lo > 0; geometric and
/// the other power means need domain.lo >= 0. Geometric on [0, hi] is not strict.
Mean make_builtin(Builtin b, const Interval& domain);
inline Mean make_builtin(BuiltinKind kind, const Interval& domain) {
    return make_builtin(Builtin{kind, 1.0}, domain);
}

/// Recognizes "arithmetic", "geometric", "harmonic", "min", "max" and "power:<p>".
std::optional<Builtin> parse_builtin(std::string_view name);

/// The discontinuous pair: midpoint when |x-y| <= 1, otherwise the midpoint
/// shifted down (M) or up (N) by sqrt(|x-y|)/2. Requires domain length > 1.
MeanPair make_example_pair(const Interval& domain);

/// Midpoint when |x-y| <= 1, (x+y+c)/2 otherwise; c must lie in [-1, 1].
Mean make_kc(double c, const Interval& domain);

/// (M ^ N, M v N): pointwise min and max of the two means, flagged comparable.
MeanPair meet_join(const MeanPair& pair);

/// (1-t) k1 + t k2 for t in [0, 1]; both means must share a domain.
Mean convex_combine(const Mean& k1, const Mean& k2, double t);

// -- property checks ----------------------------------------------------------

struct PropertyCheck {
    bool holds = true;
    std::optional<Point> witness;  // lexicographically smallest violating point
};

struct PropertyReport {
    PropertyCheck mean_bounds;
    PropertyCheck symmetric;
    PropertyCheck strict;
    PropertyCheck comparable_le;
    PropertyCheck weak_in;
    std::size_t grid_size = 0;

    bool all_hold() const noexcept {
        return mean_bounds.holds && symmetric.holds && strict.holds && comparable_le.holds &&
               weak_in.holds;
    }
};

/// Samples mean bounds, symmetry, strictness, M <= N and |M-N| < |x-y| (off the
/// diagonal, strict, no slack) for both means of the pair.
PropertyReport check_properties(const MeanPair& pair, const GridSpec& grid);

/// True when M <= N at every sampled point.
bool comparable_on_grid(const Mean& m, const Mean& n, const GridSpec& grid);

}  // namespace invmean
