#include "invmean/mean.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "invmean/error.hpp"

namespace invmean {

namespace {

double clamp_to_bounds(double v, double x, double y) {
    return std::clamp(v, std::min(x, y), std::max(x, y));
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Both coordinates of the example map at (x, y).
Point example_map(double x, double y) {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    const double gap = hi - lo;
    if (gap <= 1.0) {
        const double mid = (x + y) / 2;
        return {mid, mid};
    }
    const double s = x + y;
    const double r = std::sqrt(gap);
    double m = std::clamp((s - r) / 2, lo, hi);
    double n = std::clamp((s + r) / 2, lo, hi);
    // Exactly, N - M = sqrt(gap) > 1. Rounding must not drop the image onto
    // the midpoint branch, so widen by ulps until the computed gap exceeds 1.
    // (lo, hi) itself qualifies, so this terminates.
    while (n - m <= 1.0) {
        m = std::max(lo, std::nextafter(m, lo));
        n = std::min(hi, std::nextafter(n, hi));
    }
    return {m, n};
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("interval endpoints must be finite");
    if (!(lo < hi)) throw InvalidArgument("degenerate interval: need lo < hi");
}

Mean::Mean(std::string name, Interval domain, MeanFunction fn, PropertySet declared)
    : name_(std::move(name)),
      domain_(domain),
      fn_(std::make_shared<const MeanFunction>(std::move(fn))),
      props_(declared) {
    if (!*fn_) throw InvalidArgument("mean '" + name_ + "' has no evaluation function");
}

double Mean::operator()(double x, double y) const {
    if (!domain_.contains(x) || !domain_.contains(y)) {
        std::ostringstream os;
        os << "mean '" << name_ << "' evaluated at (" << x << ", " << y << ") outside ["
           << domain_.lo() << ", " << domain_.hi() << "]";
        throw DomainError(os.str());
    }
    return (*fn_)(x, y);
}

Mean Mean::renamed(std::string name) const {
    Mean copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

Mean Mean::with_properties(PropertySet props) const {
    Mean copy = *this;
    copy.props_ = props;
    return copy;
}

MeanPair::MeanPair(Mean m, Mean n, bool comparable)
    : m_(std::move(m)), n_(std::move(n)), comparable_(comparable) {
    if (!(m_.domain() == n_.domain()))
        throw InvalidArgument("means '" + m_.name() + "' and '" + n_.name() +
                              "' do not share a domain");
}

Mean make_builtin(Builtin b, const Interval& domain) {
    const PropertySet sym_strict{MeanProperty::symmetric, MeanProperty::strict};
    const bool needs_positive = b.kind == BuiltinKind::harmonic ||
                                (b.kind == BuiltinKind::power && b.exponent < 0.0);
    if (needs_positive && !(domain.lo() > 0.0))
        throw InvalidArgument("this built-in mean needs a domain with lo > 0");
    const bool needs_nonnegative = b.kind == BuiltinKind::geometric || b.kind == BuiltinKind::power;
    if (needs_nonnegative && !(domain.lo() >= 0.0))
        throw InvalidArgument("this built-in mean needs a domain with lo >= 0");

    switch (b.kind) {
    case BuiltinKind::arithmetic:
        return Mean("arithmetic", domain, [](double x, double y) { return (x + y) / 2; },
                    sym_strict);
    case BuiltinKind::geometric:
        return Mean("geometric", domain,
                    [](double x, double y) { return clamp_to_bounds(std::sqrt(x * y), x, y); },
                    // sqrt(0 * y) = 0 = min(0, y)
                    domain.lo() > 0.0 ? sym_strict : PropertySet{MeanProperty::symmetric});
    case BuiltinKind::harmonic:
        return Mean("harmonic", domain,
                    [](double x, double y) {
                        return clamp_to_bounds(2 * x * y / (x + y), x, y);
                    },
                    sym_strict);
    case BuiltinKind::power: {
        const double p = b.exponent;
        if (!std::isfinite(p)) throw InvalidArgument("power mean exponent must be finite");
        if (p == 0.0) return make_builtin(BuiltinKind::geometric, domain).renamed("power(0)");
        if (p == 1.0) return make_builtin(BuiltinKind::arithmetic, domain).renamed("power(1)");
        return Mean("power(" + format_number(p) + ")", domain,
                    [p](double x, double y) {
                        if (x == y) return x;
                        const double v = std::pow((std::pow(x, p) + std::pow(y, p)) / 2, 1 / p);
                        return clamp_to_bounds(v, x, y);
                    },
                    sym_strict);
    }
    case BuiltinKind::min:
        return Mean("min", domain, [](double x, double y) { return std::min(x, y); },
                    {MeanProperty::symmetric});
    case BuiltinKind::max:
        return Mean("max", domain, [](double x, double y) { return std::max(x, y); },
                    {MeanProperty::symmetric});
    }
    throw InvalidArgument("unknown built-in mean kind");
}

std::optional<Builtin> parse_builtin(std::string_view name) {
    if (name == "arithmetic") return Builtin{BuiltinKind::arithmetic};
    if (name == "geometric") return Builtin{BuiltinKind::geometric};
    if (name == "harmonic") return Builtin{BuiltinKind::harmonic};
    if (name == "min") return Builtin{BuiltinKind::min};
    if (name == "max") return Builtin{BuiltinKind::max};
    constexpr std::string_view prefix = "power:";
    if (name.starts_with(prefix)) {
        const auto digits = name.substr(prefix.size());
        double p = 0.0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec == std::errc{} && end == digits.data() + digits.size())
            return Builtin{BuiltinKind::power, p};
    }
    return std::nullopt;
}

MeanPair make_example_pair(const Interval& domain) {
    if (!(domain.length() > 1.0))
        throw InvalidArgument("the example pair needs a domain longer than 1");
    const PropertySet props{MeanProperty::symmetric, MeanProperty::strict};
    Mean m("example.M", domain, [](double x, double y) { return example_map(x, y).x; }, props);
    Mean n("example.N", domain, [](double x, double y) { return example_map(x, y).y; }, props);
    return MeanPair(std::move(m), std::move(n), true);
}

Mean make_kc(double c, const Interval& domain) {
    if (!(c >= -1.0 && c <= 1.0)) throw InvalidArgument("K_c needs c in [-1, 1]");
    return Mean("K(" + format_number(c) + ")", domain,
                [c](double x, double y) {
                    const double gap = std::max(x, y) - std::min(x, y);
                    if (gap <= 1.0) return (x + y) / 2;
                    return clamp_to_bounds((x + y + c) / 2, x, y);
                },
                {MeanProperty::symmetric});
}

MeanPair meet_join(const MeanPair& pair) {
    const Mean m = pair.m();
    const Mean n = pair.n();
    const PropertySet common = m.properties().intersect(n.properties());
    Mean meet("min(" + m.name() + "," + n.name() + ")", pair.domain(),
              [m, n](double x, double y) { return std::min(m(x, y), n(x, y)); }, common);
    Mean join("max(" + m.name() + "," + n.name() + ")", pair.domain(),
              [m, n](double x, double y) { return std::max(m(x, y), n(x, y)); }, common);
    return MeanPair(std::move(meet), std::move(join), true);
}

Mean convex_combine(const Mean& k1, const Mean& k2, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("convex weight t must lie in [0, 1]");
    if (!(k1.domain() == k2.domain()))
        throw InvalidArgument("convex_combine needs means on a shared domain");
    const PropertySet common = k1.properties().intersect(k2.properties());
    return Mean("(" + format_number(1 - t) + "*" + k1.name() + "+" + format_number(t) + "*" +
                    k2.name() + ")",
                k1.domain(),
                [k1, k2, t](double x, double y) {
                    const double v = (1 - t) * k1(x, y) + t * k2(x, y);
                    return clamp_to_bounds(v, x, y);
                },
                common);
}

namespace {

void record(PropertyCheck& check, Point p) {
    if (check.holds || p < *check.witness) check.witness = p;
    check.holds = false;
}

}  // namespace

PropertyReport check_properties(const MeanPair& pair, const GridSpec& grid) {
    const auto points = sample_points(grid, pair.domain());
    bool off_diagonal = false;
    PropertyReport report;
    report.grid_size = points.size();

    for (const Point p : points) {
        const double lo = std::min(p.x, p.y);
        const double hi = std::max(p.x, p.y);
        const double m = pair.m()(p.x, p.y);
        const double n = pair.n()(p.x, p.y);

        if (!(lo <= m && m <= hi && lo <= n && n <= hi)) record(report.mean_bounds, p);
        if (m != pair.m()(p.y, p.x) || n != pair.n()(p.y, p.x)) record(report.symmetric, p);
        if (!(m <= n)) record(report.comparable_le, p);
        if (p.x != p.y) {
            off_diagonal = true;
            if (!(lo < m && m < hi && lo < n && n < hi)) record(report.strict, p);
            if (!(std::abs(m - n) < hi - lo)) record(report.weak_in, p);
        }
    }
    if (!off_diagonal) throw InvalidArgument("property grid has no off-diagonal point");
    return report;
}

bool comparable_on_grid(const Mean& m, const Mean& n, const GridSpec& grid) {
    for (const Point p : sample_points(grid, m.domain()))
        if (!(m(p.x, p.y) <= n(p.x, p.y))) return false;
    return true;
}

}  // namespace invmean
