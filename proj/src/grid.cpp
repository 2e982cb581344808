#include "invmean/grid.hpp"

#include <random>

#include "invmean/error.hpp"
#include "invmean/mean.hpp"

namespace invmean {

double grid_node(const Interval& domain, std::size_t i, std::size_t n) {
    if (n < 2) return domain.lo();
    if (i + 1 >= n) return domain.hi();
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    return domain.lo() + t * domain.length();
}

std::vector<double> axis_nodes(const GridSpec& spec, const Interval& domain) {
    std::vector<double> nodes;
    nodes.reserve(spec.nodes_per_axis);
    for (std::size_t i = 0; i < spec.nodes_per_axis; ++i)
        nodes.push_back(grid_node(domain, i, spec.nodes_per_axis));
    return nodes;
}

std::vector<Point> sample_points(const GridSpec& spec, const Interval& domain) {
    if (spec.nodes_per_axis == 0 && spec.random_pairs == 0)
        throw InvalidArgument("empty sample grid");

    const auto nodes = axis_nodes(spec, domain);
    std::vector<Point> points;
    points.reserve(nodes.size() * nodes.size() + spec.random_pairs);
    for (double x : nodes)
        for (double y : nodes) points.push_back({x, y});

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> dist(domain.lo(), domain.hi());
    for (std::size_t k = 0; k < spec.random_pairs; ++k) {
        const double x = dist(rng);
        const double y = dist(rng);
        points.push_back({x, y});
    }
    return points;
}

}  // namespace invmean
