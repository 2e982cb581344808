#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace invmean {

class Interval;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend auto operator<=>(const Point&, const Point&) = default;
};

/// How a universally quantified property gets sampled on I x I: a uniform
/// tensor grid plus uniformly random pairs drawn from a seeded generator.
struct GridSpec {
    std::size_t nodes_per_axis = 101;
    std::size_t random_pairs = 1000;
    std::uint64_t seed = 0x5eed'1a7eULL;

    /// Uniform tensor grid only, no random pairs.
    static GridSpec uniform(std::size_t nodes) { return GridSpec{nodes, 0, 0x5eed'1a7eULL}; }
};

/// Node i of an n-node uniform partition of the interval; the endpoints are hit exactly.
double grid_node(const Interval& domain, std::size_t i, std::size_t n);

/// The 1-D nodes of the uniform part of the grid.
std::vector<double> axis_nodes(const GridSpec& spec, const Interval& domain);

/// Uniform nodes first (row-major, x outer), then the random pairs.
/// Throws InvalidArgument if the grid would be empty.
std::vector<Point> sample_points(const GridSpec& spec, const Interval& domain);

}  // namespace invmean
