#pragma once

#include <json.hpp>

#include "invmean/invariance.hpp"
#include "invmean/limit_like.hpp"
#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"
#include "invmean/transfinite.hpp"

namespace invmean::io {

using Json = nlohmann::ordered_json;

Json to_json(const Point& p);
Json to_json(const Interval& d);
Json to_json(const GridSpec& g, std::size_t size);
Json to_json(const MeanPair& pair);

Json to_json(const PropertyReport& r);
Json to_json(const InvarianceReport& r);
Json to_json(const SymmetryReport& r);
Json to_json(const PhiDecompositionReport& r);
Json to_json(const OrderingReport& r);
Json to_json(const UniquenessProbe& r);
Json to_json(const LimitLikeReport& r);
Json to_json(const TransfiniteReport& r);

/// {"n","x_n","y_n","gap"} rows, thinned to `cap` rows.
Json orbit_to_json(const OrbitTrace& trace, std::size_t cap = 10'000);

}  // namespace invmean::io
