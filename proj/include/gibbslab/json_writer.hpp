#pragma once

#include <string>

#include <json.hpp>

namespace gibbslab {

using Json = nlohmann::ordered_json;

/// Every double at 17 significant digits; non-finite values become null.
std::string format_double(double x);

/// Pretty JSON (2-space indent) in insertion order with 17-digit doubles.
std::string dump_json(const Json& j);

/// CSV cell: 17-digit doubles, "nan"/"inf"/"-inf" for non-finite values.
std::string csv_double(double x);

}  // namespace gibbslab
