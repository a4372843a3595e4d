#pragma once

#include <string>

#include "json.hpp"
#include "subcool/experiments.hpp"

namespace subcool::experiments::detail {

using Json = nlohmann::ordered_json;

/// 17 significant digits, the CSV number format.
std::string format_number(double x);
std::string format_number(int x);

Json to_json(const ProtocolConfig& config);
Json to_json(const SweepSpec& spec);
Json to_json(const BathSpec& bath);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace subcool::experiments::detail
