#pragma once

#include <string>

#include <json.hpp>

#include "hyps/symbols.hpp"

namespace hyps {

// Throws Error(kConfigInvalid, "<path>: message") on malformed input.
Expr expr_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json expr_to_json(const Expr& e);

RoughCoefficient rough_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json rough_to_json(const RoughCoefficient& c);

[[noreturn]] void config_error(const std::string& path, const std::string& msg);

}  // namespace hyps
