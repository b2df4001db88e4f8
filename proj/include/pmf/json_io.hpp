#pragma once

#include <json.hpp>

#include "pmf/qseries.hpp"

namespace pmf {

/// {ring: {L, flavor, p, M}, k, N, chi, coeffs: [[c0, c1, ...], ...]}
/// with coordinates rendered as decimal strings ("num" or "num/den").
nlohmann::json qexp_to_json(const QExpansion& f);
QExpansion qexp_from_json(const nlohmann::json& j);

std::string scalar_to_string(const CycScalar& s);

} // namespace pmf
