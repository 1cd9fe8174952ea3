#pragma once

#include "json.hpp"

#include "carleson/construction.hpp"

namespace carleson {

/// {dim, entries: [{n: "<decimal>", j, l, vector: [[re, im], ...]}]}, one entry per
/// distinct Taylor index; n is a string so 64-bit JSON consumers keep it exact.
nlohmann::json spectrum_to_json(const VectorSpectrum& spectrum);

VectorSpectrum spectrum_from_json(const nlohmann::json& doc);

}  // namespace carleson
