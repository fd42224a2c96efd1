#pragma once

// JSON conversions (nlohmann ADL hooks) for the library types.

#include <json.hpp>

#include "ctk/contour.hpp"
#include "ctk/lattice.hpp"
#include "ctk/model.hpp"
#include "ctk/montecarlo.hpp"
#include "ctk/multiscale.hpp"
#include "ctk/peierls.hpp"

namespace ctk {

using nlohmann::json;

void to_json(json& j, const Point& p);
void from_json(const json& j, Point& p);

// {"dim": d, "points": [[...], ...]}
void to_json(json& j, const Region& r);
Region region_from_json(const json& j);

void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);
void to_json(json& j, const ContourParams& cp);
void from_json(const json& j, ContourParams& cp);
void to_json(json& j, const FieldMode& f);
void from_json(const json& j, FieldMode& f);

void to_json(json& j, const Contour& g);
void to_json(json& j, const PartitionOfBoundary& P);
void to_json(json& j, const PeierlsConstants& pc);
void to_json(json& j, const EntropyConstants& ec);
void to_json(json& j, const Truncation& t);
void to_json(json& j, const McConfig& c);
void from_json(const json& j, McConfig& c);
void to_json(json& j, const McResult& r);

/// {"window": region, "boundary": -1, "spins": [...]} with spins in window order.
void to_json(json& j, const SpinConfiguration& s);
SpinConfiguration configuration_from_json(const json& j);

}  // namespace ctk
