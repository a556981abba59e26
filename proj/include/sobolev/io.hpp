#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sobolev/domain.hpp"
#include "sobolev/level_sets.hpp"
#include "sobolev/payne_rayner.hpp"
#include "sobolev/schwarz.hpp"
#include "sobolev/solver.hpp"

namespace sobolev {

using Json = nlohmann::json;

/// Shortest text that round-trips: %.17g.
std::string format_double(double value);

ConformalMap parse_map(const Json& j);
Json to_json(const ConformalMap& map);

/// {"type": "disk"|"polygon"|"map_image", ...}; throws InvalidInput on malformed input.
DomainSpec parse_domain(const Json& j);
Json to_json(const DomainSpec& domain);

Json mesh_to_json(const TriMesh& mesh);

void write_field_csv(std::ostream& out, const ScalarField& field);
Json field_to_json(const ScalarField& field);

Json to_json(const SolveResult& result);
Json to_json(const PayneRaynerReport& report);
Json to_json(const SaintVenantRecord& record);

/// Columns r,log_r,cp_image,phi_ratio,reciprocal; valid rows only.
void write_sweep_csv(std::ostream& out, const SchwarzSweep& sweep);
Json sweep_verdict_json(const SchwarzSweep& sweep);

/// Columns t,A,l,H0,H1,flags (flags: 0 regular, 1 non-regular).
void write_levelset_csv(std::ostream& out, const LevelSetTable& table);
Json to_json(const LevelSetVerdicts& verdicts);

}  // namespace sobolev
