#pragma once

// JSON views of the core types. Field order is fixed (ordered_json) so that
// serialized output is byte-stable for golden tests.

#include <nlohmann/json.hpp>
#include <vector>

#include "dgi/enumeration.hpp"
#include "dgi/equivalence.hpp"
#include "dgi/model.hpp"
#include "dgi/realizability.hpp"

namespace dgi::jsonio {

using json = nlohmann::ordered_json;

json graph_json(const DistinguishedGraph& g);
json validation_json(const ValidationReport& report);
json realizability_json(const RealizabilityReport& report);
json invariants_json(const SurfaceInvariants& inv);
json isomorphism_json(const GraphIsomorphism& iso);
json witness_json(const EquivalenceWitness& witness);
json census_json(const EnumerationParams& params,
                 const std::vector<CensusEntry>& entries);

}  // namespace dgi::jsonio
