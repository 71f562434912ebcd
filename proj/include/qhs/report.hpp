#pragma once

#include <string>

#include <json.hpp>

#include "qhs/cost.hpp"
#include "qhs/fusion.hpp"
#include "qhs/ktheory.hpp"
#include "qhs/morphism.hpp"
#include "qhs/presentation.hpp"
#include "qhs/solver.hpp"

namespace qhs {

using Json = nlohmann::json;

// Every number written by this layer is rounded to 12 significant digits;
// object keys are sorted, so equal inputs give byte-identical text.
double round12(double x);
std::string dump(const Json& j);

Json complex_json(Complex z);
Json matrix_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

// save_graph's schema with rounded weights.
Json graph_json(const OrientedGraph& g, const Cost* w = nullptr,
                std::optional<double> q = std::nullopt);

Json to_json(const FairnessReport& r, const OrientedGraph& g);
Json to_json(const SolveResult& r, const OrientedGraph& g);
Json to_json(const FundamentalSolution& s);
Json to_json(const SolutionReport& r);
Json to_json(const Presentation& p);
Json to_json(const MorphismData& m);
Json to_json(const PsiReport& r, const MorphismData& m);
Json to_json(const PruneReport& r, const OrientedGraph& x, const OrientedGraph& y);
Json to_json(const AbelianGroup& g);
Json to_json(const KGroups& k);

// Inverse of to_json; throws SchemaError naming the offending field.
FundamentalSolution solution_from_json(const Json& j);
MorphismData morphism_from_json(const Json& j);

} // namespace qhs
