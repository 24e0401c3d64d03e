#pragma once
#include <iosfwd>
#include <json.hpp>
#include "fixsplit/surface.hpp"
#include "fixsplit/tree.hpp"

namespace fixsplit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "0.1.0";

/* Field: {"min_poly": ["c0",...,"cd"], "root_interval": ["lo","hi"]};
   coefficients and bounds as "p/q" / decimal strings (numbers accepted on
   input).  Throws ParseError on malformed input. */
Json field_to_json(const FieldPtr& f);
FieldPtr field_from_json(const Json& j);

/* Coordinate: "p/q" string when the element is rational, otherwise
   {"theta_coeffs": ["a0",...]}; Float-mode scalars serialize as numbers. */
Json scalar_to_json(const Scalar& a);
Scalar scalar_from_json(const Json& j, const ScalarMode& m);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const ScalarMode& m);

Json lattice_to_json(const Lattice& l);

/* splitting.json: {field, lat1:{b1,b2}, lat2:{b1,b2},
   cyl:{b1,b2,circumference}, w}.  Loading constructs exact-mode data over
   the embedded field; lattice bases are normalized (reduced) on ingest. */
Json splitting_to_json(const FixSplitting& s);
FixSplitting splitting_from_json(const Json& j);

/* Scalar-wise conversion to Float mode (tracing experiments only; exact mode
   stays authoritative).  Lattice bases are kept verbatim. */
FixSplitting to_float_mode(const FixSplitting& s);

Json triple_to_json(const PartnerTriple& p);
Json plan_to_json(const TwistPlan& p);

/* Tree export: structure plus per-node w, eps_n, k, bounds (spec format);
   root bounds serialize as null. */
Json tree_to_json(const SplittingTree& t);

/* Chart/identification dump of the polygon model. */
Json model_to_json(const PolygonModel& m);

Json occupancy_to_json(const OccupancySummary& o);
Json trace_to_json(const TraceResult& r);

/* Envelope shared by every artifact file: artifact kind, library version,
   and the full run config, then the payload keys. */
Json artifact(const std::string& kind, const Json& config, const Json& payload);

/* canonical %.17g rendering used by all CSV output */
std::string format_double(double v);

/* CSV writers; each file starts with "# fixsplit <version>" and
   "# config <compact json>" comment lines, then the fixed header row. */
void write_path_csv(std::ostream& os, const Json& config, const PathReport& rep);
void write_trajectory_csv(std::ostream& os, const Json& config, const TraceResult& r);
void write_occupancy_csv(std::ostream& os, const Json& config, const OccupancySummary& o);

/* Named splitting presets.  "demo-sqrt2" is shipped; "arnoux-yoccoz" is a
   known name whose coordinates are not sourced (NotShipped); anything else
   is UnknownPreset. */
Json preset_json(const std::string& name);
FixSplitting preset_splitting(const std::string& name);

} // namespace fixsplit
