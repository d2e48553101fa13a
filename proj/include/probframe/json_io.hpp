#pragma once

#include "probframe/duals.hpp"
#include "probframe/frames.hpp"
#include "probframe/measures.hpp"
#include "probframe/numerics.hpp"
#include "probframe/perturbation.hpp"
#include "probframe/transport.hpp"

#include <json.hpp>

#include <filesystem>

namespace probframe {

using Json = nlohmann::json;

// Documents use the layouts
//   measure:  {"dim": n, "atoms": [[...], ...], "weights": [...]}  (weights optional)
//   coupling: {"source": <measure>, "target": <measure>, "plan": [[...], ...]}
//   matrix:   [[row], ...]
// Numbers are written in shortest round-trip form, so every document parses
// back to bit-identical doubles.

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const DiscreteMeasure& m);
Json to_json(const Coupling& c);
Json to_json(const FrameReport& r);
Json to_json(const TransportResult& r);
Json to_json(const DualCertificate& c);
Json to_json(const HypothesisFlags& f);
Json to_json(const PerturbationReport& r);

Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
/// Scalar atoms are read as points of R^1. Missing weights mean uniform.
DiscreteMeasure measure_from_json(const Json& j);
Coupling coupling_from_json(const Json& j);
FrameReport frame_report_from_json(const Json& j);
TransportResult transport_result_from_json(const Json& j);
DualCertificate certificate_from_json(const Json& j);
HypothesisFlags flags_from_json(const Json& j);
PerturbationReport perturbation_report_from_json(const Json& j);

/// Throws ParseError when the file is missing or not valid JSON.
Json read_json_file(const std::filesystem::path& path);

}  // namespace probframe
