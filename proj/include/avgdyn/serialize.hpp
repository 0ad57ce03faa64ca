#pragma once

#include <string>

#include <json.hpp>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/evaluation.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/spectral.hpp"

namespace avgdyn {

using json = nlohmann::json;

json to_json(const GeneratorReport& report);
json to_json(const StepwiseAnalysis& analysis);
json to_json(const ClusteredCheck& check);
json to_json(const HypothesisReport& hyp);
json to_json(const BoundCheck& check);
json to_json(const RunDecomposition& d);
json to_json(const ClusterResult& c);
json to_json(const AgreementEstimate& est);
json to_json(const ProjectionFloorResult& r);
json to_json(const SignSeparationResult& r);

// Summary without the eigenvector matrices (those don't belong in reports).
json spectrum_json(const SpectralSummary& s);

// Columns t,node,x,label; label blank on rounds where the variant defines none.
// Rows cover the stored prefix plus the final two rounds when truncated.
std::string trajectory_csv(const Trajectory& traj);

// Canonical dump: sorted keys (json object order), two-space indent, newline.
std::string dump_json(const json& j);

} // namespace avgdyn
