#pragma once

#include <string>

#include "json.hpp"

#include "fraudpipe/autoenc.hpp"
#include "fraudpipe/baselines.hpp"
#include "fraudpipe/dataio.hpp"
#include "fraudpipe/metrics.hpp"
#include "fraudpipe/neural.hpp"

namespace fraudpipe {

using json = nlohmann::json;

// Standardizer: {"method": "zscore", "mean": [...], "std": [...]} or
// {"method": "minmax", "min": [...], "max": [...]}.
json standardizer_to_json(const StandardizerParams& p);
StandardizerParams standardizer_from_json(const json& j);

// Network documents carry a "version" tag and row-major weight arrays.
json network_to_json(const Network& n);
Network network_from_json(const json& j);

json report_to_json(const EvalReport& r);
EvalReport report_from_json(const json& j);

// Model bundle: network, standardizer, threshold, feature mask, config hash.
json model_to_json(const AnomalyModel& m, const std::string& config_hash);
AnomalyModel model_from_json(const json& j);

json logistic_to_json(const LogisticModel& m);
LogisticModel logistic_from_json(const json& j);

json tree_to_json(const TreeNode& t);
std::unique_ptr<TreeNode> tree_from_json(const json& j);

/// FNV-1a 64-bit fingerprint of a string, hex-encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace fraudpipe
