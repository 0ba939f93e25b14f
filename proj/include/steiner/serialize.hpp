#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "steiner/gauss_mc.hpp"
#include "steiner/growth.hpp"
#include "steiner/volumes.hpp"
#include "steiner/zeros.hpp"

namespace steiner {

using Json = nlohmann::json;

// Sequence interchange: {"source", "k_max", "logV": [float|"-inf",...],
// "tail_error"} plus optional "dimension".
Json seq_to_json(const VolumeSequence& v);
VolumeSequence seq_from_json(const Json& j);

/// CSV with columns k, V_k, logV_k[, m_k]; V_k prints 0 at logV = -inf.
std::string seq_to_csv(const VolumeSequence& v, bool with_mk);

Json box_spec_to_json(const BoxSpec& s);
BoxSpec box_spec_from_json(const Json& j);

Json growth_report_to_json(const GrowthReport& r);

/// CSV of (k, m_k, ln k, ln m_k, naive_rho_n) for external plotting.
std::string growth_to_csv(const VolumeSequence& v);

Json mc_estimate_to_json(const McEstimate& e);
Json zero_set_to_json(const ZeroSet& z);

/// Evaluation grid row: re z, im z, re f, im f.
std::string eval_grid_csv_header();

}  // namespace steiner
