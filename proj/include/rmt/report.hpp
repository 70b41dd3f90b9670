#ifndef RMT_REPORT_HPP_
#define RMT_REPORT_HPP_

#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "rmt/config.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/spectral.hpp"

namespace rmt {

inline constexpr const char* kVersion = "0.1.0";

/// Finite values as numbers, infinities as "inf" / "-inf", NaN as null.
nlohmann::json json_number(double v);

nlohmann::json to_json(const EnsembleSpec& spec);
nlohmann::json to_json(const ExperimentSpec& spec);
nlohmann::json to_json(const CampaignConfig& config);
nlohmann::json to_json(const SummaryStats& stats);
nlohmann::json to_json(const SpectralSummary& summary);
nlohmann::json to_json(const TailCurve& curve);

/// One row per trial:
/// experiment,n,p,trial_index,statistic,value,conditioned,wall_ms
void write_records_csv(std::ostream& os, const ExperimentResult& result);

/// Campaign document: version, resolved config, per-point summaries, and the
/// tail curve when one was computed.
nlohmann::json campaign_json(const ExperimentResult& result, const CampaignConfig& config,
                             const std::optional<TailCurve>& tail);

}  // namespace rmt

#endif  // RMT_REPORT_HPP_
