#include "rmt/report.hpp"

#include <cmath>
#include <ostream>

#include "rmt/matrix_io.hpp"

namespace rmt {

using nlohmann::json;

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

json dist_json(const EntryDistribution& dist) {
  json j;
  if (std::holds_alternative<Rademacher>(dist)) j["kind"] = "rademacher";
  if (std::holds_alternative<StandardGaussian>(dist)) j["kind"] = "gaussian";
  if (const auto* d = std::get_if<SymmetricPareto>(&dist)) {
    j["kind"] = "pareto";
    j["rho"] = d->rho;
  }
  if (const auto* d = std::get_if<ShiftedBernoulli>(&dist)) {
    j["kind"] = "bernoulli";
    j["mu"] = d->mu;
  }
  if (const auto* d = std::get_if<Constant>(&dist)) {
    j["kind"] = "constant";
    j["value"] = d->value;
  }
  return j;
}

json interval_json(const Interval& ci) { return json::array({ci.lower, ci.upper}); }

}  // namespace

json to_json(const EnsembleSpec& spec) {
  return {{"n", spec.n},
          {"p", spec.p},
          {"dist", dist_json(spec.dist)},
          {"diagonal", spec.diagonal == DiagonalPolicy::kZero ? "zero" : "iid"},
          {"shift", spec.shift},
          {"shift_sup_norm", spec.shift_sup_norm()},
          {"adjacency", spec.adjacency_mode}};
}

json to_json(const ExperimentSpec& spec) {
  json sweep = json::array();
  for (const SweepPoint& pt : spec.sweep) sweep.push_back({{"n", pt.n}, {"p", pt.p}});
  return {{"name", spec.name},
          {"ensemble", to_json(spec.ensemble)},
          {"trials", spec.trials},
          {"master_seed", spec.master_seed},
          {"statistic", to_string(spec.statistic)},
          {"condition_K", spec.condition_K ? json_number(*spec.condition_K) : json(nullptr)},
          {"sweep", sweep},
          {"pattern_threshold", spec.pattern_threshold},
          {"threads", spec.threads},
          {"timing", spec.record_timing}};
}

json to_json(const CampaignConfig& config) {
  json tail = json::array();
  for (double e : config.tail_eps) tail.push_back(json_number(e));
  return {{"experiment", to_json(config.experiment)},
          {"lcd",
           {{"p", config.lcd.p},
            {"delta0", config.lcd.delta0},
            {"theta_max", json_number(config.lcd.theta_max)},
            {"grid_step", config.lcd.grid_step}}},
          {"R", config.shift_bound_R ? json_number(*config.shift_bound_R) : json(nullptr)},
          {"tail_eps", tail},
          {"output_dir", config.output_dir}};
}

json to_json(const SummaryStats& stats) {
  json quantiles = json::object();
  for (std::size_t k = 0; k < kSummaryQuantiles.size(); ++k) {
    quantiles[std::to_string(static_cast<int>(kSummaryQuantiles[k] * 100)) + "%"] =
        json_number(stats.quantiles[k]);
  }
  json j = {{"count", stats.count},
            {"mean", json_number(stats.mean)},
            {"median", json_number(stats.median)},
            {"quantiles", quantiles}};
  j["wilson_ci"] = stats.wilson_ci ? interval_json(*stats.wilson_ci) : json(nullptr);
  return j;
}

json to_json(const SpectralSummary& s) {
  return {{"s_min", json_number(s.s_min)},
          {"s_max", json_number(s.s_max)},
          {"cond", json_number(s.cond)},
          {"residual", json_number(s.residual)},
          {"method", to_string(s.method)},
          {"singular", s.singular}};
}

json to_json(const TailCurve& curve) {
  json points = json::array();
  for (const TailPoint& pt : curve.points) {
    points.push_back({{"eps", json_number(pt.eps)},
                      {"probability", pt.probability},
                      {"wilson_ci", interval_json(pt.ci)}});
  }
  return {{"n", curve.n},
          {"p", curve.p},
          {"trials", curve.trials},
          {"normalization", "P(s_min <= eps * sqrt(p / n))"},
          {"points", points},
          {"monotone", curve.monotone},
          {"singular_frequency", curve.singular_frequency},
          {"fit", {{"C", curve.fit_C}, {"delta", curve.fit_delta}}},
          {"note",
           "the eps term and the exp(-c np) term are not separately identifiable at this "
           "scale; the fit is an envelope C*eps + delta with delta the Wilson upper bound "
           "of the singularity frequency"}};
}

void write_records_csv(std::ostream& os, const ExperimentResult& result) {
  os << "experiment,n,p,trial_index,statistic,value,conditioned,wall_ms\n";
  const std::string stat = to_string(result.spec.statistic);
  for (const PointResult& pt : result.points) {
    for (const TrialRecord& r : pt.records) {
      os << result.spec.name << ',' << r.n << ',' << format_double(r.p) << ','
         << r.trial_index << ',' << stat << ','
         << (r.error.empty() ? format_double(r.value) : std::string("error")) << ','
         << (r.conditioned ? 1 : 0) << ',' << format_double(r.wall_ms) << '\n';
    }
  }
}

json campaign_json(const ExperimentResult& result, const CampaignConfig& config,
                   const std::optional<TailCurve>& tail) {
  json points = json::array();
  for (const PointResult& pt : result.points) {
    json errors = json::array();
    for (const TrialRecord& r : pt.records) {
      if (!r.error.empty()) errors.push_back({{"trial_index", r.trial_index}, {"error", r.error}});
    }
    points.push_back({{"n", pt.n},
                      {"p", pt.p},
                      {"summary", to_json(pt.summary)},
                      {"conditioned_count", pt.conditioned_count},
                      {"conditioning_frequency", pt.conditioning_frequency},
                      {"failed_count", pt.failed_count},
                      {"failures", errors}});
  }
  json doc = {{"version", kVersion},
              {"experiment", result.spec.name},
              {"statistic", to_string(result.spec.statistic)},
              {"config", to_json(config)},
              {"points", points}};
  if (tail) doc["smin_tail_curve"] = to_json(*tail);
  return doc;
}

}  // namespace rmt
