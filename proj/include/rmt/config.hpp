#ifndef RMT_CONFIG_HPP_
#define RMT_CONFIG_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmt/geometry.hpp"
#include "rmt/montecarlo.hpp"

namespace rmt {

/// Parsed INI-style document: `[section]` headers, `key = value` lines,
/// `#` or `;` comments. Every value remembers its line for error messages.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  /// Throws ParameterError("<origin>:<line>: ...") on syntax errors,
  /// unknown sections or keys, and duplicates.
  static ConfigDocument parse(const std::string& text, const std::string& origin = "config");

  const Entry* find(const std::string& section, const std::string& key) const;
  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

struct CampaignConfig {
  ExperimentSpec experiment;
  LcdParams lcd;
  /// Shift bound R of ||D|| <= R sqrt(np); checked when present.
  std::optional<double> shift_bound_R;
  /// Non-empty: the experiment also emits an s_min tail curve on this grid.
  std::vector<double> tail_eps;
  std::string output_dir = ".";
};

/// Builds a validated campaign; errors cite origin and line.
CampaignConfig load_campaign(const ConfigDocument& doc);
CampaignConfig load_campaign_text(const std::string& text, const std::string& origin = "config");

/// Text of the built-in presets: thm1.1, thm1.2ii, thm1.4, thm1.7, zero-row.
std::string preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Documented defaults, printed by --help.
std::string config_reference();

}  // namespace rmt

#endif  // RMT_CONFIG_HPP_
