#include "rmt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "rmt/errors.hpp"
#include "rmt/matrix_io.hpp"

namespace rmt {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"ensemble", {"n", "p", "dist", "rho", "mu", "value", "diagonal", "shift", "adjacency", "R"}},
      {"experiment", {"name", "trials", "seed", "statistic", "condition_K", "sweep", "threads",
                      "pattern_threshold", "tail_eps", "timing"}},
      {"lcd", {"p", "delta0", "theta_max", "grid_step"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  [[noreturn]] void fail(const ConfigDocument::Entry& e, const std::string& key,
                         const std::string& what) const {
    throw ParameterError(doc_.origin() + ":" + std::to_string(e.line) + ": " + key + ": " + what);
  }

  template <typename T, typename Parse>
  std::optional<T> get(const std::string& section, const std::string& key, Parse parse) const {
    const auto* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    try {
      return parse(e->value);
    } catch (const std::exception& ex) {
      fail(*e, section + "." + key, ex.what());
    }
  }

  std::optional<double> number(const std::string& section, const std::string& key) const {
    return get<double>(section, key, parse_number);
  }
  std::optional<long> integer(const std::string& section, const std::string& key) const {
    return get<long>(section, key, [](const std::string& v) {
      std::size_t used = 0;
      const long r = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument("expected an integer");
      return r;
    });
  }
  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    return get<std::string>(section, key, [](const std::string& v) { return v; });
  }
  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    return get<bool>(section, key, [](const std::string& v) {
      const std::string l = lower(v);
      if (l == "true" || l == "yes" || l == "1") return true;
      if (l == "false" || l == "no" || l == "0") return false;
      throw std::invalid_argument("expected true or false");
    });
  }
  std::optional<std::vector<double>> numbers(const std::string& section,
                                             const std::string& key) const {
    return get<std::vector<double>>(section, key, [](const std::string& v) {
      std::vector<double> out;
      for (const auto& item : split(v, ',')) out.push_back(parse_number(item));
      if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
      return out;
    });
  }
  const ConfigDocument::Entry* entry(const std::string& section, const std::string& key) const {
    return doc_.find(section, key);
  }

  static double parse_number(const std::string& v) {
    const std::string l = lower(trim(v));
    if (l == "inf" || l == "+inf" || l == "infinity") return kInfinity;
    std::size_t used = 0;
    const double r = std::stod(l, &used);
    if (used != l.size() || std::isnan(r)) throw std::invalid_argument("expected a number");
    return r;
  }

 private:
  const ConfigDocument& doc_;
};

EntryDistribution parse_dist(const Reader& r) {
  const std::string name = lower(r.text("ensemble", "dist").value_or("rademacher"));
  if (name == "rademacher") return Rademacher{};
  if (name == "gaussian") return StandardGaussian{};
  if (name == "pareto") {
    const auto rho = r.number("ensemble", "rho");
    if (!rho) r.fail(*r.entry("ensemble", "dist"), "ensemble.dist", "pareto requires rho");
    return SymmetricPareto{*rho};
  }
  if (name == "bernoulli") return ShiftedBernoulli{r.number("ensemble", "mu").value_or(0.5)};
  if (name == "constant") return Constant{r.number("ensemble", "value").value_or(1.0)};
  r.fail(*r.entry("ensemble", "dist"), "ensemble.dist", "unknown distribution '" + name + "'");
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& origin) {
  ConfigDocument doc;
  doc.origin_ = origin;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  auto fail = [&](const std::string& what) {
    throw ParameterError(origin + ":" + std::to_string(line) + ": " + what);
  };
  while (std::getline(is, raw)) {
    ++line;
    const auto comment = raw.find_first_of("#;");
    const std::string content = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') fail("malformed section header");
      section = trim(content.substr(1, content.size() - 2));
      if (!schema().count(section)) fail("unknown section [" + section + "]");
      doc.sections_[section];
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (!schema().at(section).count(key)) fail("unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) fail("empty value for '" + key + "'");
    auto& entries = doc.sections_[section];
    if (entries.count(key)) fail("duplicate key '" + key + "'");
    entries[key] = {value, line};
  }
  return doc;
}

const ConfigDocument::Entry* ConfigDocument::find(const std::string& section,
                                                  const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

CampaignConfig load_campaign(const ConfigDocument& doc) {
  const Reader r(doc);
  CampaignConfig c;
  EnsembleSpec& e = c.experiment.ensemble;
  e.n = static_cast<int>(r.integer("ensemble", "n").value_or(100));
  e.p = r.number("ensemble", "p").value_or(1.0);
  e.dist = parse_dist(r);
  const std::string diag = lower(r.text("ensemble", "diagonal").value_or("iid"));
  if (diag == "iid") {
    e.diagonal = DiagonalPolicy::kIid;
  } else if (diag == "zero") {
    e.diagonal = DiagonalPolicy::kZero;
  } else {
    r.fail(*r.entry("ensemble", "diagonal"), "ensemble.diagonal", "expected iid or zero");
  }
  if (r.boolean("ensemble", "adjacency").value_or(false)) {
    const auto* entry = r.entry("ensemble", "adjacency");
    try {
      e = directed_er_spec(e.n, e.p);
    } catch (const std::exception& ex) {
      r.fail(*entry, "ensemble.adjacency", ex.what());
    }
  }
  if (auto shift = r.numbers("ensemble", "shift")) {
    if (shift->size() == 1) shift->assign(static_cast<std::size_t>(e.n), shift->front());
    if (std::all_of(shift->begin(), shift->end(), [](double s) { return s == 0.0; })) {
      shift->clear();
    }
    e.shift = *shift;
  }
  c.shift_bound_R = r.number("ensemble", "R");

  ExperimentSpec& x = c.experiment;
  x.name = r.text("experiment", "name").value_or("experiment");
  if (x.name.find_first_of("/\\ \t") != std::string::npos) {
    r.fail(*r.entry("experiment", "name"), "experiment.name", "must not contain spaces or slashes");
  }
  x.trials = r.integer("experiment", "trials").value_or(100);
  if (auto seed = r.get<std::uint64_t>("experiment", "seed", [](const std::string& v) {
        std::size_t used = 0;
        const auto s = std::stoull(v, &used, 0);
        if (used != v.size() || v.front() == '-') throw std::invalid_argument("expected u64");
        return static_cast<std::uint64_t>(s);
      })) {
    x.master_seed = *seed;
  }
  if (auto stat = r.text("experiment", "statistic")) {
    try {
      x.statistic = parse_statistic(lower(*stat));
    } catch (const std::exception& ex) {
      r.fail(*r.entry("experiment", "statistic"), "experiment.statistic", ex.what());
    }
  }
  x.condition_K = r.number("experiment", "condition_K");
  if (auto sweep = r.text("experiment", "sweep")) {
    for (const auto& item : split(*sweep, ',')) {
      const auto parts = split(item, ':');
      try {
        if (parts.size() != 2) throw std::invalid_argument("expected n:p pairs");
        x.sweep.push_back({std::stoi(parts[0]), Reader::parse_number(parts[1])});
      } catch (const std::exception& ex) {
        r.fail(*r.entry("experiment", "sweep"), "experiment.sweep", ex.what());
      }
    }
  }
  if (auto threads = r.integer("experiment", "threads")) {
    if (*threads < 0) r.fail(*r.entry("experiment", "threads"), "experiment.threads", "must be >= 0");
    x.threads = static_cast<unsigned>(*threads);
  }
  x.pattern_threshold = r.number("experiment", "pattern_threshold").value_or(1.0);
  x.record_timing = r.boolean("experiment", "timing").value_or(false);
  c.tail_eps = r.numbers("experiment", "tail_eps").value_or(std::vector<double>{});

  c.lcd.p = r.number("lcd", "p").value_or(c.lcd.p);
  c.lcd.delta0 = r.number("lcd", "delta0").value_or(c.lcd.delta0);
  c.lcd.theta_max = r.number("lcd", "theta_max").value_or(c.lcd.theta_max);
  c.lcd.grid_step = r.number("lcd", "grid_step").value_or(c.lcd.grid_step);
  c.output_dir = r.text("output", "dir").value_or(".");

  // Semantic validation, attributed to the most relevant line.
  auto locate = [&](const std::string& section, const std::string& key) {
    const auto* entry = r.entry(section, key);
    return entry ? std::to_string(entry->line) : std::string("-");
  };
  auto check = [&](const std::string& section, const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ParameterError& ex) {
      throw ParameterError(doc.origin() + ":" + locate(section, key) + ": " + ex.what());
    }
  };
  // Point an ensemble or experiment error at the key it concerns.
  try {
    x.validate();
  } catch (const ParameterError& ex) {
    static const std::pair<const char*, std::pair<const char*, const char*>> kKeys[] = {
        {"n must", {"ensemble", "n"}},          {"p must", {"ensemble", "p"}},
        {"pareto", {"ensemble", "rho"}},        {"bernoulli", {"ensemble", "mu"}},
        {"constant", {"ensemble", "value"}},    {"shift", {"ensemble", "shift"}},
        {"adjacency", {"ensemble", "adjacency"}}, {"condition_K", {"experiment", "condition_K"}},
        {"pattern_threshold", {"experiment", "pattern_threshold"}}};
    const std::string what = ex.what();
    std::string section = "experiment", key = "trials";
    for (const auto& [needle, where] : kKeys) {
      if (what.find(needle) != std::string::npos) {
        std::tie(section, key) = where;
        break;
      }
    }
    if (section == "ensemble" && (key == "n" || key == "p") && !x.sweep.empty()) {
      section = "experiment";
      key = "sweep";
    }
    throw ParameterError(doc.origin() + ":" + locate(section, key) + ": " + what);
  }
  if (doc.find("lcd", "p") || doc.find("lcd", "delta0") || doc.find("lcd", "theta_max") ||
      doc.find("lcd", "grid_step")) {
    check("lcd", "grid_step", [&] { c.lcd.validate(); });
  }
  if (c.shift_bound_R) {
    check("ensemble", "R", [&] {
      for (const EnsembleSpec& pt : x.points()) {
        if (pt.shift_sup_norm() > *c.shift_bound_R * std::sqrt(pt.n * pt.p)) {
          throw ParameterError("shift violates ||D|| <= R sqrt(np)");
        }
      }
    });
  }
  return c;
}

CampaignConfig load_campaign_text(const std::string& text, const std::string& origin) {
  return load_campaign(ConfigDocument::parse(text, origin));
}

std::vector<std::string> preset_names() {
  return {"thm1.1", "thm1.2ii", "thm1.4", "thm1.7", "zero-row"};
}

std::string preset_config(const std::string& name) {
  if (name == "thm1.1") {
    return "[ensemble]\nn = 200\np = 0.2\ndist = rademacher\ndiagonal = zero\n"
           "[experiment]\nname = thm1.1\ntrials = 1000\nseed = 11\nstatistic = smin\n"
           "tail_eps = 0, 0.05, 0.1, 0.2, 0.4\n";
  }
  if (name == "thm1.2ii") {
    return "[ensemble]\ndist = pareto\nrho = 4.5\n"
           "[experiment]\nname = thm1.2ii\ntrials = 50\nseed = 12\nstatistic = smax\n"
           "sweep = 100:" + format_double(std::pow(100.0, -0.5)) + ", 1600:" +
           format_double(std::pow(1600.0, -0.5)) + "\n";
  }
  if (name == "thm1.4") {
    return "[ensemble]\ndist = rademacher\n"
           "[experiment]\nname = thm1.4\ntrials = 50\nseed = 14\nstatistic = smax\n"
           "sweep = 100:0.1, 400:0.05, 1600:0.025\n";
  }
  if (name == "thm1.7") {
    const int n = 300;
    const double p = 2.0 * std::log(static_cast<double>(n)) / n;
    return "[ensemble]\nn = 300\np = " + format_double(p) +
           "\ndist = bernoulli\nmu = " + format_double(p) +
           "\nadjacency = true\ndiagonal = zero\n"
           "[experiment]\nname = thm1.7\ntrials = 200\nseed = 17\nstatistic = smin\n"
           "tail_eps = 0, 0.05, 0.1, 0.2, 0.4\n";
  }
  if (name == "zero-row") {
    const int n = 200;
    const double ln = std::log(static_cast<double>(n));
    return "[ensemble]\ndist = constant\nvalue = 1\n"
           "[experiment]\nname = zero-row\ntrials = 10000\nseed = 5\nstatistic = zero_row\n"
           "sweep = 200:" + format_double(ln / (2.0 * n)) + ", 200:" + format_double(2.0 * ln / n) +
           "\n";
  }
  throw ParameterError("unknown preset '" + name + "'");
}

std::string config_reference() {
  return R"(Config file sections and defaults:
  [ensemble]   n = 100, p = 1, dist = rademacher|gaussian|pareto|bernoulli|constant,
               rho (pareto tail, > 2), mu = 0.5 (bernoulli mean), value = 1 (constant),
               diagonal = iid|zero, shift = 0 (scalar or n comma-separated values),
               adjacency = false (directed Erdos-Renyi edges), R (optional shift bound)
  [experiment] name = experiment, trials = 100, seed = 0, statistic = smin|smax|cond|
               singular|zero_row|max_entry|seginer|column_distance|pattern_count,
               condition_K (optional, inf allowed), sweep = "n:p, n:p", threads = 1
               (0 = auto), pattern_threshold = 1, tail_eps (optional list), timing = false
  [lcd]        p = 0.01, delta0 = 0.1, theta_max = 10000, grid_step = 0.001
  [output]     dir = .
)";
}

}  // namespace rmt
