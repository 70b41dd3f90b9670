// rmtlab: sample sparse random matrices, measure their extreme singular
// values, run Monte-Carlo campaigns, and compute LCDs of unit vectors.
//
// Exit codes: 0 success, 2 validation, 3 I/O, 4 numerical non-convergence.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rmt/config.hpp"
#include "rmt/errors.hpp"
#include "rmt/geometry.hpp"
#include "rmt/matrix_io.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/report.hpp"
#include "rmt/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

std::string read_text(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw rmt::IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw rmt::IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw rmt::IoError("write failed: " + path.string());
}

struct CampaignSource {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

rmt::CampaignConfig load(const CampaignSource& src) {
  if (src.config_path.empty() == src.preset.empty()) {
    throw rmt::ParameterError("exactly one of --config or --preset is required");
  }
  rmt::CampaignConfig c =
      src.preset.empty()
          ? rmt::load_campaign_text(read_text(src.config_path), src.config_path)
          : rmt::load_campaign_text(rmt::preset_config(src.preset), "preset:" + src.preset);
  if (src.seed) c.experiment.master_seed = *src.seed;
  if (src.threads) c.experiment.threads = *src.threads;
  return c;
}

int cmd_gen(const CampaignSource& src, const std::string& out, long trial) {
  const rmt::CampaignConfig c = load(src);
  if (trial < 0) throw rmt::ParameterError("--trial must be >= 0");
  const rmt::Matrix m = rmt::sample_matrix(
      c.experiment.ensemble, {c.experiment.master_seed, static_cast<std::uint32_t>(trial)});
  if (out.empty() || out == "-") {
    rmt::write_matrix(std::cout, m);
  } else {
    rmt::write_matrix(fs::path(out), m);
  }
  return 0;
}

int cmd_spectral(const std::string& path, const std::string& method) {
  const rmt::Matrix m = rmt::read_matrix(fs::path(path));
  rmt::SpectralMethod chosen = rmt::SpectralMethod::kFullSvd;
  if (method == "iterative" || (method == "auto" && std::max(m.rows(), m.cols()) > 400)) {
    chosen = rmt::SpectralMethod::kIterative;
  }
  json doc = rmt::to_json(rmt::spectral_summary(m, chosen));
  doc["version"] = rmt::kVersion;
  doc["input"] = {{"matrix", path}, {"rows", m.rows()}, {"cols", m.cols()}, {"method", method}};
  std::cout << doc.dump() << '\n';
  return 0;
}

int cmd_experiment(const CampaignSource& src, const std::string& out) {
  rmt::CampaignConfig c = load(src);
  if (!out.empty()) c.output_dir = out;
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw rmt::IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::string name = c.experiment.name;
  const fs::path csv_path = dir / (name + ".csv");
  const fs::path json_path = dir / (name + ".json");
  const fs::path marker = dir / (name + ".FAILED");
  fs::remove(marker, ec);

  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw rmt::IoError("cannot open " + csv_path.string());
  rmt::ExperimentResult partial;
  partial.spec = c.experiment;
  bool header = true;
  try {
    const rmt::ExperimentResult result =
        rmt::run_experiment(c.experiment, [&](const rmt::PointResult& pt) {
          rmt::ExperimentResult one;
          one.spec = c.experiment;
          one.points.push_back(pt);
          std::ostringstream rows;
          rmt::write_records_csv(rows, one);
          std::string text = rows.str();
          if (!header) text.erase(0, text.find('\n') + 1);
          header = false;
          csv << text << std::flush;
        });
    std::optional<rmt::TailCurve> tail;
    if (!c.tail_eps.empty()) {
      if (c.experiment.statistic == rmt::Statistic::kSMin) {
        const auto& pt = result.points.front();
        std::vector<double> values;
        for (const auto& r : pt.records) {
          if (r.error.empty()) values.push_back(r.value);
        }
        const double density = rmt::effective_density(c.experiment.points().front());
        tail = rmt::tail_curve_from_values(values, pt.n, density, c.tail_eps);
      } else {
        tail = rmt::smin_tail_curve(c.experiment, c.tail_eps);
      }
    }
    json doc = rmt::campaign_json(result, c, tail);
    write_text(json_path, doc.dump(2) + "\n");
  } catch (const std::exception& ex) {
    csv.flush();
    write_text(marker, std::string(ex.what()) + "\n");
    throw;
  }
  return 0;
}

int cmd_lcd(const std::string& path, const CampaignSource& src, std::optional<double> p,
            std::optional<double> delta0, std::optional<double> theta_max,
            std::optional<double> grid_step) {
  rmt::LcdParams params;
  if (!src.config_path.empty()) {
    params = rmt::load_campaign_text(read_text(src.config_path), src.config_path).lcd;
  }
  if (p) params.p = *p;
  if (delta0) params.delta0 = *delta0;
  if (theta_max) params.theta_max = *theta_max;
  if (grid_step) {
    params.grid_step = *grid_step;
  } else if (theta_max) {
    params.grid_step = std::min(params.grid_step, 1e-3 * params.theta_max);
  }
  params.validate();

  const rmt::Vector v = rmt::read_vector(fs::path(path));
  const double norm = v.norm();
  bool renormalized = false;
  if (std::abs(norm - 1.0) > 1e-12) {
    if (std::abs(norm - 1.0) >= 1e-6) {
      throw rmt::DataError("vector norm " + rmt::format_double(norm) + " is not 1");
    }
    std::cerr << "warning: renormalizing vector with norm " << rmt::format_double(norm) << '\n';
    renormalized = true;
  }
  const rmt::UnitVector x = rmt::UnitVector::normalized(v);
  const rmt::LcdResult r = rmt::lcd(x, params);
  json doc = {{"lcd", rmt::json_number(r.lcd)},
              {"lower_bounds",
               {{"scale", r.scale_bound}, {"sup_norm", r.sup_norm_bound}}},
              {"renormalized", renormalized},
              {"params",
               {{"p", params.p},
                {"delta0", params.delta0},
                {"theta_max", rmt::json_number(params.theta_max)},
                {"grid_step", params.grid_step}}},
              {"input", path},
              {"version", rmt::kVersion}};
  std::cout << doc.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse random matrix laboratory", "rmtlab"};
  app.set_version_flag("--version", rmt::kVersion);
  app.footer(rmt::config_reference());
  app.require_subcommand(1);

  CampaignSource src;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  long trial = 0;
  std::string matrix_path;
  std::string method = "auto";
  std::string vector_path;
  double p = 0, delta0 = 0, theta_max = 0, grid_step = 0;

  auto add_campaign_flags = [&](CLI::App* sub) {
    sub->add_option("--config", src.config_path, "INI config file");
    sub->add_option("--preset", src.preset, "Built-in campaign")
        ->check(CLI::IsMember(rmt::preset_names()));
    sub->add_option("--seed", seed, "Master seed (overrides config)");
    sub->add_option("--threads", threads, "Worker threads, 0 = auto");
  };

  auto* gen = app.add_subcommand("gen", "Sample one matrix and write it in coordinate format");
  add_campaign_flags(gen);
  gen->add_option("--out", out, "Output matrix file ('-' for stdout)");
  gen->add_option("--trial", trial, "Trial index of the sample");

  auto* spectral = app.add_subcommand("spectral", "Print the spectral summary of a matrix file");
  spectral->add_option("matrix", matrix_path, "Matrix file")->required();
  spectral->add_option("--method", method, "full, iterative, or auto")
      ->check(CLI::IsMember({"full", "iterative", "auto"}));

  auto* experiment = app.add_subcommand("experiment", "Run a Monte-Carlo campaign");
  add_campaign_flags(experiment);
  experiment->add_option("--out", out, "Output directory for CSV and JSON");

  auto* lcd = app.add_subcommand("lcd", "Least common denominator of a unit vector");
  lcd->add_option("vector", vector_path, "Vector file, one value per line")->required();
  lcd->add_option("--config", src.config_path, "INI config with an [lcd] section");
  auto* p_opt = lcd->add_option("--p", p, "Sparsity p (default 0.01)");
  auto* d_opt = lcd->add_option("--delta0", delta0, "delta0 (default 0.1)");
  auto* t_opt = lcd->add_option("--theta-max", theta_max, "Search cap (default 10000)");
  auto* g_opt = lcd->add_option("--grid-step", grid_step, "Scan step (default 0.001)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  auto* seed_opt = gen->parsed() ? gen->get_option("--seed") : experiment->get_option("--seed");
  auto* thr_opt = gen->parsed() ? gen->get_option("--threads") : experiment->get_option("--threads");
  if (seed_opt->count()) src.seed = seed;
  if (thr_opt->count()) src.threads = threads;

  auto opt = [](CLI::Option* o, double v) {
    return o->count() ? std::optional<double>(v) : std::nullopt;
  };
  try {
    if (gen->parsed()) return cmd_gen(src, out, trial);
    if (spectral->parsed()) {
      return cmd_spectral(matrix_path, method);
    }
    if (experiment->parsed()) return cmd_experiment(src, out);
    if (lcd->parsed()) {
      return cmd_lcd(vector_path, src, opt(p_opt, p), opt(d_opt, delta0), opt(t_opt, theta_max),
                     opt(g_opt, grid_step));
    }
  } catch (const rmt::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const rmt::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
