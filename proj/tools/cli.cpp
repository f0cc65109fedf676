/* Copyright 2026 The stochevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "stochevo/io/json.hpp"
#include "stochevo/io/sample_csv.hpp"
#include "stochevo/stochevo.hpp"

namespace stochevo::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

using FileList = std::vector<std::pair<std::string, std::string>>;

// Flat `key = value` config; '#' starts a comment.
std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = io::detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw validation_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(io::detail::trim(body.substr(0, eq)));
    std::string value(io::detail::trim(body.substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    entries[key] = value;
  }
  return entries;
}

bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Removes --config from args and splices its entries in right after the
// subcommand for every option the subcommand knows and the command line does
// not already set. Keys the subcommand does not know are ignored.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config_path) return args;
  const auto entries = read_flat_config(*config_path);
  auto sub_it = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
  if (sub_it == args.end()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(*sub_it);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::set<std::string> known;
  for (const CLI::Option* opt : sub->get_options()) {
    for (const auto& name : opt->get_lnames()) known.insert(name);
  }
  std::vector<std::string> injected;
  for (const auto& [key, value] : entries) {
    if (!known.count(key) || key == "help" || has_flag(args, key)) continue;
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  args.insert(sub_it + 1, injected.begin(), injected.end());
  return args;
}

std::map<std::string, std::string> collect_params(const CLI::App* sub) {
  std::map<std::string, std::string> params;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "manifest") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      params[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

void check_output_path(const std::string& path) {
  if (path.empty()) throw validation_error("output path must not be empty");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw validation_error("output directory does not exist: " + parent.string());
  }
}

std::string manifest_path_for(const std::string& requested, const std::string& first_output) {
  return requested.empty() ? first_output + ".manifest.json" : requested;
}

// Writes outputs plus their manifest in one commit and echoes the digests.
void emit_with_manifest(const CLI::App* sub, const FileList& outputs, const std::string& manifest_request,
                        std::optional<std::uint64_t> seed, std::ostream& out) {
  RunManifest manifest;
  manifest.command = sub->get_name();
  manifest.params = collect_params(sub);
  manifest.seed = seed;
  manifest.version = kVersion;
  for (const auto& [path, content] : outputs) manifest.outputs.push_back({path, sha256_hex(content)});
  const std::string manifest_path = manifest_path_for(manifest_request, outputs.front().first);
  check_output_path(manifest_path);
  FileList all = outputs;
  all.emplace_back(manifest_path, io::dump_stable(to_json(manifest)));
  commit_files(all);
  for (const auto& rec : manifest.outputs) out << rec.path << ' ' << rec.sha256 << '\n';
  out << manifest_path << '\n';
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = io::detail::trim(item);
    if (!t.empty()) items.emplace_back(t);
  }
  return items;
}

// Options shared by the agent commands.
struct HiaOptions {
  HiaParams params;
  void bind(CLI::App* sub) {
    sub->add_option("--n-agents", params.n_agents, "Number of agents");
    sub->add_option("--noise-std", params.noise_std, "Per-step log-shock scale");
    sub->add_option("--drift", params.drift, "Per-step log drift");
    sub->add_option("--coupling-in", params.coupling_in, "Redistribution toward agents (a)");
    sub->add_option("--coupling-out", params.coupling_out, "Mean-field competition (c)");
    sub->add_option("--steps", params.steps, "Number of synchronous steps");
    sub->add_option("--floor", params.floor, "Smallest admissible size");
  }
};

struct Options {
  std::string manifest;
  std::string out;

  // solve / regime / limits / figure1 / simulate
  double r = 0.0;
  double alpha = 0.0;
  double nu = 0.0;
  std::string convention = "both";
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  std::size_t points = 200;
  std::string spacing = "lin";
  std::string mode;
  double x0 = 1.0;
  double t = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  // fit
  std::string input;
  std::string column;
  std::string models = "double_pareto,lognormal,pareto_tail";
  std::size_t k = 0;

  // hia / sweep
  HiaOptions hia;
  std::string report;
  std::string vary = "noise_std";
  double sweep_min = 0.0;
  double sweep_max = 0.0;
  std::size_t sweep_points = 8;
  std::size_t seeds = 5;
};

json solution_json(double r, double alpha, double nu, const std::string& convention) {
  const ExponentSolution s = solve_exponents_canonical(r, alpha, nu);
  const VietaResiduals v = vieta_residuals(alpha, nu, s);
  json doc = {
      {"r", r},
      {"alpha", alpha},
      {"nu", nu},
      {"convention", convention},
      {"mu", s.mu},
      {"alpha_star", s.alpha_star},
      {"regime", std::string(to_string(s.regime))},
      {"vieta", {{"product_residual", v.product}, {"difference_residual", v.difference}}},
  };
  if (convention != "paper") {
    doc["m1_canonical"] = s.m1_canonical;
    doc["m2_canonical"] = s.m2_canonical;
  }
  if (convention != "canonical") {
    doc["m1_paper"] = io::number_or_null(s.m1_paper);
    doc["m2_paper"] = io::number_or_null(s.m2_paper);
  }
  return doc;
}

int run_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err);

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Killed geometric Brownian motion, double-Pareto analytics and heavy-tail fitting.", "stochevo"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.footer("Any command accepts --config FILE with flat `key = value` defaults; flags override it.");
  Options o;
  const std::string models_default = o.models;

  auto add_common = [&](CLI::App* sub, bool out_required) {
    auto* opt = sub->add_option("--out", o.out, "Output file");
    if (out_required) opt->required();
    sub->add_option("--manifest", o.manifest, "Manifest path (default: <out>.manifest.json)");
  };

  auto* solve = app.add_subcommand("solve", "Tail exponents for (r, alpha, nu)");
  solve->add_option("--r", o.r, "Drift rate")->required();
  solve->add_option("--alpha", o.alpha, "Volatility")->required();
  solve->add_option("--nu", o.nu, "Observation (killing) rate")->required();
  solve->add_option("--convention", o.convention, "canonical, paper or both")
      ->check(CLI::IsMember({"canonical", "paper", "both"}));
  add_common(solve, false);

  auto* regime = app.add_subcommand("regime", "alpha_star and stochasticity regime");
  regime->add_option("--r", o.r, "Drift rate")->required();
  regime->add_option("--alpha", o.alpha, "Volatility")->required();
  add_common(regime, false);

  auto* limits = app.add_subcommand("limits", "Limit table of the closed-form exponents (CSV)");
  limits->add_option("--r", o.r, "Drift rate")->required();
  limits->add_option("--alpha", o.alpha, "Volatility used by the nu limits")->required();
  limits->add_option("--nu", o.nu, "Observation rate used by the alpha limits")->required();
  add_common(limits, false);

  auto* figure1 = app.add_subcommand("figure1", "Exponents as a function of alpha (CSV)");
  figure1->add_option("--r", o.r, "Drift rate")->required();
  figure1->add_option("--nu", o.nu, "Observation rate")->required();
  figure1->add_option("--alpha-min", o.alpha_min, "Smallest alpha")->required();
  figure1->add_option("--alpha-max", o.alpha_max, "Largest alpha")->required();
  figure1->add_option("--points", o.points, "Grid size");
  figure1->add_option("--spacing", o.spacing, "lin or log")->check(CLI::IsMember({"lin", "log"}));
  add_common(figure1, false);

  auto* simulate = app.add_subcommand("simulate", "Sample GBM terminal or killed states (CSV)");
  simulate->add_option("--mode", o.mode, "gbm or killed")->required()->check(CLI::IsMember({"gbm", "killed"}));
  simulate->add_option("--x0", o.x0, "Initial level");
  simulate->add_option("--r", o.r, "Drift rate")->required();
  simulate->add_option("--alpha", o.alpha, "Volatility")->required();
  auto* nu_opt = simulate->add_option("--nu", o.nu, "Observation rate (killed mode)")->default_str("");
  auto* t_opt = simulate->add_option("--t", o.t, "Horizon (gbm mode)")->default_str("");
  simulate->add_option("--n", o.n, "Number of samples")->required();
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--workers", o.workers, "Worker threads; output does not depend on it");
  add_common(simulate, true);

  auto* fit = app.add_subcommand("fit", "Fit and compare heavy-tail models (JSON)");
  fit->add_option("--input", o.input, "CSV with a header row")->required();
  fit->add_option("--column", o.column, "Column to read (default value, then state)");
  fit->add_option("--models", o.models, "Comma-separated subset of double_pareto,lognormal,pareto_tail");
  auto* k_opt = fit->add_option("--k", o.k, "Hill order statistic count (default max(10, n/100))")->default_str("");
  add_common(fit, false);

  auto* hia = app.add_subcommand("hia", "Run the interacting-agents model");
  o.hia.bind(hia);
  hia->add_option("--seed", o.seed, "Seed");
  hia->add_option("--report", o.report, "JSON report path (default: <out>.report.json)");
  add_common(hia, true);

  auto* sweep = app.add_subcommand("sweep", "Sweep the agents model and track the fitted exponent");
  o.hia.bind(sweep);
  sweep->add_option("--vary", o.vary, "noise_std or coupling")->check(CLI::IsMember({"noise_std", "coupling"}));
  auto* min_opt = sweep->add_option("--min", o.sweep_min, "Smallest swept value (default 0.05 or 0.01)")->default_str("");
  auto* max_opt = sweep->add_option("--max", o.sweep_max, "Largest swept value (default 0.8 or 0.2)")->default_str("");
  sweep->add_option("--points", o.sweep_points, "Number of sweep points");
  sweep->add_option("--seeds", o.seeds, "Seeds per point");
  sweep->add_option("--seed", o.seed, "Base seed");
  sweep->add_option("--workers", o.workers, "Worker threads; output does not depend on it");
  add_common(sweep, true);

  std::string replay_manifest;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and verify output digests");
  replay->add_option("--manifest", replay_manifest, "Manifest written by an earlier run")->required();

  std::vector<std::string> args = merge_config(app, raw_args);
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*replay) return run_replay(replay_manifest, out, err);

  if (*solve || *regime) {
    json doc;
    if (*solve) {
      doc = solution_json(o.r, o.alpha, o.nu, o.convention);
    } else {
      const RegimeClass c = classify_regime(o.r, o.alpha);
      doc = {{"r", o.r}, {"alpha", o.alpha}, {"alpha_star", c.alpha_star}, {"regime", std::string(to_string(c.regime))}};
    }
    const std::string text = io::dump_stable(doc);
    if (!o.out.empty()) {
      check_output_path(o.out);
      std::ostringstream digests;
      emit_with_manifest(*solve ? solve : regime, {{o.out, text}}, o.manifest, std::nullopt, digests);
    }
    out << text;
    return kExitOk;
  }

  if (*limits || *figure1) {
    std::ostringstream csv;
    if (*limits) {
      write_limit_csv(csv, limit_table(o.r, o.alpha, o.nu));
    } else {
      const auto grid = o.spacing == "log" ? log_grid(o.alpha_min, o.alpha_max, o.points)
                                           : linear_grid(o.alpha_min, o.alpha_max, o.points);
      write_figure1_csv(csv, figure1_data(o.r, o.nu, grid));
    }
    if (o.out.empty()) {
      out << csv.str();
    } else {
      check_output_path(o.out);
      emit_with_manifest(*limits ? limits : figure1, {{o.out, csv.str()}}, o.manifest, std::nullopt, out);
    }
    return kExitOk;
  }

  if (*simulate) {
    const GbmParams params(o.x0, o.r, o.alpha);
    detail::require(o.n >= 1, "n must be at least 1");
    std::ostringstream csv;
    if (o.mode == "killed") {
      detail::require(nu_opt->count() > 0, "killed mode needs --nu");
      const KillSchedule schedule(o.nu);
      check_output_path(o.out);
      write_killed_csv(csv, sample_killed_batch(params, schedule, o.n, o.seed, o.workers));
    } else {
      detail::require(t_opt->count() > 0, "gbm mode needs --t");
      detail::require(std::isfinite(o.t) && o.t >= 0.0, "t must be finite and non-negative");
      check_output_path(o.out);
      io::write_sample_csv(csv, sample_terminal_batch(params, o.t, o.n, o.seed, o.workers));
    }
    emit_with_manifest(simulate, {{o.out, csv.str()}}, o.manifest, o.seed, out);
    return kExitOk;
  }

  if (*fit) {
    CompareOptions options;
    options.models = split_csv_list(o.models);
    detail::require(!options.models.empty(), "--models must name at least one model");
    if (k_opt->count() > 0) options.hill_k = o.k;
    if (!o.out.empty()) check_output_path(o.out);
    std::ifstream in(o.input);
    if (!in) throw io_error("cannot open input file " + o.input);
    const SampleSet samples = io::read_sample_csv(
        in, o.column.empty() ? std::nullopt : std::optional<std::string>(o.column), o.input);
    const std::string text = io::dump_stable(to_json(compare_models(samples, options)));
    if (!o.out.empty()) {
      std::ostringstream digests;
      emit_with_manifest(fit, {{o.out, text}}, o.manifest, std::nullopt, digests);
    }
    out << text;
    return kExitOk;
  }

  if (*hia) {
    check_output_path(o.out);
    const std::string report_path = o.report.empty() ? o.out + ".report.json" : o.report;
    check_output_path(report_path);
    const HiaResult res = run_hia(o.hia.params, o.seed);
    std::ostringstream csv;
    io::write_sample_csv(csv, res.population.sizes);
    const json report = {
        {"effective_alpha", res.effective_alpha},
        {"steps", res.population.step},
        {"n_agents", res.population.sizes.size()},
        {"fit", to_json(res.report)},
    };
    emit_with_manifest(hia, {{o.out, csv.str()}, {report_path, io::dump_stable(report)}}, o.manifest, o.seed, out);
    return kExitOk;
  }

  if (*sweep) {
    check_output_path(o.out);
    SweepConfig config;
    config.base = o.hia.params;
    config.axis = o.vary == "noise_std" ? SweepAxis::NoiseStd : SweepAxis::Coupling;
    const double lo = min_opt->count() ? o.sweep_min : (config.axis == SweepAxis::NoiseStd ? 0.05 : 0.01);
    const double hi = max_opt->count() ? o.sweep_max : (config.axis == SweepAxis::NoiseStd ? 0.8 : 0.2);
    config.values = linear_grid(lo, hi, o.sweep_points);
    config.seeds = o.seeds;
    config.base_seed = o.seed;
    config.workers = o.workers;
    std::ostringstream csv;
    write_sweep_csv(csv, run_sweep(config));
    emit_with_manifest(sweep, {{o.out, csv.str()}}, o.manifest, o.seed, out);
    return kExitOk;
  }

  throw invariant_error("no command dispatched");
}

int run_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw validation_error("manifest " + manifest_path + " is not valid JSON: " + e.what());
  }
  const RunManifest manifest = manifest_from_json(doc);
  if (manifest.command == "replay") throw validation_error("cannot replay a replay");
  if (manifest.outputs.empty()) throw validation_error("manifest lists no outputs");

  std::vector<std::string> args{"stochevo", manifest.command};
  for (const auto& [key, value] : manifest.params) {
    args.push_back("--" + key);
    args.push_back(value);
  }
  args.push_back("--manifest");
  args.push_back(manifest_path);

  std::ostringstream sink;
  const int code = dispatch(args, sink, err);
  if (code != kExitOk) return code;

  bool all_match = true;
  for (const auto& rec : manifest.outputs) {
    const bool match = sha256_hex(read_file(rec.path)) == rec.sha256;
    all_match = all_match && match;
    out << (match ? "ok " : "MISMATCH ") << rec.path << '\n';
  }
  if (!all_match) {
    err << "error: replayed outputs differ from the manifest\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const degenerate_input_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const invariant_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace stochevo::cli
