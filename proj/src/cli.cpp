#include "carleson/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <omp.h>

#include "CLI11.hpp"

#include "carleson/arc_scan.hpp"
#include "carleson/construction.hpp"
#include "carleson/embedding.hpp"
#include "carleson/errors.hpp"
#include "carleson/measure.hpp"
#include "carleson/spectrum_io.hpp"

namespace carleson {

namespace {

const std::vector<int> kGrowthDims{8, 16, 32, 64, 128, 256};

// Flags as parsed; unset members leave the config file (or default) value alone.
struct Flags {
  std::optional<int> dim;
  std::optional<std::vector<int>> dims;
  std::optional<int> max_rank;
  std::optional<int> max_rd;
  std::optional<std::string> ramp;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> suite;
  std::optional<int> threads;
  std::string config;
  bool quiet = false;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--dim", f.dim, "Dimension N");
  cmd.add_option("--dims", f.dims, "Dimensions, comma separated")->delimiter(',');
  cmd.add_option("--max-rank", f.max_rank, "Deepest arc rank scanned");
  cmd.add_option("--ramp", f.ramp, "polynomial | smooth");
  cmd.add_option("--seed", f.seed, "Seed for randomized checks");
  cmd.add_option("--out", f.out, "Output file (default: stdout)");
  cmd.add_option("--format", f.format, "json | csv");
  cmd.add_option("--config", f.config, "JSON config file");
  cmd.add_option("--threads", f.threads, "Worker threads (1 = bit-exact serial)");
  cmd.add_flag("--quiet", f.quiet, "Print only the output path");
}

RunConfig merge(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw DomainError("cannot read config file '" + f.config + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("malformed config: ") + e.what());
    }
    cfg = RunConfig::from_json(doc);
  }
  if (f.dims) cfg.dims = *f.dims;
  if (f.dim) cfg.dims = {*f.dim};
  if (f.max_rank) cfg.max_rank = *f.max_rank;
  if (f.max_rd) cfg.max_rd = *f.max_rd;
  if (f.ramp) cfg.ramp = parse_ramp_kind(*f.ramp);
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.format) cfg.format = *f.format;
  if (f.suite) cfg.suite = *f.suite;
  if (f.threads) cfg.threads = *f.threads;
  if (f.quiet) cfg.quiet = true;
  cfg.validate();
  return cfg;
}

int single_dim(const RunConfig& cfg) {
  if (cfg.dims.size() != 1) throw DomainError("this command takes exactly one --dim");
  return cfg.dims.front();
}

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions options;
  options.threads = cfg.threads;
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return options;
}

nlohmann::json envelope(const std::string& command, nlohmann::json parameters) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"parameters", std::move(parameters)}};
}

nlohmann::json intensity_json(const IntensityResult& r) {
  return {{"value", r.value},
          {"witness", {{"j", r.witness.rank}, {"k", r.witness.index}}},
          {"max_rank", r.max_rank},
          {"remainder_bound", r.remainder_bound},
          {"pruned_mass", r.pruned_mass},
          {"arcs_evaluated", r.arcs_evaluated}};
}

nlohmann::json row_json(const GrowthRow& row) {
  return {{"N", row.dim},
          {"intensity", row.intensity},
          {"value_spectral", row.value_spectral},
          {"value_paper", row.value_paper},
          {"ratio", row.ratio},
          {"ratio_over_sqrtlog", row.ratio_over_sqrtlog},
          {"witness", {{"j", row.full.intensity.witness.rank}, {"k", row.full.intensity.witness.index}}},
          {"remainder_bound", row.full.intensity.remainder_bound},
          {"relative_gap", row.full.relative_gap}};
}

nlohmann::json growth_json(const GrowthReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) rows.push_back(row_json(row));
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) checks.push_back(c.to_json());
  return {{"rows", rows},
          {"slope_value_over_N_vs_lnN", report.slope},
          {"value_band", report.value_band},
          {"intensity_band", report.intensity_band},
          {"ratio_band", report.ratio_band},
          {"checks", checks}};
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw DomainError("cannot write '" + cfg.out + "'");
  file << text;
  file.close();
  if (!file) throw NumericError("write to '" + cfg.out + "' failed", 0.0);
  if (!cfg.quiet) out << "wrote ";
  out << cfg.out << '\n';
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const int dim = single_dim(cfg);
  auto doc = envelope("spectrum", {{"dim", dim}, {"ramp", to_string(cfg.ramp)}});
  doc["spectrum"] = spectrum_to_json(phi_spectrum(dim, WaveletProfile(cfg.ramp)));
  emit(cfg, dump(doc), out);
  return 0;
}

int cmd_intensity(const RunConfig& cfg, std::ostream& out) {
  const int dim = single_dim(cfg);
  const int rank = cfg.max_rank.value_or(default_max_rank(dim));
  const auto result =
      carleson_intensity(phi_spectrum(dim, WaveletProfile(cfg.ramp)), rank, scan_options(cfg));
  auto doc = envelope("intensity", {{"dim", dim}, {"max_rank", rank}, {"ramp", to_string(cfg.ramp)},
                                    {"threads", cfg.threads}});
  doc["N"] = dim;
  doc.update(intensity_json(result));
  emit(cfg, dump(doc), out);
  return 0;
}

int cmd_embedding(const RunConfig& cfg, std::ostream& out) {
  const int dim = single_dim(cfg);
  const int rank = cfg.max_rank.value_or(default_max_rank(dim));
  const auto r = ratio_lower_bound(dim, rank, scan_options(cfg), WaveletProfile(cfg.ramp));
  auto doc = envelope("embedding", {{"dim", dim}, {"max_rank", rank}, {"ramp", to_string(cfg.ramp)},
                                    {"threads", cfg.threads}});
  doc["N"] = r.dim;
  doc["value_spectral"] = r.value_spectral;
  doc["value_paper"] = r.value_paper;
  doc["relative_gap"] = r.relative_gap;
  doc["ratio_lower_bound"] = r.ratio_lower_bound;
  doc["intensity"] = intensity_json(r.intensity);
  emit(cfg, dump(doc), out);
  return 0;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto dims = cfg.dims.empty() ? kGrowthDims : cfg.dims;
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  const nlohmann::json params{{"dims", dims}, {"max_rank", cfg.max_rank.value_or(-1)},
                              {"ramp", to_string(cfg.ramp)}, {"threads", cfg.threads}};
  auto render = [&](const GrowthReport& report) {
    if (format == "csv") return report.to_csv();
    auto doc = envelope("experiment", params);
    doc.update(growth_json(report));
    return dump(doc);
  };
  try {
    emit(cfg, render(growth_experiment(dims, cfg.max_rank.value_or(-1), scan_options(cfg),
                                       cfg.thresholds, WaveletProfile(cfg.ramp))),
         out);
    return 0;
  } catch (const GrowthAborted& aborted) {
    emit(cfg, render(aborted.partial()), out);
    err << "error: " << aborted.what() << '\n';
    return 1;
  }
}

int cmd_verify(const RunConfig& cfg, int max_rd_flag, std::ostream& out) {
  const ScanOptions options = scan_options(cfg);
  nlohmann::json params{{"suite", cfg.suite}, {"seed", cfg.seed}, {"ramp", to_string(cfg.ramp)},
                        {"thresholds", cfg.thresholds.to_json()}};
  nlohmann::json checks = nlohmann::json::array();
  bool pass = true;
  auto take = [&](const std::vector<CheckReport>& reports) {
    for (const auto& r : reports) {
      pass = pass && r.pass;
      checks.push_back(r.to_json());
    }
  };
  nlohmann::json extra;
  if (cfg.suite == "construction") {
    const auto dims = cfg.dims.empty() ? std::vector<int>{8} : cfg.dims;
    const int rank = cfg.max_rank.value_or(12);
    params["dims"] = dims;
    params["max_rank"] = rank;
    for (int dim : dims) take(verify_construction(dim, rank, cfg.seed, cfg.thresholds));
  } else if (cfg.suite == "analysis") {
    const int rank = cfg.max_rank.value_or(6);
    params["max_rank"] = rank;
    params["max_rd"] = max_rd_flag;
    take(verify_analysis(rank, max_rd_flag, cfg.thresholds));
  } else if (cfg.suite == "growth") {
    const auto dims = cfg.dims.empty() ? kGrowthDims : cfg.dims;
    params["dims"] = dims;
    params["max_rank"] = cfg.max_rank.value_or(-1);
    const auto report = growth_experiment(dims, cfg.max_rank.value_or(-1), options, cfg.thresholds,
                                          WaveletProfile(cfg.ramp));
    take(report.checks);
    extra = growth_json(report);
    extra.erase("checks");
  } else {
    throw DomainError("unknown suite '" + cfg.suite + "' (construction | analysis | growth)");
  }
  auto doc = envelope("verify", params);
  doc["checks"] = checks;
  if (!extra.is_null()) doc["growth"] = extra;
  doc["verdict"] = pass ? "pass" : "fail";
  emit(cfg, dump(doc), out);
  return pass ? 0 : 1;
}

}  // namespace

void RunConfig::validate() const {
  for (int n : dims) {
    if (n < 2 || n > 256) throw DomainError("dimension " + std::to_string(n) + " outside [2, 256]");
  }
  if (max_rank && (*max_rank < 0 || *max_rank > 20)) {
    throw DomainError("max_rank " + std::to_string(*max_rank) + " outside [0, 20]");
  }
  if (max_rd < 0) throw DomainError("max_rd must be >= 0");
  if (threads < 0) throw DomainError("threads must be >= 0");
  if (!format.empty() && format != "json" && format != "csv") {
    throw DomainError("format must be json or csv");
  }
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("dims")) cfg.dims = doc.at("dims").get<std::vector<int>>();
    if (doc.contains("max_rank") && !doc.at("max_rank").is_null()) cfg.max_rank = doc.at("max_rank").get<int>();
    cfg.max_rd = doc.value("max_rd", cfg.max_rd);
    if (doc.contains("ramp")) cfg.ramp = parse_ramp_kind(doc.at("ramp").get<std::string>());
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.out = doc.value("out", cfg.out);
    cfg.format = doc.value("format", cfg.format);
    cfg.suite = doc.value("suite", cfg.suite);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.quiet = doc.value("quiet", cfg.quiet);
    if (doc.contains("thresholds")) cfg.thresholds = Thresholds::from_json(doc.at("thresholds"));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config field: ") + e.what());
  }
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json doc{{"dims", dims},       {"max_rd", max_rd}, {"ramp", to_string(ramp)},
                     {"seed", seed},       {"out", out},       {"format", format},
                     {"suite", suite},     {"threads", threads}, {"quiet", quiet},
                     {"thresholds", thresholds.to_json()}};
  doc["max_rank"] = max_rank ? nlohmann::json(*max_rank) : nlohmann::json(nullptr);
  return doc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carleson embedding counterexample: spectra, intensity, embedding and checks",
               "carleson"};
  app.require_subcommand(1);
  Flags flags;
  auto* spectrum = app.add_subcommand("spectrum", "Export the sparse spectrum of phi as JSON");
  auto* intensity = app.add_subcommand("intensity", "Dyadic Carleson intensity of mu");
  auto* embedding = app.add_subcommand("embedding", "Embedding form by both routes and ratio bound");
  auto* experiment = app.add_subcommand("experiment", "Growth table over dimensions");
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  for (auto* cmd : {spectrum, intensity, embedding, experiment, verify}) add_common(*cmd, flags);
  verify->add_option("--suite", flags.suite, "construction | analysis | growth");
  verify->add_option("--max-rd", flags.max_rd, "Largest relative distance for the analysis suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    RunConfig cfg = merge(flags);
    if (*spectrum) return cmd_spectrum(cfg, out);
    if (*intensity) return cmd_intensity(cfg, out);
    if (*embedding) return cmd_embedding(cfg, out);
    if (*experiment) return cmd_experiment(cfg, out, err);
    return cmd_verify(cfg, cfg.max_rd, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace carleson
