// hyperroles: command-line front end for the pipeline stages and the
// synthetic fixture generator.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hyperroles/error.hpp"
#include "hyperroles/pipeline.hpp"
#include "hyperroles/synth.hpp"

namespace fs = std::filesystem;
using namespace hyperroles;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitStage = 3;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::string> community;
  std::string months;  // comma-separated list
  std::optional<int> year;
  std::optional<std::string> threads;
  std::optional<std::string> users;
  std::optional<std::string> texts;
  std::optional<std::size_t> workers;
};

std::vector<int> parse_months(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view item(text.data() + start, end - start);
    int m = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), m);
    if (ec != std::errc() || ptr != item.data() + item.size() || m < 1 || m > 12) {
      throw Error(ErrorCode::kInputError, "--months: bad month '" + std::string(item) + "'");
    }
    out.push_back(m);
    start = end + 1;
  }
  return out;
}

PipelineConfig build_config(const CommonArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : PipelineConfig::load(a.config);
  if (a.seed) cfg.null_model.seed = *a.seed;
  if (a.community) cfg.community = *a.community;
  if (!a.months.empty()) cfg.months = parse_months(a.months);
  if (a.year) cfg.year = *a.year;
  if (a.threads) cfg.threads = *a.threads;
  if (a.users) cfg.users = *a.users;
  if (a.texts) cfg.texts = fs::path(*a.texts);
  if (a.workers) cfg.threads_hint = *a.workers;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "pipeline config (JSON)");
  cmd->add_option("--seed", a.seed, "null-model / sampling seed");
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
  cmd->add_option("--community", a.community, "keep threads of this community only");
  cmd->add_option("--months", a.months, "comma-separated months to keep, e.g. 1,2,3");
  cmd->add_option("--year", a.year, "keep threads of this year only");
  cmd->add_option("--threads", a.threads, "threads CSV (overrides config)");
  cmd->add_option("--users", a.users, "users CSV (overrides config)");
  cmd->add_option("--texts", a.texts, "texts CSV (overrides config)");
  cmd->add_option("--workers", a.workers, "worker threads, 0 = all cores");
}

int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::kInputError || e.code() == ErrorCode::kSpecError) return kExitInput;
  if (const auto* s = dynamic_cast<const StageError*>(&e); s && s->stage() == "ingest") return kExitInput;
  return kExitStage;
}

void report_error(bool json_errors, int exit_code, std::string_view kind, const std::string& stage,
                  const std::string& message) {
  if (json_errors) {
    nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", exit_code}};
    if (!stage.empty()) j["stage"] = stage;
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "hyperroles: " << message << '\n';
  }
}

void print_result(const RunResult& r, const fs::path& out) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : r.outputs) std::cout << (out / f).string() << '\n';
  std::cout << (out / "run_metadata.json").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph analytics of user archetypes in discussion threads"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "print errors as JSON on stderr");
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "omit the wall-clock timestamp from run_metadata.json");

  struct StageCommand {
    const char* name;
    const char* help;
    std::vector<Stage> stages;
  };
  const std::vector<StageCommand> stage_commands{
      {"ingest", "load threads and users, write hyperedges.csv and coverage.csv", {Stage::kIngest}},
      {"stats", "per-snapshot summary statistics", {Stage::kStats}},
      {"distributions", "hyperdegree and hyperedge-size distributions", {Stage::kDistributions}},
      {"archetypes", "archetype assignment, census and typicality", {Stage::kArchetypes}},
      {"profiles", "lexicon profiles of the most typical users", {Stage::kProfiles}},
      {"transitions", "monthly archetype transitions against a shuffle null model", {Stage::kTransitions}},
      {"centrality", "most central discussions by line-graph betweenness", {Stage::kCentrality}},
      {"characterize", "hyperedge characterization functions", {Stage::kCharacterize}},
      {"run", "every stage", all_stages()},
  };

  CommonArgs common;
  std::vector<std::pair<CLI::App*, const StageCommand*>> commands;
  for (const auto& sc : stage_commands) {
    auto* cmd = app.add_subcommand(sc.name, sc.help);
    add_common(cmd, common);
    commands.emplace_back(cmd, &sc);
  }

  // synth has its own knobs; --config names a synth spec JSON here.
  auto* synth = app.add_subcommand("synth", "write a synthetic fixture with planted archetype labels");
  std::string synth_config;
  std::string synth_out = "fixture";
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::size_t> n_users, n_months, per_month;
  std::optional<std::string> synth_community, plant;
  std::optional<double> boost;
  bool no_texts = false;
  synth->add_option("--config", synth_config, "synth spec (JSON)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();
  synth->add_option("--community", synth_community, "community tag");
  synth->add_option("--users-count", n_users, "number of users");
  synth->add_option("--months", n_months, "number of months");
  synth->add_option("--threads-per-month", per_month, "threads per month");
  synth->add_option("--plant", plant, "planted transition 'From Archetype->To Archetype'");
  synth->add_option("--boost", boost, "boost of the planted transition (default 0.3)");
  synth->add_flag("--no-texts", no_texts, "skip texts.csv and the lexicon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(json_errors, kExitInput, "UsageError", "", e.what());
    return kExitInput;
  }

  try {
    if (*synth) {
      SynthSpec spec;
      if (!synth_config.empty()) {
        std::ifstream in(synth_config, std::ios::binary);
        if (!in) throw Error(ErrorCode::kInputError, "cannot open " + synth_config);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::kInputError, synth_config + ": " + e.what());
        }
        spec = SynthSpec::from_json(j);
      }
      if (synth_seed) spec.seed = *synth_seed;
      if (synth_community) spec.community = *synth_community;
      if (n_users) spec.users = *n_users;
      if (n_months) spec.months = static_cast<int>(*n_months);
      if (per_month) spec.threads_per_month = *per_month;
      if (no_texts) spec.texts = false;
      if (plant) {
        const auto arrow = plant->find("->");
        if (arrow == std::string::npos) throw Error(ErrorCode::kSpecError, "--plant expects 'From->To'");
        spec.plant = PlantedTransition{plant->substr(0, arrow), plant->substr(arrow + 2), boost.value_or(0.3)};
      } else if (boost) {
        if (!spec.plant) throw Error(ErrorCode::kSpecError, "--boost needs --plant");
        spec.plant->boost = *boost;
      }
      const auto data = synthesize(spec);
      write_fixture(data, spec, synth_out);
      std::cout << (fs::path(synth_out) / "config.json").string() << '\n';
      return kExitOk;
    }

    for (const auto& [cmd, sc] : commands) {
      if (!*cmd) continue;
      const auto cfg = build_config(common);
      RunOptions opts;
      opts.timestamp = !no_timestamp;
      const auto result = run_pipeline(cfg, common.out, sc->stages, opts);
      print_result(result, common.out);
      return kExitOk;
    }
  } catch (const StageError& e) {
    const int code = exit_code_for(e);
    report_error(json_errors, code, to_string(e.code()), e.stage(), e.what());
    return code;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(json_errors, code, to_string(e.code()), "", e.what());
    return code;
  } catch (const std::exception& e) {
    report_error(json_errors, kExitStage, "StageFailure", "", e.what());
    return kExitStage;
  }
  return kExitOk;
}
