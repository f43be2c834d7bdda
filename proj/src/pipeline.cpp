#include "hyperroles/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include <openssl/evp.h>

#include "hyperroles/archetypes.hpp"
#include "hyperroles/characterization.hpp"
#include "hyperroles/csv.hpp"
#include "hyperroles/schemas.hpp"
#include "hyperroles/transitions.hpp"

namespace hyperroles {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kDefaultOmegas{
    "mean:toxicity", "std:sentiment", "gini:score", "entropy:archetype",
    "purity:archetype", "size", "interaction_potential"};

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kInputError, "config: " + what);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

std::string_view to_string(TextScoring s) {
  return s == TextScoring::kRawSum ? "raw_sum" : "per_token_mean";
}

std::string_view to_string(WordCountAverage w) { return w == WordCountAverage::kTexts ? "texts" : "users"; }

std::string format_t(int t) { return std::to_string(t); }

}  // namespace

PipelineConfig::PipelineConfig() : omegas(kDefaultOmegas) {}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  static const std::set<std::string> kKeys{
      "threads",   "users",      "texts",    "community",      "year",         "months",
      "min_edge_size", "catalog", "thresholds", "omegas",        "centrality",   "null_model",
      "lexicons",  "text_scoring", "top_k_typical", "column_map", "word_count_average",
      "threads_hint", "synth"};
  if (!j.is_object()) config_error("top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) config_error("unknown key '" + key + "'");
  }
  PipelineConfig c;
  try {
    if (j.contains("threads")) c.threads = resolve(base_dir, j["threads"].get<std::string>());
    if (j.contains("users")) c.users = resolve(base_dir, j["users"].get<std::string>());
    if (j.contains("texts") && !j["texts"].is_null()) c.texts = resolve(base_dir, j["texts"].get<std::string>());
    if (j.contains("community") && !j["community"].is_null()) c.community = j["community"].get<std::string>();
    if (j.contains("year") && !j["year"].is_null()) c.year = j["year"].get<int>();
    c.months = j.value("months", c.months);
    for (int m : c.months) {
      if (m < 1 || m > 12) config_error("months must be in 1..12");
    }
    c.min_edge_size = j.value("min_edge_size", c.min_edge_size);
    if (c.min_edge_size == 0) config_error("min_edge_size must be >= 1");
    if (j.contains("catalog") && !j["catalog"].is_null()) c.catalog = resolve(base_dir, j["catalog"].get<std::string>());
    if (j.contains("thresholds")) {
      for (const auto& [name, value] : j["thresholds"].items()) c.thresholds.emplace_back(name, value.get<double>());
    }
    c.omegas = j.value("omegas", c.omegas);
    if (j.contains("centrality")) {
      const auto& x = j["centrality"];
      c.centrality.k = x.value("k", c.centrality.k);
      c.centrality.s = x.value("s", c.centrality.s);
      c.centrality.max_incidence = x.value("max_incidence", c.centrality.max_incidence);
      c.centrality.pivots = x.value("pivots", c.centrality.pivots);
      if (c.centrality.k == 0 || c.centrality.s == 0) config_error("centrality k and s must be >= 1");
    }
    if (j.contains("null_model")) {
      const auto& x = j["null_model"];
      c.null_model.n_shuffles = x.value("n_shuffles", c.null_model.n_shuffles);
      c.null_model.seed = x.value("seed", c.null_model.seed);
      c.null_model.alpha = x.value("alpha", c.null_model.alpha);
      if (c.null_model.n_shuffles < 2) config_error("null_model.n_shuffles must be >= 2");
      if (!(c.null_model.alpha > 0.0 && c.null_model.alpha < 1.0)) config_error("null_model.alpha must be in (0, 1)");
    }
    if (j.contains("lexicons")) {
      for (const auto& x : j["lexicons"]) {
        c.lexicons.push_back({parse_lexicon_family(x.at("family").get<std::string>()),
                              resolve(base_dir, x.at("path").get<std::string>())});
      }
    }
    if (j.contains("text_scoring")) {
      const auto s = j["text_scoring"].get<std::string>();
      if (s == "raw_sum") c.text_scoring = TextScoring::kRawSum;
      else if (s == "per_token_mean") c.text_scoring = TextScoring::kPerTokenMean;
      else config_error("text_scoring must be raw_sum or per_token_mean");
    }
    c.top_k_typical = j.value("top_k_typical", c.top_k_typical);
    if (c.top_k_typical == 0) config_error("top_k_typical must be >= 1");
    if (j.contains("column_map")) {
      for (const auto& [name, value] : j["column_map"].items()) c.columns.renames[name] = value.get<std::string>();
    }
    if (j.contains("word_count_average")) {
      const auto s = j["word_count_average"].get<std::string>();
      if (s == "texts") c.word_count_average = WordCountAverage::kTexts;
      else if (s == "users") c.word_count_average = WordCountAverage::kUsers;
      else config_error("word_count_average must be texts or users");
    }
    c.threads_hint = j.value("threads_hint", c.threads_hint);
  } catch (const json::exception& e) {
    config_error(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInputError) throw;
    config_error(e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInputError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json PipelineConfig::to_json() const {
  json j{{"threads", threads.generic_string()},
         {"users", users.generic_string()},
         {"texts", texts ? json(texts->generic_string()) : json()},
         {"community", community ? json(*community) : json()},
         {"year", year ? json(*year) : json()},
         {"months", months},
         {"min_edge_size", min_edge_size},
         {"catalog", catalog ? json(catalog->generic_string()) : json()},
         {"omegas", omegas},
         {"centrality",
          {{"k", centrality.k}, {"s", centrality.s}, {"max_incidence", centrality.max_incidence},
           {"pivots", centrality.pivots}}},
         {"null_model",
          {{"n_shuffles", null_model.n_shuffles}, {"seed", null_model.seed}, {"alpha", null_model.alpha}}},
         {"text_scoring", to_string(text_scoring)},
         {"top_k_typical", top_k_typical},
         {"word_count_average", to_string(word_count_average)},
         {"threads_hint", threads_hint}};
  json th = json::object();
  for (const auto& [name, value] : thresholds) th[name] = value;
  j["thresholds"] = th;
  json lex = json::array();
  for (const auto& l : lexicons) lex.push_back({{"family", to_string(l.family)}, {"path", l.path.generic_string()}});
  j["lexicons"] = lex;
  json cm = json::object();
  for (const auto& [k, v] : columns.renames) cm[k] = v;
  j["column_map"] = cm;
  return j;
}

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::kIngest: return "ingest";
    case Stage::kStats: return "stats";
    case Stage::kDistributions: return "distributions";
    case Stage::kArchetypes: return "archetypes";
    case Stage::kProfiles: return "profiles";
    case Stage::kTransitions: return "transitions";
    case Stage::kCentrality: return "centrality";
    case Stage::kCharacterize: return "characterize";
  }
  return "unknown";
}

std::vector<Stage> all_stages() {
  return {Stage::kIngest,   Stage::kStats,       Stage::kDistributions, Stage::kArchetypes,
          Stage::kProfiles, Stage::kTransitions, Stage::kCentrality,    Stage::kCharacterize};
}

std::string content_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInputError, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!md || EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kStageFailure, "sha256 unavailable");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(md.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(md.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

namespace {

struct Context {
  Context(const PipelineConfig& c, fs::path o, RunResult& r) : cfg(c), out(std::move(o)), result(r) {}

  const PipelineConfig& cfg;
  fs::path out;
  RunResult& result;

  NodeInterner interner;
  ThreadData threads;
  std::optional<UserTable> users;
  std::vector<TextRecord> texts;

  ArchetypeCatalog catalog;
  ThresholdVector tv;
  std::vector<NodeId> analysed;  // in threads and profiled, ascending
  std::vector<FeatureVector> yearly;
  std::unordered_map<NodeId, std::size_t> yearly_archetype;
  std::map<std::pair<NodeId, int>, std::size_t> monthly_archetype;
  bool archetypes_ready = false;

  void write(const csv::Table& table) {
    table.write(out / table.schema().name);
    result.outputs.push_back(table.schema().name);
  }
  void warn(std::string w) { result.warnings.push_back(std::move(w)); }
  const std::string& name(NodeId v) const { return interner.name(v); }
};

ThreadFilter make_filter(const PipelineConfig& cfg) {
  ThreadFilter f;
  f.community = cfg.community;
  f.year = cfg.year;
  f.months = cfg.months;
  f.min_edge_size = cfg.min_edge_size;
  return f;
}

void stage_ingest(Context& ctx) {
  const auto filter = make_filter(ctx.cfg);
  if (ctx.cfg.threads.empty()) throw Error(ErrorCode::kInputError, "no threads file configured");
  if (ctx.cfg.users.empty()) throw Error(ErrorCode::kInputError, "no users file configured");
  ctx.threads = load_threads(ctx.cfg.threads, ctx.interner, filter, ctx.cfg.columns);
  for (const auto& w : ctx.threads.warnings) ctx.warn(w);
  ctx.users = load_users(ctx.cfg.users, ctx.interner, ctx.threads.base_year, filter, ctx.cfg.columns);
  if (ctx.cfg.texts) ctx.texts = load_texts(*ctx.cfg.texts, ctx.cfg.columns);

  csv::Table edges(schemas::kHyperedges);
  for (const auto& snap : ctx.threads.series.snapshots()) {
    for (const auto& e : snap.graph.edges()) {
      std::string members;
      for (NodeId v : e.members) {
        if (!members.empty()) members.push_back(';');
        members += ctx.name(v);
      }
      edges.add_row({format_t(snap.t), e.meta.thread_id, e.meta.community, std::to_string(e.meta.year),
                     std::to_string(e.meta.month), std::to_string(e.size()), members});
    }
  }
  ctx.write(edges);

  csv::Table cov(schemas::kCoverage);
  json cov_meta{{"users_in_threads", 0}, {"users_with_profiles", 0}, {"missing_profiles", 0}};
  if (const auto& agg = ctx.threads.series.aggregate()) {
    const auto report = coverage(*agg, *ctx.users);
    std::set<NodeId> missing(report.missing_profiles.begin(), report.missing_profiles.end());
    for (NodeId v : agg->nodes()) {
      cov.add_row({ctx.name(v), missing.contains(v) ? "missing_profile" : "profiled"});
      if (!missing.contains(v)) ctx.analysed.push_back(v);
    }
    cov_meta = {{"users_in_threads", report.users_in_threads},
                {"users_with_profiles", report.users_with_profiles},
                {"missing_profiles", report.missing_profiles.size()}};
    if (!missing.empty()) {
      ctx.warn(std::to_string(missing.size()) + " users appear in threads without a profile and are excluded "
               "from archetype analyses");
    }
  }
  ctx.write(cov);
  ctx.result.metadata["coverage"] = cov_meta;
  ctx.result.metadata["ingest"] = {{"rows", ctx.threads.rows},
                                   {"kept", ctx.threads.kept},
                                   {"dropped_by_filter", ctx.threads.dropped_by_filter},
                                   {"dropped_small", ctx.threads.dropped_small},
                                   {"base_year", ctx.threads.base_year},
                                   {"snapshots", ctx.threads.series.snapshots().size()},
                                   {"texts", ctx.texts.size()}};
}

void stage_stats(Context& ctx) {
  csv::Table table(schemas::kStats);
  const auto snaps = ctx.threads.series.snapshots();
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto s = summary_stats(snaps[i].graph);
    std::string jac;
    if (i + 1 < snaps.size() && snaps[i + 1].t == snaps[i].t + 1) {
      jac = csv::format_double(jaccard_overlap(snaps[i].graph.nodes(), snaps[i + 1].graph.nodes()));
    }
    table.add_row({format_t(snaps[i].t), std::to_string(snaps[i].year), std::to_string(snaps[i].month),
                   std::to_string(s.n), std::to_string(s.m), std::to_string(s.max_edge_size),
                   csv::format_double(s.mean_hyperdegree), csv::format_double(s.mean_degree), jac});
  }
  if (const auto& agg = ctx.threads.series.aggregate()) {
    const auto s = summary_stats(*agg);
    table.add_row({"all", "", "", std::to_string(s.n), std::to_string(s.m), std::to_string(s.max_edge_size),
                   csv::format_double(s.mean_hyperdegree), csv::format_double(s.mean_degree), ""});
  }
  ctx.write(table);
}

void stage_distributions(Context& ctx) {
  csv::Table table(schemas::kDistributions);
  const auto emit = [&](const std::string& t, const Hypergraph& h) {
    const auto d = distributions(h);
    for (const auto& [value, count] : d.hyperdegree) {
      table.add_row({t, "hyperdegree", std::to_string(value), std::to_string(count)});
    }
    for (const auto& [value, count] : d.edge_size) {
      table.add_row({t, "edge_size", std::to_string(value), std::to_string(count)});
    }
  };
  for (const auto& snap : ctx.threads.series.snapshots()) emit(format_t(snap.t), snap.graph);
  if (const auto& agg = ctx.threads.series.aggregate()) emit("all", *agg);
  ctx.write(table);
}

void stage_archetypes(Context& ctx) {
  ctx.catalog = ctx.cfg.catalog ? ArchetypeCatalog::load(*ctx.cfg.catalog) : ArchetypeCatalog::standard();
  ctx.tv.features = ctx.catalog.features();
  ctx.tv.thresholds.assign(ctx.tv.features.size(), 0.5);
  for (const auto& [name, value] : ctx.cfg.thresholds) {
    const auto it = std::find(ctx.tv.features.begin(), ctx.tv.features.end(), name);
    if (it == ctx.tv.features.end()) {
      throw Error(ErrorCode::kInputError, "threshold for '" + name + "', which no archetype uses");
    }
    ctx.tv.thresholds[static_cast<std::size_t>(it - ctx.tv.features.begin())] = value;
  }
  const auto& schema = ctx.users->schema;
  for (const auto& f : ctx.catalog.features()) {
    if (!schema.index_of(f)) throw Error(ErrorCode::kMissingFeature, "users have no feature '" + f + "'");
  }

  const std::set<NodeId> analysed(ctx.analysed.begin(), ctx.analysed.end());
  std::size_t unmatched = 0;
  csv::Table assignments(schemas::kAssignments);
  std::vector<std::size_t> yearly_labels;
  for (auto& fv : ctx.users->yearly()) {
    if (!analysed.contains(fv.user)) continue;
    try {
      const auto a = assign(schema, fv, ctx.catalog, ctx.tv);
      ctx.yearly_archetype[fv.user] = a;
      yearly_labels.push_back(a);
      assignments.add_row({ctx.name(fv.user), "all", ctx.catalog[a].name,
                           csv::format_double(typicality(schema, fv, ctx.catalog[a]))});
      ctx.yearly.push_back(std::move(fv));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoMatchingArchetype) throw;
      ++unmatched;
    }
  }
  for (const auto& fv : ctx.users->monthly) {
    if (!analysed.contains(fv.user)) continue;
    try {
      const auto a = assign(schema, fv, ctx.catalog, ctx.tv);
      ctx.monthly_archetype[{fv.user, fv.t}] = a;
      assignments.add_row({ctx.name(fv.user), format_t(fv.t), ctx.catalog[a].name,
                           csv::format_double(typicality(schema, fv, ctx.catalog[a]))});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoMatchingArchetype) throw;
      ++unmatched;
    }
  }
  if (unmatched) ctx.warn(std::to_string(unmatched) + " profile rows match no archetype of the catalog");

  const auto counts = archetype_census(yearly_labels, ctx.catalog.size());
  csv::Table census(schemas::kCensus);
  for (std::size_t i = 0; i < ctx.catalog.size(); ++i) {
    census.add_row({ctx.catalog[i].name, to_string(ctx.catalog[i].labels), std::to_string(counts[i])});
  }
  ctx.write(census);
  ctx.write(assignments);
  ctx.archetypes_ready = true;
  ctx.result.metadata["archetypes"] = {{"catalog", ctx.catalog.to_json()},
                                       {"thresholds", ctx.tv.thresholds},
                                       {"assigned_users", yearly_labels.size()},
                                       {"unmatched_rows", unmatched}};
}

void stage_profiles(Context& ctx) {
  csv::Table table(schemas::kProfiles);
  if (ctx.cfg.lexicons.empty() || ctx.texts.empty()) {
    ctx.warn("profiles: no lexicon or no texts configured; profiles.csv is empty");
    ctx.write(table);
    return;
  }
  std::unordered_map<std::string, std::vector<std::string>> by_user;
  for (const auto& t : ctx.texts) by_user[t.user_id].push_back(t.text);

  std::vector<SubjectTexts> population;
  for (NodeId v : ctx.analysed) {
    const auto it = by_user.find(ctx.name(v));
    if (it != by_user.end()) population.push_back({it->first, it->second});
  }
  if (population.empty()) {
    ctx.warn("profiles: none of the analysed users has texts; profiles.csv is empty");
    ctx.write(table);
    return;
  }

  // Members of each archetype (yearly assignment), ranked by typicality.
  std::vector<std::vector<FeatureVector>> members(ctx.catalog.size());
  for (const auto& fv : ctx.yearly) members[ctx.yearly_archetype.at(fv.user)].push_back(fv);
  json typical = json::object();

  for (const auto& source : ctx.cfg.lexicons) {
    const auto lex = Lexicon::load_tsv(source.path, source.family);
    const auto profiles = population_profiles(population, lex, ctx.cfg.text_scoring);
    std::unordered_map<std::string, const Profile*> by_subject;
    for (const auto& p : profiles) by_subject[p.subject] = &p;

    for (std::size_t a = 0; a < ctx.catalog.size(); ++a) {
      if (members[a].empty()) continue;
      const auto ranking = top_k_typical(ctx.users->schema, members[a], ctx.catalog[a], ctx.cfg.top_k_typical);
      std::vector<Profile> chosen;
      json ids = json::array();
      for (const auto& s : ranking.ranked) {
        ids.push_back(ctx.name(s.user));
        const auto it = by_subject.find(ctx.name(s.user));
        if (it != by_subject.end()) chosen.push_back(*it->second);
      }
      typical[ctx.catalog[a].name] = ids;
      if (chosen.empty()) {
        ctx.warn("profiles: no texts for the typical users of '" + ctx.catalog[a].name + "'");
        continue;
      }
      const auto mean = mean_profile(ctx.catalog[a].name, chosen);
      for (std::size_t d = 0; d < mean.dimensions.size(); ++d) {
        table.add_row({mean.subject, std::string(to_string(source.family)), mean.dimensions[d],
                       csv::format_double(mean.values[d])});
      }
    }
  }
  ctx.write(table);
  ctx.result.metadata["typical_users"] = typical;
}

void stage_transitions(Context& ctx) {
  std::map<NodeId, ArchetypeSequence> seqs;
  for (const auto& [key, a] : ctx.monthly_archetype) {
    auto& s = seqs[key.first];
    s.user = key.first;
    s.steps.push_back({key.second, a});
  }
  std::vector<ArchetypeSequence> list;
  for (auto& [_, s] : seqs) list.push_back(std::move(s));

  NullModelOptions opts;
  opts.n_shuffles = ctx.cfg.null_model.n_shuffles;
  opts.seed = ctx.cfg.null_model.seed;
  opts.threads = ctx.cfg.threads_hint;
  const auto report = analyze_transitions(list, ctx.catalog.size(), opts, ctx.cfg.null_model.alpha);

  csv::Table table(schemas::kTransitions);
  for (const auto& c : report.cells) {
    const auto num = [&](double x, bool present) { return present ? csv::format_double(x) : std::string(); };
    const bool row = !std::isnan(c.observed);
    table.add_row({ctx.catalog[c.from].name, ctx.catalog[c.to].name, num(c.observed, row),
                   num(c.null_mean, row && !std::isnan(c.null_mean)),
                   num(c.null_std, row && !std::isnan(c.null_std)), num(c.z, c.testable),
                   num(c.p_normal, c.testable), num(c.p_empirical, row && !std::isnan(c.p_empirical)),
                   c.significant ? "true" : "false"});
  }
  ctx.write(table);
  auto meta = report.metadata();
  meta["users"] = list.size();
  ctx.result.metadata["transitions"] = meta;
}

void stage_centrality(Context& ctx) {
  std::unordered_map<std::string, std::vector<DiscussionText>> texts_by_thread;
  for (const auto& t : ctx.texts) {
    if (const auto id = ctx.interner.find(t.user_id)) {
      texts_by_thread[t.thread_id].push_back({*id, t.text, t.subjectivity});
    }
  }
  BetweennessOptions bopts;
  bopts.threads = ctx.cfg.threads_hint;
  bopts.pivots = ctx.cfg.centrality.pivots;
  bopts.seed = ctx.cfg.null_model.seed;
  LineGraphOptions lopts{ctx.cfg.centrality.s, ctx.cfg.centrality.max_incidence};

  csv::Table table(schemas::kCentralDiscussions);
  std::size_t empty = 0;
  for (const auto& snap : ctx.threads.series.snapshots()) {
    const auto lg = build_line_graph(snap.graph, lopts);
    const auto bc = hyperedge_betweenness(lg, bopts);
    const auto top = rank_top_k(bc, ctx.cfg.centrality.k);
    const int t = snap.t;
    const ArchetypeLookup lookup = [&](NodeId v) -> std::optional<std::size_t> {
      const auto it = ctx.monthly_archetype.find({v, t});
      if (it == ctx.monthly_archetype.end()) return std::nullopt;
      return it->second;
    };
    for (const auto& r : top) {
      const auto& e = snap.graph.edge(r.edge);
      const auto it = texts_by_thread.find(e.meta.thread_id);
      const std::span<const DiscussionText> texts =
          it == texts_by_thread.end() ? std::span<const DiscussionText>{} : it->second;
      const auto rec = characterize_discussion(e, texts, lookup, ctx.cfg.word_count_average);
      if (rec.empty) ++empty;
      table.add_row({e.meta.thread_id, csv::format_double(r.betweenness), std::to_string(r.rank),
                     csv::format_optional(rec.avg_word_count), csv::format_optional(rec.avg_unique_word_count),
                     csv::format_optional(rec.avg_subjectivity), csv::format_optional(rec.archetype_purity),
                     std::to_string(snap.month)});
    }
  }
  ctx.write(table);
  if (empty) ctx.warn(std::to_string(empty) + " central discussions have no texts");
}

void stage_characterize(Context& ctx) {
  csv::Table table(schemas::kOmegas);
  const auto& agg = ctx.threads.series.aggregate();
  if (!agg) {
    ctx.write(table);
    return;
  }
  std::vector<OmegaSpec> specs;
  for (const auto& s : ctx.cfg.omegas) specs.push_back(parse_omega_spec(s));

  NodeAttributes attrs;
  const auto bound = agg->node_bound();
  const auto& schema = ctx.users->schema;
  for (std::size_t f = 0; f < schema.size(); ++f) {
    std::vector<double> col(bound, std::numeric_limits<double>::quiet_NaN());
    for (const auto& fv : ctx.yearly) {
      if (to_index(fv.user) < bound) col[to_index(fv.user)] = fv.values[f];
    }
    attrs.set_numeric(schema[f].name, std::move(col));
  }
  std::vector<std::int64_t> codes(bound, -1);
  for (const auto& [v, a] : ctx.yearly_archetype) {
    if (to_index(v) < bound) codes[to_index(v)] = static_cast<std::int64_t>(a);
  }
  attrs.set_categorical("archetype", std::move(codes));

  const auto rows = evaluate_omegas(*agg, specs, attrs);
  std::size_t undefined = 0;
  for (const auto& r : rows) {
    if (!r.value) ++undefined;
    table.add_row({agg->edge(r.edge).meta.thread_id, ctx.cfg.omegas[r.spec_index], csv::format_optional(r.value)});
  }
  ctx.write(table);
  if (undefined) ctx.warn(std::to_string(undefined) + " omega values are undefined and left empty");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, const fs::path& out_dir, std::span<const Stage> stages,
                       const RunOptions& options) {
  std::set<Stage> wanted(stages.begin(), stages.end());
  // Dependencies: everything needs ingest; archetype labels feed the rest.
  wanted.insert(Stage::kIngest);
  for (Stage s : {Stage::kProfiles, Stage::kTransitions, Stage::kCentrality, Stage::kCharacterize}) {
    if (wanted.contains(s)) wanted.insert(Stage::kArchetypes);
  }

  RunResult result;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw StageError("output", ErrorCode::kStageFailure, "cannot create " + out_dir.string());

  Context ctx(config, out_dir, result);
  result.metadata["tool"] = "hyperroles";
  result.metadata["config"] = config.to_json();
  result.metadata["seed"] = config.null_model.seed;
  result.metadata["rng"] = kRngAlgorithm;
  json inputs = json::object();
  const auto hash_input = [&](const char* key, const fs::path& p) {
    if (p.empty()) return;
    try {
      inputs[key] = {{"path", p.generic_string()}, {"sha256", content_hash(p)}};
    } catch (const Error& e) {
      throw StageError("ingest", ErrorCode::kInputError, e.what());
    }
  };
  hash_input("threads", config.threads);
  hash_input("users", config.users);
  if (config.texts) hash_input("texts", *config.texts);
  if (config.catalog) hash_input("catalog", *config.catalog);
  for (std::size_t i = 0; i < config.lexicons.size(); ++i) {
    hash_input(("lexicon_" + std::to_string(i)).c_str(), config.lexicons[i].path);
  }
  result.metadata["inputs"] = inputs;

  json ran = json::array();
  for (Stage stage : all_stages()) {
    if (!wanted.contains(stage)) continue;
    try {
      switch (stage) {
        case Stage::kIngest: stage_ingest(ctx); break;
        case Stage::kStats: stage_stats(ctx); break;
        case Stage::kDistributions: stage_distributions(ctx); break;
        case Stage::kArchetypes: stage_archetypes(ctx); break;
        case Stage::kProfiles: stage_profiles(ctx); break;
        case Stage::kTransitions: stage_transitions(ctx); break;
        case Stage::kCentrality: stage_centrality(ctx); break;
        case Stage::kCharacterize: stage_characterize(ctx); break;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(std::string(to_string(stage)), e.code(), e.what());
    } catch (const std::exception& e) {
      throw StageError(std::string(to_string(stage)), ErrorCode::kStageFailure, e.what());
    }
    ran.push_back(to_string(stage));
  }
  result.metadata["stages"] = ran;
  result.metadata["outputs"] = result.outputs;
  result.metadata["warnings"] = result.warnings;
  if (options.timestamp) result.metadata["timestamp"] = utc_timestamp();

  std::ofstream meta(out_dir / "run_metadata.json", std::ios::binary);
  if (!meta) throw StageError("output", ErrorCode::kStageFailure, "cannot write run_metadata.json");
  meta << result.metadata.dump(2) << '\n';
  return result;
}

}  // namespace hyperroles
