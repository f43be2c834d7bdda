#include "hyperroles/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "hyperroles/archetypes.hpp"
#include "hyperroles/csv.hpp"
#include "hyperroles/error.hpp"
#include "hyperroles/random.hpp"

namespace hyperroles {
namespace {

// RNG stream indices; each concern draws from its own stream so that, e.g.,
// turning texts off leaves threads and labels unchanged.
constexpr std::uint64_t kLabelStream = 0;
constexpr std::uint64_t kValueStream = 1;
constexpr std::uint64_t kThreadStream = 2;
constexpr std::uint64_t kTextStream = 3;
constexpr std::uint64_t kLexiconStream = 4;

constexpr double kLowBand = 0.45;   // L -> [0, 0.45]
constexpr double kHighBase = 0.55;  // H -> [0.55, 1]

constexpr const char* kEmotions[] = {"anger", "anticipation", "disgust", "fear",
                                     "joy",   "sadness",      "surprise", "trust"};

constexpr const char* kVocabulary[] = {
    "vote",  "truth", "media",  "freedom", "liberty", "fraud",  "hope",   "shame",
    "fight", "win",   "lose",   "proud",   "afraid",  "angry",  "happy",  "trust",
    "the",   "and",   "people", "thread",  "post",    "really", "think",  "today",
    "never", "always", "maybe", "country", "news",    "story",  "friend", "enemy"};
constexpr std::size_t kLexiconTerms = 16;  // the first words carry emotion scores

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorCode::kSpecError, what); }

struct Calendar {
  int year;
  int month;
};

Calendar calendar_of(const SynthSpec& spec, int m) { return {spec.year + m / 12, m % 12 + 1}; }

std::vector<double> normalized_mixture(const SynthSpec& spec, std::size_t k) {
  if (spec.mixture.empty()) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  const double total = std::accumulate(spec.mixture.begin(), spec.mixture.end(), 0.0);
  std::vector<double> out;
  for (double w : spec.mixture) out.push_back(w / total);
  return out;
}

std::size_t sample(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Rounding left a sliver above the cumulative sum: last non-zero entry.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return 0;
}

struct Plan {
  ArchetypeCatalog catalog = ArchetypeCatalog::standard();
  std::vector<double> mixture;
  std::optional<std::size_t> from;
  std::vector<double> planted_row;
};

Plan make_plan(const SynthSpec& spec) {
  validate(spec);
  Plan plan;
  plan.mixture = normalized_mixture(spec, plan.catalog.size());
  if (spec.plant) {
    const auto from = *plan.catalog.index_of(spec.plant->from);
    const auto to = *plan.catalog.index_of(spec.plant->to);
    const double target = plan.mixture[to] + spec.plant->boost;
    const double rest = 1.0 - plan.mixture[to];
    plan.planted_row.resize(plan.mixture.size());
    for (std::size_t j = 0; j < plan.mixture.size(); ++j) {
      plan.planted_row[j] = j == to ? target : (rest > 0.0 ? plan.mixture[j] * (1.0 - target) / rest : 0.0);
    }
    plan.from = from;
  }
  return plan;
}

// active[u][m] plus the label of each active month.
struct LabelGrid {
  std::vector<std::vector<std::int16_t>> label;  // -1: no profile that month
};

LabelGrid draw_labels(const SynthSpec& spec, const Plan& plan) {
  Rng rng = make_stream(spec.seed, kLabelStream);
  LabelGrid grid;
  grid.label.assign(spec.users, std::vector<std::int16_t>(static_cast<std::size_t>(spec.months), -1));
  for (std::size_t u = 0; u < spec.users; ++u) {
    std::int16_t prev = -1;
    for (int m = 0; m < spec.months; ++m) {
      const bool active = spec.activity >= 1.0 || uniform01(rng) < spec.activity;
      if (!active) {
        prev = -1;
        continue;
      }
      const bool planted = plan.from && prev >= 0 && static_cast<std::size_t>(prev) == *plan.from;
      const auto a = sample(planted ? std::span<const double>(plan.planted_row) : plan.mixture, rng);
      grid.label[u][static_cast<std::size_t>(m)] = static_cast<std::int16_t>(a);
      prev = static_cast<std::int16_t>(a);
    }
  }
  return grid;
}

std::vector<ArchetypeSequence> to_sequences(const SynthSpec& spec, const LabelGrid& grid) {
  std::vector<ArchetypeSequence> out;
  out.reserve(spec.users);
  for (std::size_t u = 0; u < spec.users; ++u) {
    ArchetypeSequence seq{static_cast<NodeId>(u), {}};
    for (int m = 0; m < spec.months; ++m) {
      const auto a = grid.label[u][static_cast<std::size_t>(m)];
      if (a < 0) continue;
      const auto cal = calendar_of(spec, m);
      seq.steps.push_back({timestamp_of(cal.year, cal.month, spec.year), static_cast<std::size_t>(a)});
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::string user_name(std::size_t u) { return "u" + std::to_string(u); }

}  // namespace

void validate(const SynthSpec& spec) {
  const auto catalog = ArchetypeCatalog::standard();
  if (spec.users == 0) spec_error("users must be positive");
  if (spec.months < 1 || spec.months > 1200) spec_error("months must be in 1..1200");
  if (spec.year < 1 || spec.year > 9000) spec_error("year out of range");
  if (spec.size_min < 1 || spec.size_min > spec.size_max) spec_error("need 1 <= size_min <= size_max");
  if (spec.size_max > spec.users) spec_error("size_max exceeds the number of users");
  if (!(spec.pair_fraction >= 0.0 && spec.pair_fraction <= 1.0)) spec_error("pair_fraction must be in [0, 1]");
  if (!(spec.activity > 0.0 && spec.activity <= 1.0)) spec_error("activity must be in (0, 1]");
  if (!spec.mixture.empty()) {
    if (spec.mixture.size() != catalog.size()) {
      spec_error("mixture needs " + std::to_string(catalog.size()) + " weights");
    }
    double total = 0.0;
    for (double w : spec.mixture) {
      if (!std::isfinite(w) || w < 0.0) spec_error("mixture weights must be finite and non-negative");
      total += w;
    }
    if (!(total > 0.0)) spec_error("mixture weights sum to zero");
  }
  if (spec.plant) {
    const auto from = catalog.index_of(spec.plant->from);
    const auto to = catalog.index_of(spec.plant->to);
    if (!from) spec_error("unknown archetype '" + spec.plant->from + "'");
    if (!to) spec_error("unknown archetype '" + spec.plant->to + "'");
    if (!std::isfinite(spec.plant->boost)) spec_error("boost must be finite");
    const double base = normalized_mixture(spec, catalog.size())[*to];
    const double target = base + spec.plant->boost;
    if (target < 0.0 || target > 1.0) {
      spec_error("planted probability " + std::to_string(target) + " is outside [0, 1]");
    }
    if (spec.months < 2) spec_error("a planted transition needs at least two months");
  }
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys{"users",    "months",     "year",          "community",
                                           "mixture",  "threads_per_month", "size_min", "size_max",
                                           "pair_fraction", "activity", "plant",        "seed",
                                           "texts"};
  if (!j.is_object()) spec_error("synth spec must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) spec_error("unknown synth spec key '" + key + "'");
  }
  SynthSpec s;
  try {
    s.users = j.value("users", s.users);
    s.months = j.value("months", s.months);
    s.year = j.value("year", s.year);
    s.community = j.value("community", s.community);
    s.mixture = j.value("mixture", s.mixture);
    s.threads_per_month = j.value("threads_per_month", s.threads_per_month);
    s.size_min = j.value("size_min", s.size_min);
    s.size_max = j.value("size_max", s.size_max);
    s.pair_fraction = j.value("pair_fraction", s.pair_fraction);
    s.activity = j.value("activity", s.activity);
    s.seed = j.value("seed", s.seed);
    s.texts = j.value("texts", s.texts);
    if (j.contains("plant") && !j["plant"].is_null()) {
      const auto& p = j["plant"];
      s.plant = PlantedTransition{p.at("from").get<std::string>(), p.at("to").get<std::string>(),
                                  p.value("boost", 0.3)};
    }
  } catch (const nlohmann::json::exception& e) {
    spec_error(std::string("bad synth spec: ") + e.what());
  }
  validate(s);
  return s;
}

nlohmann::json SynthSpec::to_json() const {
  nlohmann::json j{{"users", users},
                   {"months", months},
                   {"year", year},
                   {"community", community},
                   {"mixture", mixture},
                   {"threads_per_month", threads_per_month},
                   {"size_min", size_min},
                   {"size_max", size_max},
                   {"pair_fraction", pair_fraction},
                   {"activity", activity},
                   {"seed", seed},
                   {"texts", texts}};
  if (plant) j["plant"] = {{"from", plant->from}, {"to", plant->to}, {"boost", plant->boost}};
  return j;
}

std::vector<ArchetypeSequence> synth_sequences(const SynthSpec& spec) {
  const auto plan = make_plan(spec);
  return to_sequences(spec, draw_labels(spec, plan));
}

SynthData synthesize(const SynthSpec& spec) {
  const auto plan = make_plan(spec);
  const auto grid = draw_labels(spec, plan);
  SynthData data;
  data.truth = to_sequences(spec, grid);

  // Profiles: band-limited normalized values, then pinned extremes so global
  // min-max scaling maps raw values back onto the same [0, 1] positions.
  const std::size_t width = plan.catalog.features().size();
  struct Row {
    std::size_t user;
    int m;
    std::size_t archetype;
    std::vector<double> v;
  };
  std::vector<Row> rows;
  Rng vrng = make_stream(spec.seed, kValueStream);
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (int m = 0; m < spec.months; ++m) {
      const auto a = grid.label[u][static_cast<std::size_t>(m)];
      if (a < 0) continue;
      Row row{u, m, static_cast<std::size_t>(a), {}};
      for (std::size_t f = 0; f < width; ++f) {
        const double x = uniform01(vrng);
        row.v.push_back(plan.catalog[row.archetype].labels[f] == Label::kHigh ? kHighBase + (1.0 - kHighBase) * x
                                                                              : kLowBand * x);
      }
      rows.push_back(std::move(row));
    }
  }
  for (std::size_t f = 0; f < width; ++f) {
    bool low_done = false;
    bool high_done = false;
    for (auto& row : rows) {
      const bool high = plan.catalog[row.archetype].labels[f] == Label::kHigh;
      if (high && !high_done) {
        row.v[f] = 1.0;
        high_done = true;
      } else if (!high && !low_done) {
        row.v[f] = 0.0;
        low_done = true;
      }
      if (low_done && high_done) break;
    }
  }
  for (const auto& row : rows) {
    const auto cal = calendar_of(spec, row.m);
    // Raw scales: score in [-100, 300], sentiment in [-1, 1], toxicity in [0, 1].
    data.users.push_back({user_name(row.user), cal.year, cal.month,
                          {400.0 * row.v[0] - 100.0, 2.0 * row.v[1] - 1.0, row.v[2]}, std::nullopt});
  }

  // Threads among the users with a profile that month.
  Rng trng = make_stream(spec.seed, kThreadStream);
  for (int m = 0; m < spec.months; ++m) {
    std::vector<std::size_t> pool;
    for (std::size_t u = 0; u < spec.users; ++u) {
      if (grid.label[u][static_cast<std::size_t>(m)] >= 0) pool.push_back(u);
    }
    if (pool.empty()) continue;
    const auto cal = calendar_of(spec, m);
    for (std::size_t i = 0; i < spec.threads_per_month; ++i) {
      std::size_t size = uniform01(trng) < spec.pair_fraction
                             ? 2
                             : spec.size_min + bounded(trng, spec.size_max - spec.size_min + 1);
      size = std::min(size, pool.size());
      // Partial Fisher-Yates over the persistent pool; it stays a permutation.
      for (std::size_t s = 0; s < size; ++s) {
        const auto j = s + bounded(trng, pool.size() - s);
        std::swap(pool[s], pool[j]);
      }
      ThreadRecord t;
      t.thread_id = "m" + std::to_string(m + 1) + "-" + std::to_string(i);
      t.community = spec.community;
      t.year = cal.year;
      t.month = cal.month;
      std::vector<std::size_t> members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
      std::sort(members.begin(), members.end());
      for (auto u : members) t.members.push_back(user_name(u));
      data.threads.push_back(std::move(t));
    }
  }

  if (spec.texts) {
    Rng xrng = make_stream(spec.seed, kTextStream);
    constexpr std::size_t kVocab = std::size(kVocabulary);
    for (const auto& t : data.threads) {
      for (const auto& member : t.members) {
        const auto words = 3 + bounded(xrng, 10);
        std::string text;
        for (std::size_t w = 0; w < words; ++w) {
          if (w) text.push_back(' ');
          text += kVocabulary[bounded(xrng, kVocab)];
        }
        const double subjectivity = static_cast<double>(bounded(xrng, 101)) / 100.0;
        data.texts.push_back({t.thread_id, member, std::move(text), subjectivity});
      }
    }
    Rng lrng = make_stream(spec.seed, kLexiconStream);
    std::string tsv = "term";
    for (const char* e : kEmotions) tsv += std::string("\t") + e;
    tsv += '\n';
    for (std::size_t w = 0; w < kLexiconTerms; ++w) {
      tsv += kVocabulary[w];
      for (std::size_t d = 0; d < std::size(kEmotions); ++d) tsv += bounded(lrng, 3) == 0 ? "\t1" : "\t0";
      tsv += '\n';
    }
    data.emotion_lexicon_tsv = std::move(tsv);
  }
  return data;
}

void write_fixture(const SynthData& data, const SynthSpec& spec, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kStageFailure, "cannot create " + dir.string() + ": " + ec.message());
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::kStageFailure, "cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("threads.csv");
    write_threads(out, data.threads);
  }
  {
    auto out = open("users.csv");
    write_users(out, data.users, UserColumns{});
  }
  nlohmann::json config{{"threads", "threads.csv"},
                        {"users", "users.csv"},
                        {"community", spec.community},
                        {"null_model", {{"seed", spec.seed}}},
                        {"synth", spec.to_json()}};
  if (spec.texts) {
    auto out = open("texts.csv");
    write_texts(out, data.texts);
    auto lex = open("emotion.tsv");
    lex << data.emotion_lexicon_tsv;
    config["texts"] = "texts.csv";
    config["lexicons"] = nlohmann::json::array({{{"family", "emotion"}, {"path", "emotion.tsv"}}});
  }
  auto out = open("config.json");
  out << config.dump(2) << '\n';
}

}  // namespace hyperroles
