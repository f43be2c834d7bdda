#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperroles/ingest.hpp"
#include "hyperroles/transitions.hpp"

namespace hyperroles {

// Planted Markov structure: P(to | from) = mixture[to] + boost, with the
// remaining mass rescaled over the other archetypes.
struct PlantedTransition {
  std::string from;
  std::string to;
  double boost = 0.3;
};

/// Synthetic fixture over the standard score/sentiment/toxicity catalog.
struct SynthSpec {
  std::size_t users = 1000;
  int months = 12;
  int year = 2023;
  std::string community = "synthetic";
  std::vector<double> mixture;  // per catalog archetype; empty means uniform
  std::size_t threads_per_month = 100;
  std::size_t size_min = 3;
  std::size_t size_max = 12;
  double pair_fraction = 0.0;  // share of size-2 threads (dropped on ingest)
  double activity = 1.0;       // probability a user has a profile in a month
  std::optional<PlantedTransition> plant;
  std::uint64_t seed = 0;
  bool texts = true;

  static SynthSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SynthData {
  std::vector<ThreadRecord> threads;
  std::vector<UserRecord> users;
  std::vector<TextRecord> texts;
  std::string emotion_lexicon_tsv;
  std::vector<ArchetypeSequence> truth;  // planted labels, NodeId = user index
};

/// Throws kSpecError when the spec cannot be realised.
void validate(const SynthSpec& spec);

/// Planted label sequences only; identical to SynthData::truth for the same spec.
std::vector<ArchetypeSequence> synth_sequences(const SynthSpec& spec);

SynthData synthesize(const SynthSpec& spec);

/// threads.csv, users.csv, texts.csv, emotion.tsv and config.json (a pipeline
/// config pointing at the other files).
void write_fixture(const SynthData& data, const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace hyperroles
