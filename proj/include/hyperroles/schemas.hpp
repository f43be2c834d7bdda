#pragma once

#include "hyperroles/csv.hpp"

// Column layouts of every file the toolkit reads or writes. Outputs are
// validated against these before they are written.

namespace hyperroles::schemas {

using csv::Column;
using csv::ColumnType;
using csv::Schema;

inline const Schema kThreads{
    "threads.csv",
    {{"thread_id", ColumnType::kString},
     {"community", ColumnType::kString},
     {"year", ColumnType::kInteger},
     {"month", ColumnType::kInteger},
     {"members", ColumnType::kString}}};

inline const Schema kUsers{
    "users.csv",
    {{"user_id", ColumnType::kString},
     {"year", ColumnType::kInteger},
     {"month", ColumnType::kInteger},
     {"score", ColumnType::kReal},
     {"sentiment", ColumnType::kReal},
     {"toxicity", ColumnType::kReal}}};

inline const Schema kTexts{
    "texts.csv",
    {{"thread_id", ColumnType::kString},
     {"user_id", ColumnType::kString},
     {"text", ColumnType::kString},
     {"subjectivity", ColumnType::kReal, true}}};

inline const Schema kStats{
    "stats.csv",
    {{"t", ColumnType::kString},
     {"year", ColumnType::kInteger, true},
     {"month", ColumnType::kInteger, true},
     {"n", ColumnType::kInteger},
     {"m", ColumnType::kInteger},
     {"max_edge_size", ColumnType::kInteger},
     {"mean_hyperdegree", ColumnType::kReal},
     {"mean_degree", ColumnType::kReal},
     {"jaccard_next", ColumnType::kReal, true}}};

inline const Schema kDistributions{
    "distributions.csv",
    {{"t", ColumnType::kString},
     {"kind", ColumnType::kString},
     {"value", ColumnType::kInteger},
     {"count", ColumnType::kInteger}}};

inline const Schema kCensus{
    "archetype_census.csv",
    {{"archetype", ColumnType::kString},
     {"labels", ColumnType::kString},
     {"count", ColumnType::kInteger}}};

inline const Schema kAssignments{
    "assignments.csv",
    {{"user_id", ColumnType::kString},
     {"t", ColumnType::kString},
     {"archetype", ColumnType::kString},
     {"typicality", ColumnType::kReal}}};

inline const Schema kProfiles{
    "profiles.csv",
    {{"subject", ColumnType::kString},
     {"family", ColumnType::kString},
     {"dim", ColumnType::kString},
     {"value", ColumnType::kReal}}};

inline const Schema kTransitions{
    "transitions.csv",
    {{"from", ColumnType::kString},
     {"to", ColumnType::kString},
     {"obs", ColumnType::kReal, true},
     {"null_mean", ColumnType::kReal, true},
     {"null_std", ColumnType::kReal, true},
     {"z", ColumnType::kReal, true},
     {"p_normal", ColumnType::kReal, true},
     {"p_empirical", ColumnType::kReal, true},
     {"significant", ColumnType::kBool}}};

inline const Schema kCentralDiscussions{
    "central_discussions.csv",
    {{"hyperedge_id", ColumnType::kString},
     {"betweenness", ColumnType::kReal},
     {"rank", ColumnType::kInteger},
     {"avg_word_count", ColumnType::kReal, true},
     {"avg_unique_word_count", ColumnType::kReal, true},
     {"avg_subjectivity", ColumnType::kReal, true},
     {"archetype_purity", ColumnType::kReal, true},
     {"month", ColumnType::kInteger}}};

inline const Schema kOmegas{
    "omegas.csv",
    {{"hyperedge_id", ColumnType::kString},
     {"omega", ColumnType::kString},
     {"value", ColumnType::kReal, true}}};

inline const Schema kCoverage{
    "coverage.csv",
    {{"user_id", ColumnType::kString},
     {"status", ColumnType::kString}}};

inline const Schema kHyperedges{
    "hyperedges.csv",
    {{"t", ColumnType::kInteger},
     {"thread_id", ColumnType::kString},
     {"community", ColumnType::kString},
     {"year", ColumnType::kInteger},
     {"month", ColumnType::kInteger},
     {"size", ColumnType::kInteger},
     {"members", ColumnType::kString}}};

}  // namespace hyperroles::schemas
