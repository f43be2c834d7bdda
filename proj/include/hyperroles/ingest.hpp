#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperroles/features.hpp"
#include "hyperroles/hypergraph.hpp"

namespace hyperroles {

/// Maps canonical column names (thread_id, members, user_id, ...) to the
/// names used by a particular release of the data.
struct ColumnMap {
  std::map<std::string, std::string> renames;

  std::string resolve(const std::string& canonical) const;
};

struct ThreadRecord {
  std::string thread_id;
  std::string community;
  int year = 0;
  int month = 0;
  std::vector<std::string> members;  // raw, possibly with duplicates
};

struct ThreadFilter {
  std::optional<std::string> community;
  std::optional<int> year;
  std::vector<int> months;  // empty: all
  std::size_t min_edge_size = 3;

  bool accepts(const std::string& community_tag, int year, int month) const;
};

/// Snapshot index of a calendar month: months since January of base_year, plus one.
constexpr int timestamp_of(int year, int month, int base_year) noexcept {
  return (year - base_year) * 12 + month;
}

struct ThreadData {
  SnapshotSeries series;
  int base_year = 0;
  std::size_t rows = 0;
  std::size_t kept = 0;
  std::size_t dropped_by_filter = 0;
  std::size_t dropped_small = 0;
  std::vector<std::string> warnings;
};

/// Parses threads CSV (thread_id,community,year,month,members; members are
/// ';'-separated). Malformed rows raise kInputError naming the line;
/// unrecognised columns only produce warnings.
std::vector<ThreadRecord> read_threads(std::istream& in, const ColumnMap& columns,
                                       std::vector<std::string>& warnings);
void write_threads(std::ostream& out, std::span<const ThreadRecord> threads);

/// Filters, deduplicates members, drops small hyperedges and groups the rest
/// into monthly snapshots plus an aggregate in which each thread appears once.
ThreadData build_series(std::span<const ThreadRecord> threads, NodeInterner& interner,
                        const ThreadFilter& filter);

ThreadData load_threads(const std::filesystem::path& path, NodeInterner& interner,
                        const ThreadFilter& filter, const ColumnMap& columns = {});

struct UserRecord {
  std::string user_id;
  int year = 0;
  int month = 0;
  std::vector<double> values;  // score, sentiment, toxicity, then extras
  std::optional<double> activity;
};

struct UserColumns {
  std::vector<std::string> extras;  // numeric feature columns after toxicity
  bool has_activity = false;
};

/// Parses users CSV (user_id,year,month,score,sentiment,toxicity[,extra...]).
/// An `activity` column, when present, weights monthly rows in yearly means.
std::vector<UserRecord> read_users(std::istream& in, const ColumnMap& columns, UserColumns& layout);
void write_users(std::ostream& out, std::span<const UserRecord> users, const UserColumns& layout);

/// Normalized per-user feature table. Min-max scaling is fitted once over
/// every retained user-month row, so labels are comparable across months.
struct UserTable {
  FeatureSchema schema;
  std::vector<MinMax> scalers;         // aligned with schema
  std::vector<FeatureVector> monthly;  // sorted by (user, t)
  std::vector<double> activity;        // aligned with monthly

  /// Activity-weighted mean of each user's monthly rows (t = 0), sorted by user.
  std::vector<FeatureVector> yearly() const;
  /// Monthly rows of month t.
  std::vector<FeatureVector> month(int t) const;
};

UserTable build_user_table(std::span<const UserRecord> users, const UserColumns& layout,
                           NodeInterner& interner, int base_year, const ThreadFilter& filter);

UserTable load_users(const std::filesystem::path& path, NodeInterner& interner, int base_year,
                     const ThreadFilter& filter, const ColumnMap& columns = {});

struct CoverageReport {
  std::size_t users_in_threads = 0;
  std::size_t users_with_profiles = 0;
  std::vector<NodeId> missing_profiles;  // in threads, no profile row
};

CoverageReport coverage(const Hypergraph& aggregate, const UserTable& users);

struct TextRecord {
  std::string thread_id;
  std::string user_id;
  std::string text;
  std::optional<double> subjectivity;
};

std::vector<TextRecord> read_texts(std::istream& in, const ColumnMap& columns);
std::vector<TextRecord> load_texts(const std::filesystem::path& path, const ColumnMap& columns = {});
void write_texts(std::ostream& out, std::span<const TextRecord> texts);

}  // namespace hyperroles
