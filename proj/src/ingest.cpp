#include "hyperroles/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <tuple>
#include <ostream>
#include <set>
#include <unordered_set>

#include "hyperroles/csv.hpp"
#include "hyperroles/error.hpp"
#include "hyperroles/schemas.hpp"

namespace hyperroles {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInputError, "cannot open " + path.string());
  return in;
}

[[noreturn]] void row_error(std::string_view file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kInputError, std::string(file) + " line " + std::to_string(line) + ": " + what);
}

std::size_t require_column(const csv::Header& header, const ColumnMap& columns,
                           const std::string& canonical, std::string_view file) {
  const auto actual = columns.resolve(canonical);
  const auto idx = header.find(actual);
  if (!idx) {
    throw Error(ErrorCode::kInputError, std::string(file) + ": missing required column '" + actual + "'");
  }
  return *idx;
}

std::vector<std::string> split_members(std::string_view field) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    const auto sep = field.find(';', start);
    const auto end = sep == std::string_view::npos ? field.size() : sep;
    auto token = field.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) out.emplace_back(token);
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return out;
}

int checked_month(long long month, std::string_view file, std::size_t line) {
  if (month < 1 || month > 12) row_error(file, line, "month must be in 1..12");
  return static_cast<int>(month);
}

}  // namespace

std::string ColumnMap::resolve(const std::string& canonical) const {
  const auto it = renames.find(canonical);
  return it == renames.end() ? canonical : it->second;
}

bool ThreadFilter::accepts(const std::string& community_tag, int y, int m) const {
  if (community && *community != community_tag) return false;
  if (year && *year != y) return false;
  if (!months.empty() && std::find(months.begin(), months.end(), m) == months.end()) return false;
  return true;
}

std::vector<ThreadRecord> read_threads(std::istream& in, const ColumnMap& columns,
                                       std::vector<std::string>& warnings) {
  constexpr std::string_view kFile = "threads.csv";
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw Error(ErrorCode::kInputError, "threads.csv is empty");
  const csv::Header header(fields);
  const auto c_id = require_column(header, columns, "thread_id", kFile);
  const auto c_comm = require_column(header, columns, "community", kFile);
  const auto c_year = require_column(header, columns, "year", kFile);
  const auto c_month = require_column(header, columns, "month", kFile);
  const auto c_members = require_column(header, columns, "members", kFile);
  const std::set<std::size_t> known{c_id, c_comm, c_year, c_month, c_members};
  for (std::size_t i = 0; i < header.columns().size(); ++i) {
    if (!known.contains(i)) warnings.push_back("threads.csv: ignoring unknown column '" + header.columns()[i] + "'");
  }

  std::vector<ThreadRecord> out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.columns().size()) {
      row_error(kFile, reader.line(), "expected " + std::to_string(header.columns().size()) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    ThreadRecord rec;
    rec.thread_id = fields[c_id];
    if (rec.thread_id.empty()) row_error(kFile, reader.line(), "empty thread_id");
    rec.community = fields[c_comm];
    try {
      rec.year = static_cast<int>(csv::parse_int(fields[c_year], "year"));
      rec.month = checked_month(csv::parse_int(fields[c_month], "month"), kFile, reader.line());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInputError) throw;
      row_error(kFile, reader.line(), e.what());
    }
    rec.members = split_members(fields[c_members]);
    if (rec.members.empty()) row_error(kFile, reader.line(), "thread has no members");
    out.push_back(std::move(rec));
  }
  return out;
}

void write_threads(std::ostream& out, std::span<const ThreadRecord> threads) {
  csv::Table table(schemas::kThreads);
  for (const auto& t : threads) {
    std::string members;
    for (std::size_t i = 0; i < t.members.size(); ++i) {
      if (i) members.push_back(';');
      members += t.members[i];
    }
    table.add_row({t.thread_id, t.community, std::to_string(t.year), std::to_string(t.month), members});
  }
  table.write(out);
}

ThreadData build_series(std::span<const ThreadRecord> threads, NodeInterner& interner,
                        const ThreadFilter& filter) {
  if (filter.min_edge_size == 0) throw Error(ErrorCode::kInvalidValue, "min_edge_size must be >= 1");
  ThreadData data;
  data.rows = threads.size();

  std::vector<const ThreadRecord*> accepted;
  std::unordered_set<std::string> seen_ids;
  int base_year = std::numeric_limits<int>::max();
  for (const auto& t : threads) {
    if (!filter.accepts(t.community, t.year, t.month)) {
      ++data.dropped_by_filter;
      continue;
    }
    if (!seen_ids.insert(t.thread_id).second) {
      data.warnings.push_back("duplicate thread_id '" + t.thread_id + "' ignored");
      continue;
    }
    accepted.push_back(&t);
    base_year = std::min(base_year, t.year);
  }
  data.base_year = accepted.empty() ? filter.year.value_or(0) : base_year;

  std::map<int, std::vector<Hyperedge>> by_t;
  std::map<int, std::pair<int, int>> calendar;
  std::vector<Hyperedge> all;
  for (const auto* t : accepted) {
    std::vector<NodeId> members;
    members.reserve(t->members.size());
    for (const auto& m : t->members) members.push_back(interner.intern(m));
    auto edge = make_hyperedge(std::move(members), {t->thread_id, t->community, t->year, t->month});
    if (edge.size() < filter.min_edge_size) {
      ++data.dropped_small;
      continue;
    }
    const int ts = timestamp_of(t->year, t->month, data.base_year);
    calendar[ts] = {t->year, t->month};
    by_t[ts].push_back(edge);
    all.push_back(std::move(edge));
  }
  data.kept = all.size();

  std::vector<Snapshot> snapshots;
  for (auto& [ts, edges] : by_t) {
    snapshots.push_back({ts, calendar[ts].first, calendar[ts].second, Hypergraph(std::move(edges))});
  }
  std::optional<Hypergraph> aggregate;
  if (!all.empty()) {
    aggregate = Hypergraph(std::move(all));
  } else {
    data.warnings.push_back("no threads left after filtering; the snapshot series is empty");
  }
  data.series = SnapshotSeries(std::move(snapshots), std::move(aggregate));
  return data;
}

ThreadData load_threads(const std::filesystem::path& path, NodeInterner& interner,
                        const ThreadFilter& filter, const ColumnMap& columns) {
  auto in = open_input(path);
  std::vector<std::string> warnings;
  const auto records = read_threads(in, columns, warnings);
  auto data = build_series(records, interner, filter);
  warnings.insert(warnings.end(), data.warnings.begin(), data.warnings.end());
  data.warnings = std::move(warnings);
  return data;
}

std::vector<UserRecord> read_users(std::istream& in, const ColumnMap& columns, UserColumns& layout) {
  constexpr std::string_view kFile = "users.csv";
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw Error(ErrorCode::kInputError, "users.csv is empty");
  const csv::Header header(fields);
  const auto c_user = require_column(header, columns, "user_id", kFile);
  const auto c_year = require_column(header, columns, "year", kFile);
  const auto c_month = require_column(header, columns, "month", kFile);
  const std::size_t c_features[] = {require_column(header, columns, "score", kFile),
                                    require_column(header, columns, "sentiment", kFile),
                                    require_column(header, columns, "toxicity", kFile)};
  const auto c_activity = header.find(columns.resolve("activity"));
  const std::set<std::size_t> known{c_user, c_year, c_month, c_features[0], c_features[1], c_features[2]};

  layout = {};
  layout.has_activity = c_activity.has_value();
  std::vector<std::size_t> c_extras;
  for (std::size_t i = 0; i < header.columns().size(); ++i) {
    if (known.contains(i) || (c_activity && *c_activity == i)) continue;
    c_extras.push_back(i);
    layout.extras.push_back(header.columns()[i]);
  }

  std::vector<UserRecord> out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.columns().size()) {
      row_error(kFile, reader.line(), "expected " + std::to_string(header.columns().size()) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    UserRecord rec;
    try {
      rec.user_id = fields[c_user];
      if (rec.user_id.empty()) throw Error(ErrorCode::kInputError, "empty user_id");
      rec.year = static_cast<int>(csv::parse_int(fields[c_year], "year"));
      rec.month = checked_month(csv::parse_int(fields[c_month], "month"), kFile, reader.line());
      for (auto c : c_features) rec.values.push_back(csv::parse_double(fields[c], header.columns()[c]));
      for (auto c : c_extras) rec.values.push_back(csv::parse_double(fields[c], header.columns()[c]));
      if (c_activity) {
        rec.activity = csv::parse_double(fields[*c_activity], "activity");
        if (*rec.activity < 0) throw Error(ErrorCode::kInputError, "activity must be non-negative");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInputError) throw;
      row_error(kFile, reader.line(), e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_users(std::ostream& out, std::span<const UserRecord> users, const UserColumns& layout) {
  csv::Schema schema = schemas::kUsers;
  for (const auto& e : layout.extras) schema.columns.push_back({e, csv::ColumnType::kReal});
  if (layout.has_activity) schema.columns.push_back({"activity", csv::ColumnType::kReal});
  csv::Table table(schema);
  for (const auto& u : users) {
    std::vector<std::string> row{u.user_id, std::to_string(u.year), std::to_string(u.month)};
    for (double v : u.values) row.push_back(csv::format_double(v));
    if (layout.has_activity) row.push_back(csv::format_double(u.activity.value_or(1.0)));
    table.add_row(std::move(row));
  }
  table.write(out);
}

std::vector<FeatureVector> UserTable::yearly() const {
  std::vector<FeatureVector> out;
  std::size_t i = 0;
  while (i < monthly.size()) {
    const NodeId user = monthly[i].user;
    std::vector<double> acc(schema.size(), 0.0);
    double weight = 0.0;
    std::size_t j = i;
    for (; j < monthly.size() && monthly[j].user == user; ++j) {
      const double w = activity[j];
      weight += w;
      for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += w * monthly[j].values[f];
    }
    if (weight > 0.0) {
      for (auto& x : acc) x /= weight;
    } else {
      // All-zero activity: fall back to an unweighted mean.
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t r = i; r < j; ++r) {
        for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += monthly[r].values[f];
      }
      for (auto& x : acc) x /= static_cast<double>(j - i);
    }
    for (auto& x : acc) x = std::clamp(x, 0.0, 1.0);
    out.push_back({user, 0, std::move(acc)});
    i = j;
  }
  return out;
}

std::vector<FeatureVector> UserTable::month(int t) const {
  std::vector<FeatureVector> out;
  for (const auto& fv : monthly) {
    if (fv.t == t) out.push_back(fv);
  }
  return out;
}

UserTable build_user_table(std::span<const UserRecord> users, const UserColumns& layout,
                           NodeInterner& interner, int base_year, const ThreadFilter& filter) {
  std::vector<FeatureDef> defs{{"score"}, {"sentiment"}, {"toxicity"}};
  for (const auto& e : layout.extras) defs.push_back({e});
  UserTable table;
  table.schema = FeatureSchema(std::move(defs));
  const std::size_t width = table.schema.size();

  std::vector<const UserRecord*> kept;
  for (const auto& u : users) {
    if (filter.year && *filter.year != u.year) continue;
    if (!filter.months.empty() &&
        std::find(filter.months.begin(), filter.months.end(), u.month) == filter.months.end()) {
      continue;
    }
    if (u.values.size() != width) throw Error(ErrorCode::kSchemaMismatch, "user row width mismatch");
    kept.push_back(&u);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptyInput, "no user profile rows after filtering");

  for (std::size_t f = 0; f < width; ++f) {
    std::vector<double> column;
    column.reserve(kept.size());
    for (const auto* u : kept) column.push_back(u->values[f]);
    table.scalers.push_back(fit_minmax(column));
  }

  struct Row {
    NodeId user;
    int t;
    const UserRecord* rec;
  };
  std::vector<Row> rows;
  rows.reserve(kept.size());
  for (const auto* u : kept) {
    rows.push_back({interner.intern(u->user_id), timestamp_of(u->year, u->month, base_year), u});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.user, a.t) < std::tie(b.user, b.t);
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].user == rows[i - 1].user && rows[i].t == rows[i - 1].t) {
      throw Error(ErrorCode::kInputError, "users.csv: duplicate profile row for user '" +
                                              rows[i].rec->user_id + "' in " +
                                              std::to_string(rows[i].rec->year) + "-" +
                                              std::to_string(rows[i].rec->month));
    }
  }
  for (const auto& r : rows) {
    FeatureVector fv{r.user, r.t, {}};
    fv.values.reserve(width);
    for (std::size_t f = 0; f < width; ++f) fv.values.push_back(table.scalers[f].apply(r.rec->values[f]));
    table.monthly.push_back(std::move(fv));
    table.activity.push_back(r.rec->activity.value_or(1.0));
  }
  return table;
}

UserTable load_users(const std::filesystem::path& path, NodeInterner& interner, int base_year,
                     const ThreadFilter& filter, const ColumnMap& columns) {
  auto in = open_input(path);
  UserColumns layout;
  const auto records = read_users(in, columns, layout);
  return build_user_table(records, layout, interner, base_year, filter);
}

CoverageReport coverage(const Hypergraph& aggregate, const UserTable& users) {
  std::unordered_set<NodeId> profiled;
  for (const auto& fv : users.monthly) profiled.insert(fv.user);
  CoverageReport report;
  report.users_in_threads = aggregate.order();
  for (NodeId v : aggregate.nodes()) {
    if (profiled.contains(v)) {
      ++report.users_with_profiles;
    } else {
      report.missing_profiles.push_back(v);
    }
  }
  return report;
}

std::vector<TextRecord> read_texts(std::istream& in, const ColumnMap& columns) {
  constexpr std::string_view kFile = "texts.csv";
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw Error(ErrorCode::kInputError, "texts.csv is empty");
  const csv::Header header(fields);
  const auto c_thread = require_column(header, columns, "thread_id", kFile);
  const auto c_user = require_column(header, columns, "user_id", kFile);
  const auto c_text = require_column(header, columns, "text", kFile);
  const auto c_subj = header.find(columns.resolve("subjectivity"));
  std::vector<TextRecord> out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.columns().size()) {
      row_error(kFile, reader.line(), "expected " + std::to_string(header.columns().size()) + " fields");
    }
    TextRecord rec{fields[c_thread], fields[c_user], fields[c_text], std::nullopt};
    if (c_subj && !fields[*c_subj].empty()) {
      try {
        rec.subjectivity = csv::parse_double(fields[*c_subj], "subjectivity");
      } catch (const Error& e) {
        row_error(kFile, reader.line(), e.what());
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<TextRecord> load_texts(const std::filesystem::path& path, const ColumnMap& columns) {
  auto in = open_input(path);
  return read_texts(in, columns);
}

void write_texts(std::ostream& out, std::span<const TextRecord> texts) {
  csv::Table table(schemas::kTexts);
  for (const auto& t : texts) {
    table.add_row({t.thread_id, t.user_id, t.text, csv::format_optional(t.subjectivity)});
  }
  table.write(out);
}

}  // namespace hyperroles
