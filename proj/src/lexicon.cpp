#include "hyperroles/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "hyperroles/error.hpp"

namespace hyperroles {

std::string_view to_string(LexiconFamily family) noexcept {
  switch (family) {
    case LexiconFamily::kEmotion: return "emotion";
    case LexiconFamily::kPad: return "pad";
    case LexiconFamily::kMoral: return "moral";
  }
  return "unknown";
}

LexiconFamily parse_lexicon_family(std::string_view name) {
  if (name == "emotion") return LexiconFamily::kEmotion;
  if (name == "pad" || name == "vad") return LexiconFamily::kPad;
  if (name == "moral") return LexiconFamily::kMoral;
  throw Error(ErrorCode::kInvalidValue, "unknown lexicon family '" + std::string(name) + "'");
}

std::size_t expected_dimensions(LexiconFamily family) noexcept {
  switch (family) {
    case LexiconFamily::kEmotion: return 8;
    case LexiconFamily::kPad: return 3;
    case LexiconFamily::kMoral: return 5;
  }
  return 0;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Lexicon::Lexicon(std::string name, LexiconFamily family, std::vector<std::string> dimensions)
    : name_(std::move(name)), family_(family), dimensions_(std::move(dimensions)) {
  if (dimensions_.size() != expected_dimensions(family_)) {
    throw Error(ErrorCode::kSchemaMismatch,
                "lexicon '" + name_ + "' declares " + std::to_string(dimensions_.size()) +
                    " dimensions, " + std::string(to_string(family_)) + " needs " +
                    std::to_string(expected_dimensions(family_)));
  }
}

Lexicon Lexicon::load_tsv(const std::filesystem::path& path, LexiconFamily family) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInputError, "cannot open lexicon " + path.string());
  return read_tsv(in, family, path.stem().string());
}

Lexicon Lexicon::read_tsv(std::istream& in, LexiconFamily family, std::string name) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kInputError, "lexicon '" + name + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_tabs(line);
  if (header.size() < 2 || header.front() != "term") {
    throw Error(ErrorCode::kInputError, "lexicon '" + name + "' header must start with 'term'");
  }
  std::vector<std::string> dims(header.begin() + 1, header.end());
  Lexicon lex(std::move(name), family, std::move(dims));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kInputError, "lexicon '" + lex.name_ + "' line " + std::to_string(line_no) +
                                              ": expected " + std::to_string(header.size()) + " fields");
    }
    std::vector<double> scores;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      const auto f = fields[i];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::kInputError, "lexicon '" + lex.name_ + "' line " +
                                                std::to_string(line_no) + ": bad score '" +
                                                std::string(f) + "'");
      }
      scores.push_back(v);
    }
    lex.add(fields.front(), std::move(scores));
  }
  return lex;
}

void Lexicon::add(std::string_view term, std::vector<double> scores) {
  if (scores.size() != dimensions_.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "lexicon entry '" + std::string(term) + "' has wrong width");
  }
  entries_[lower(term)] = std::move(scores);
}

const std::vector<double>* Lexicon::lookup(std::string_view term) const {
  const auto it = entries_.find(std::string(term));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
    if (word) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<double> score_text(std::string_view text, const Lexicon& lex, TextScoring scoring) {
  const std::size_t d = lex.dimensions().size();
  std::vector<double> total(d, 0.0);
  const auto tokens = tokenize(text);
  std::size_t matched = 0;
  for (const auto& tok : tokens) {
    if (const auto* entry = lex.lookup(tok)) {
      ++matched;
      for (std::size_t i = 0; i < d; ++i) total[i] += (*entry)[i];
    }
  }
  double divisor = 1.0;
  if (lex.family() == LexiconFamily::kMoral) {
    divisor = static_cast<double>(std::max<std::size_t>(matched, 1));
  } else if (scoring == TextScoring::kPerTokenMean) {
    divisor = static_cast<double>(std::max<std::size_t>(tokens.size(), 1));
  }
  if (divisor != 1.0) {
    for (auto& x : total) x /= divisor;
  }
  return total;
}

std::vector<double> mean_text_scores(std::span<const std::string> texts, const Lexicon& lex,
                                     TextScoring scoring) {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "profile needs at least one text");
  std::vector<double> acc(lex.dimensions().size(), 0.0);
  for (const auto& t : texts) {
    const auto s = score_text(t, lex, scoring);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s[i];
  }
  for (auto& x : acc) x /= static_cast<double>(texts.size());
  return acc;
}

std::vector<Profile> population_profiles(std::span<const SubjectTexts> subjects, const Lexicon& lex,
                                         TextScoring scoring) {
  if (subjects.empty()) throw Error(ErrorCode::kEmptyInput, "no subjects to profile");
  std::vector<Profile> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) {
    out.push_back({s.subject, lex.family(), lex.dimensions(), mean_text_scores(s.texts, lex, scoring)});
  }
  if (lex.family() == LexiconFamily::kMoral) return out;

  const std::size_t d = lex.dimensions().size();
  for (std::size_t i = 0; i < d; ++i) {
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& p : out) {
      lo = std::min(lo, p.values[i]);
      hi = std::max(hi, p.values[i]);
    }
    for (auto& p : out) p.values[i] = hi > lo ? (p.values[i] - lo) / (hi - lo) : 0.0;
  }
  return out;
}

Profile mean_profile(std::string subject, std::span<const Profile> members) {
  if (members.empty()) throw Error(ErrorCode::kEmptyInput, "mean_profile over no members");
  Profile out{std::move(subject), members.front().family, members.front().dimensions,
              std::vector<double>(members.front().values.size(), 0.0)};
  for (const auto& p : members) {
    if (p.values.size() != out.values.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "profiles with different dimensions");
    }
    for (std::size_t i = 0; i < p.values.size(); ++i) out.values[i] += p.values[i];
  }
  for (auto& x : out.values) x /= static_cast<double>(members.size());
  return out;
}

}  // namespace hyperroles
