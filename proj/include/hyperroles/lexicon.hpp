#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperroles {

enum class LexiconFamily {
  kEmotion,  // 8 Plutchik emotions, memberships in [0, 1]
  kPad,      // valence/pleasure, arousal, dominance
  kMoral,    // 5 moral foundations, scores in [-1, 1]
};

std::string_view to_string(LexiconFamily family) noexcept;
LexiconFamily parse_lexicon_family(std::string_view name);
std::size_t expected_dimensions(LexiconFamily family) noexcept;

/// Term -> per-dimension scores. Loaded from a TSV file whose header is
/// `term<TAB>dim1...dimd`; terms are lower-cased on load.
class Lexicon {
 public:
  Lexicon(std::string name, LexiconFamily family, std::vector<std::string> dimensions);

  static Lexicon load_tsv(const std::filesystem::path& path, LexiconFamily family);
  static Lexicon read_tsv(std::istream& in, LexiconFamily family, std::string name);

  void add(std::string_view term, std::vector<double> scores);
  /// nullptr for unknown terms.
  const std::vector<double>* lookup(std::string_view term) const;

  const std::string& name() const noexcept { return name_; }
  LexiconFamily family() const noexcept { return family_; }
  const std::vector<std::string>& dimensions() const noexcept { return dimensions_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::string name_;
  LexiconFamily family_;
  std::vector<std::string> dimensions_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Lower-cased runs of ASCII letters/digits; every other ASCII byte separates
/// tokens. Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

enum class TextScoring {
  kRawSum,        // total score of the matched words
  kPerTokenMean,  // total divided by the token count
};

/// Per-dimension scores of one text. Moral lexicons average over matched
/// words so the result stays in [-1, 1].
std::vector<double> score_text(std::string_view text, const Lexicon& lex,
                               TextScoring scoring = TextScoring::kRawSum);

/// Mean of score_text over a subject's texts. Throws kEmptyInput on no texts.
std::vector<double> mean_text_scores(std::span<const std::string> texts, const Lexicon& lex,
                                     TextScoring scoring = TextScoring::kRawSum);

struct Profile {
  std::string subject;
  LexiconFamily family = LexiconFamily::kEmotion;
  std::vector<std::string> dimensions;
  std::vector<double> values;
};

struct SubjectTexts {
  std::string subject;
  std::vector<std::string> texts;
};

/// One profile per subject. Emotion and PAD dimensions are rescaled across
/// the population with the lower end anchored at min(0, observed min), so a
/// subject with no matched words maps to 0; moral scores are left as means.
std::vector<Profile> population_profiles(std::span<const SubjectTexts> subjects, const Lexicon& lex,
                                         TextScoring scoring = TextScoring::kRawSum);

/// Dimension-wise mean of member profiles, labelled with `subject`.
Profile mean_profile(std::string subject, std::span<const Profile> members);

}  // namespace hyperroles
