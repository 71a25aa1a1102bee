// Copyright 2026 The soundedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Word lists used to render and parse prompts. The shipped copy lives in
// data/lexicon.json and is compiled into the library; see docs/lexicon.md
// for the schema.

#ifndef SOUNDEDIT_LEXICON_H_
#define SOUNDEDIT_LEXICON_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "soundedit/core.h"

namespace soundedit {

class Lexicon {
 public:
  // Parses and validates a lexicon document. Throws kInvalidArgument naming
  // the offending key when the schema or an invariant is violated: every
  // action needs at least three verb phrases, no phrase may serve two
  // actions, and attribute phrases must be unambiguous within their slot.
  static Lexicon from_json(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);
  static const Lexicon& builtin();

  int version() const { return version_; }

  const std::vector<std::string>& verbs(Action action) const {
    return verbs_[static_cast<std::size_t>(action)];
  }
  // Phrases naming value `code` of `attr`; gender and emotion phrases are
  // adjectives, the others are level words placed before attribute_nouns().
  const std::vector<std::string>& value_phrases(StyleAttribute attr,
                                                int code) const;
  // Nouns for pitch / tempo / volume. Empty for gender and emotion.
  const std::vector<std::string>& attribute_nouns(StyleAttribute attr) const {
    return nouns_[static_cast<std::size_t>(attr)];
  }
  const std::vector<std::string>& speaker_nouns() const { return speaker_nouns_; }
  const std::vector<std::string>& characterizers() const {
    return characterizers_;
  }
  const std::vector<std::string>& audio_suffixes() const {
    return audio_suffixes_;
  }
  // Descriptors naming every speech (or every audio) source at once.
  const std::vector<std::string>& group_phrases(SourceGroup group) const {
    return groups_[static_cast<std::size_t>(group)];
  }
  // Fixed group-level phrasings for (speech action, audio action); empty
  // when none are defined.
  const std::vector<std::string>& special(Action speech, Action audio) const;
  const std::map<std::pair<Action, Action>, std::vector<std::string>>&
  all_special() const {
    return special_;
  }

 private:
  Lexicon() = default;
  void validate() const;

  int version_ = 0;
  std::array<std::vector<std::string>, 4> verbs_;
  std::array<std::vector<std::vector<std::string>>, kNumStyleAttributes> values_;
  std::array<std::vector<std::string>, kNumStyleAttributes> nouns_;
  std::vector<std::string> speaker_nouns_;
  std::vector<std::string> characterizers_;
  std::vector<std::string> audio_suffixes_;
  std::array<std::vector<std::string>, 2> groups_;
  std::map<std::pair<Action, Action>, std::vector<std::string>> special_;
};

// Lexicon key for an action: "keep", "remove", "up", "down".
std::string_view action_key(Action action);

}  // namespace soundedit

#endif  // SOUNDEDIT_LEXICON_H_
