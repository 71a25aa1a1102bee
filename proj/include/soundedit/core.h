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

// Domain types for mixture-to-mixture editing: source signatures, edit
// actions, and full / simplified edit instructions.

#ifndef SOUNDEDIT_CORE_H_
#define SOUNDEDIT_CORE_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace soundedit {

enum class Gender : std::uint8_t { kFemale, kMale };
enum class Level : std::uint8_t { kLow, kNormal, kHigh };
enum class Emotion : std::uint8_t {
  kAngry,
  kContempt,
  kDisgusted,
  kFear,
  kHappy,
  kSad,
  kSurprised,
  kNeutral,
};

// Attribute order of a style vector; also the tie-break order used when
// choosing attribute subsets.
enum class StyleAttribute : std::uint8_t {
  kGender,
  kPitch,
  kTempo,
  kVolume,
  kEmotion,
};
inline constexpr int kNumStyleAttributes = 5;
inline constexpr std::array<StyleAttribute, kNumStyleAttributes>
    kAllStyleAttributes = {StyleAttribute::kGender, StyleAttribute::kPitch,
                           StyleAttribute::kTempo, StyleAttribute::kVolume,
                           StyleAttribute::kEmotion};

std::string_view attribute_name(StyleAttribute attr);
int attribute_cardinality(StyleAttribute attr);
// Canonical lowercase name of value `code` of `attr`, e.g. (kEmotion, 4) ->
// "happy".
std::string_view attribute_value_name(StyleAttribute attr, int code);
std::optional<int> parse_attribute_value(StyleAttribute attr,
                                         std::string_view name);

struct StyleVector {
  Gender gender = Gender::kFemale;
  Level pitch = Level::kNormal;
  Level tempo = Level::kNormal;
  Level volume = Level::kNormal;
  Emotion emotion = Emotion::kNeutral;

  int get(StyleAttribute attr) const;
  void set(StyleAttribute attr, int code);

  friend auto operator<=>(const StyleVector&, const StyleVector&) = default;
};

std::string to_string(const StyleVector& style);

// Audio class label, case-normalized with whitespace trimmed and collapsed.
class ClassLabel {
 public:
  // Throws Error(kInvalidArgument) when the normalized label is empty.
  explicit ClassLabel(std::string_view raw);

  const std::string& str() const { return label_; }
  static std::string normalize(std::string_view raw);

  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;

 private:
  std::string label_;
};

// Identifies one source in a mixture: a speaking style for speech or a class
// label for audio. Speech signatures order before audio signatures.
class Signature {
 public:
  Signature(StyleVector style) : value_(style) {}  // NOLINT
  Signature(ClassLabel label) : value_(std::move(label)) {}  // NOLINT

  bool is_speech() const { return value_.index() == 0; }
  const StyleVector& style() const { return std::get<StyleVector>(value_); }
  const ClassLabel& label() const { return std::get<ClassLabel>(value_); }
  std::string to_string() const;

  friend auto operator<=>(const Signature&, const Signature&) = default;

 private:
  std::variant<StyleVector, ClassLabel> value_;
};

enum class Action : std::uint8_t { kRemove, kKeep, kVolUp, kVolDown };
inline constexpr std::array<Action, 4> kAllActions = {
    Action::kRemove, Action::kKeep, Action::kVolUp, Action::kVolDown};

// Scaling factor applied to a source: 0, 1, 2 or 0.5.
double alpha(Action action);
// "0", "1", "↑", "↓".
std::string_view action_symbol(Action action);
// ASCII spelling: "0", "1", "u", "d".
std::string_view action_ascii(Action action);
// Accepts the symbols above, their ASCII aliases, and the words
// remove/keep/up/down.
std::optional<Action> parse_action(std::string_view token);
// Comma-separated action vector, e.g. "0,↓,↑,1" or "0,d,u,1".
std::vector<Action> parse_action_vector(std::string_view text);
std::string format_action_vector(std::span<const Action> actions,
                                 bool ascii = false);

struct Edit {
  Action action;
  Signature signature;
  friend bool operator==(const Edit&, const Edit&) = default;
};

// A validated full instruction: at least two edits, pairwise distinct
// signatures, and neither the identity nor the silence edit.
class Instruction {
 public:
  const std::vector<Edit>& edits() const { return edits_; }
  std::size_t size() const { return edits_.size(); }
  std::vector<Action> actions() const;
  std::vector<Signature> signatures() const;

 private:
  friend Instruction validate_instruction(std::vector<Edit> edits);
  explicit Instruction(std::vector<Edit> edits) : edits_(std::move(edits)) {}
  std::vector<Edit> edits_;
};

// Throws Error with kInvalidArgument (< 2 edits), kDuplicateSignature,
// kTrivialIdentity or kTrivialSilence.
Instruction validate_instruction(std::vector<Edit> edits);

// Speech descriptor restricted to a subset of style attributes. Attributes
// outside the mask are held at their zero value so the defaulted comparisons
// only see retained attributes.
class PartialStyle {
 public:
  PartialStyle() = default;
  static PartialStyle project(const StyleVector& style, std::uint8_t mask);

  std::uint8_t mask() const { return mask_; }
  bool has(StyleAttribute attr) const;
  int get(StyleAttribute attr) const { return values_.get(attr); }
  int attribute_count() const;
  bool matches(const StyleVector& style) const;

  friend auto operator<=>(const PartialStyle&, const PartialStyle&) = default;

 private:
  std::uint8_t mask_ = 0;
  StyleVector values_{Gender::kFemale, Level::kLow, Level::kLow, Level::kLow,
                      Emotion::kAngry};
};

inline constexpr std::uint8_t attribute_bit(StyleAttribute attr) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(attr));
}
inline constexpr std::uint8_t kFullStyleMask = 0x1f;

enum class SourceGroup : std::uint8_t { kAllSpeech, kAllAudio };

// What a simplified edit points at.
using PartialSignature = std::variant<PartialStyle, ClassLabel, SourceGroup>;

std::string to_string(const PartialSignature& target);

struct SimplifiedEdit {
  Action action;
  PartialSignature target;
  friend auto operator<=>(const SimplifiedEdit&,
                          const SimplifiedEdit&) = default;
};

// Human-style instruction: unchanged sources are usually omitted and speakers
// are described by a subset of their style. When every edit is a Keep the
// instruction is extraction-phrased and unmentioned sources are removed;
// otherwise unmentioned sources are kept.
struct SimplifiedInstruction {
  std::vector<SimplifiedEdit> edits;

  bool extraction_phrased() const;
  // Edits sorted canonically, for order-insensitive comparison.
  SimplifiedInstruction canonical() const;
  friend bool operator==(const SimplifiedInstruction&,
                         const SimplifiedInstruction&) = default;
};

bool same_edits(const SimplifiedInstruction& a, const SimplifiedInstruction& b);
std::string to_string(const SimplifiedInstruction& instr);

// Maps a simplified instruction back onto the sources of a mixture. Throws
// kUnresolvedDescriptor when a speaker or label descriptor does not pick out
// exactly one source, kConflictingEdits when one source receives two
// different actions, and kEmptyInstruction for an empty edit list.
std::vector<Action> resolve_actions(const SimplifiedInstruction& instr,
                                    std::span<const Signature> sources);

}  // namespace soundedit

#endif  // SOUNDEDIT_CORE_H_
