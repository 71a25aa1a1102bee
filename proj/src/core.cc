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

#include "soundedit/core.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "soundedit/error.h"

namespace soundedit {

namespace {

constexpr std::array<std::string_view, 2> kGenderNames = {"female", "male"};
constexpr std::array<std::string_view, 3> kLevelNames = {"low", "normal",
                                                         "high"};
constexpr std::array<std::string_view, 8> kEmotionNames = {
    "angry", "contempt", "disgusted", "fear",
    "happy", "sad",      "surprised", "neutral"};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view attribute_name(StyleAttribute attr) {
  switch (attr) {
    case StyleAttribute::kGender: return "gender";
    case StyleAttribute::kPitch: return "pitch";
    case StyleAttribute::kTempo: return "tempo";
    case StyleAttribute::kVolume: return "volume";
    case StyleAttribute::kEmotion: return "emotion";
  }
  return "";
}

int attribute_cardinality(StyleAttribute attr) {
  switch (attr) {
    case StyleAttribute::kGender: return 2;
    case StyleAttribute::kEmotion: return 8;
    default: return 3;
  }
}

std::string_view attribute_value_name(StyleAttribute attr, int code) {
  if (code < 0 || code >= attribute_cardinality(attr)) {
    throw Error(ErrorCode::kInvalidArgument,
                "attribute value out of range for " +
                    std::string(attribute_name(attr)));
  }
  switch (attr) {
    case StyleAttribute::kGender: return kGenderNames[code];
    case StyleAttribute::kEmotion: return kEmotionNames[code];
    default: return kLevelNames[code];
  }
}

std::optional<int> parse_attribute_value(StyleAttribute attr,
                                         std::string_view name) {
  std::string key = ClassLabel::normalize(name);
  for (int c = 0; c < attribute_cardinality(attr); ++c) {
    if (attribute_value_name(attr, c) == key) return c;
  }
  return std::nullopt;
}

int StyleVector::get(StyleAttribute attr) const {
  switch (attr) {
    case StyleAttribute::kGender: return static_cast<int>(gender);
    case StyleAttribute::kPitch: return static_cast<int>(pitch);
    case StyleAttribute::kTempo: return static_cast<int>(tempo);
    case StyleAttribute::kVolume: return static_cast<int>(volume);
    case StyleAttribute::kEmotion: return static_cast<int>(emotion);
  }
  return 0;
}

void StyleVector::set(StyleAttribute attr, int code) {
  if (code < 0 || code >= attribute_cardinality(attr)) {
    throw Error(ErrorCode::kInvalidArgument,
                "attribute value out of range for " +
                    std::string(attribute_name(attr)));
  }
  switch (attr) {
    case StyleAttribute::kGender: gender = static_cast<Gender>(code); break;
    case StyleAttribute::kPitch: pitch = static_cast<Level>(code); break;
    case StyleAttribute::kTempo: tempo = static_cast<Level>(code); break;
    case StyleAttribute::kVolume: volume = static_cast<Level>(code); break;
    case StyleAttribute::kEmotion: emotion = static_cast<Emotion>(code); break;
  }
}

std::string to_string(const StyleVector& style) {
  std::string out = "[";
  for (StyleAttribute attr : kAllStyleAttributes) {
    if (attr != StyleAttribute::kGender) out += ", ";
    out += attribute_value_name(attr, style.get(attr));
  }
  return out + "]";
}

ClassLabel::ClassLabel(std::string_view raw) : label_(normalize(raw)) {
  if (label_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty class label");
  }
}

std::string ClassLabel::normalize(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char ch : trim(raw)) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string Signature::to_string() const {
  if (is_speech()) return "speech" + soundedit::to_string(style());
  return "audio[" + label().str() + "]";
}

double alpha(Action action) {
  switch (action) {
    case Action::kRemove: return 0.0;
    case Action::kKeep: return 1.0;
    case Action::kVolUp: return 2.0;
    case Action::kVolDown: return 0.5;
  }
  return 1.0;
}

std::string_view action_symbol(Action action) {
  switch (action) {
    case Action::kRemove: return "0";
    case Action::kKeep: return "1";
    case Action::kVolUp: return "↑";
    case Action::kVolDown: return "↓";
  }
  return "?";
}

std::string_view action_ascii(Action action) {
  switch (action) {
    case Action::kRemove: return "0";
    case Action::kKeep: return "1";
    case Action::kVolUp: return "u";
    case Action::kVolDown: return "d";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view token) {
  std::string t = ClassLabel::normalize(token);
  if (t == "0" || t == "remove") return Action::kRemove;
  if (t == "1" || t == "keep") return Action::kKeep;
  if (t == "↑" || t == "u" || t == "up") return Action::kVolUp;
  if (t == "↓" || t == "d" || t == "down") return Action::kVolDown;
  return std::nullopt;
}

std::vector<Action> parse_action_vector(std::string_view text) {
  std::vector<Action> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(start, comma - start);
    auto action = parse_action(token);
    if (!action) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad action '" + trim(token) + "' in action vector");
    }
    out.push_back(*action);
    start = comma + 1;
  }
  return out;
}

std::string format_action_vector(std::span<const Action> actions, bool ascii) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ",";
    out += ascii ? action_ascii(actions[i]) : action_symbol(actions[i]);
  }
  return out;
}

std::vector<Action> Instruction::actions() const {
  std::vector<Action> out;
  out.reserve(edits_.size());
  for (const Edit& e : edits_) out.push_back(e.action);
  return out;
}

std::vector<Signature> Instruction::signatures() const {
  std::vector<Signature> out;
  out.reserve(edits_.size());
  for (const Edit& e : edits_) out.push_back(e.signature);
  return out;
}

Instruction validate_instruction(std::vector<Edit> edits) {
  if (edits.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "an instruction needs at least two edits");
  }
  for (std::size_t i = 0; i < edits.size(); ++i) {
    for (std::size_t j = i + 1; j < edits.size(); ++j) {
      if (edits[i].signature == edits[j].signature) {
        throw Error(ErrorCode::kDuplicateSignature,
                    "edits " + std::to_string(i) + " and " +
                        std::to_string(j) + " share signature " +
                        edits[i].signature.to_string());
      }
    }
  }
  auto all = [&](Action a) {
    return std::all_of(edits.begin(), edits.end(),
                       [a](const Edit& e) { return e.action == a; });
  };
  if (all(Action::kKeep)) {
    throw Error(ErrorCode::kTrivialIdentity, "every edit is keep");
  }
  if (all(Action::kRemove)) {
    throw Error(ErrorCode::kTrivialSilence, "every edit is remove");
  }
  return Instruction(std::move(edits));
}

PartialStyle PartialStyle::project(const StyleVector& style,
                                   std::uint8_t mask) {
  PartialStyle p;
  p.mask_ = mask & kFullStyleMask;
  for (StyleAttribute attr : kAllStyleAttributes) {
    if (p.has(attr)) p.values_.set(attr, style.get(attr));
  }
  return p;
}

bool PartialStyle::has(StyleAttribute attr) const {
  return (mask_ & attribute_bit(attr)) != 0;
}

int PartialStyle::attribute_count() const { return std::popcount(mask_); }

bool PartialStyle::matches(const StyleVector& style) const {
  for (StyleAttribute attr : kAllStyleAttributes) {
    if (has(attr) && values_.get(attr) != style.get(attr)) return false;
  }
  return true;
}

std::string to_string(const PartialSignature& target) {
  if (const auto* p = std::get_if<PartialStyle>(&target)) {
    std::string out = "speech{";
    bool first = true;
    for (StyleAttribute attr : kAllStyleAttributes) {
      if (!p->has(attr)) continue;
      if (!first) out += ",";
      first = false;
      out += std::string(attribute_name(attr)) + "=" +
             std::string(attribute_value_name(attr, p->get(attr)));
    }
    return out + "}";
  }
  if (const auto* l = std::get_if<ClassLabel>(&target)) {
    return "audio{" + l->str() + "}";
  }
  return std::get<SourceGroup>(target) == SourceGroup::kAllSpeech
             ? "all-speech"
             : "all-audio";
}

bool SimplifiedInstruction::extraction_phrased() const {
  return !edits.empty() &&
         std::all_of(edits.begin(), edits.end(), [](const SimplifiedEdit& e) {
           return e.action == Action::kKeep;
         });
}

SimplifiedInstruction SimplifiedInstruction::canonical() const {
  SimplifiedInstruction out = *this;
  std::sort(out.edits.begin(), out.edits.end());
  return out;
}

bool same_edits(const SimplifiedInstruction& a,
                const SimplifiedInstruction& b) {
  return a.canonical() == b.canonical();
}

std::string to_string(const SimplifiedInstruction& instr) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < instr.edits.size(); ++i) {
    if (i) os << ", ";
    os << "(" << action_symbol(instr.edits[i].action) << ", "
       << to_string(instr.edits[i].target) << ")";
  }
  os << "}";
  return os.str();
}

std::vector<Action> resolve_actions(const SimplifiedInstruction& instr,
                                    std::span<const Signature> sources) {
  if (instr.edits.empty()) {
    throw Error(ErrorCode::kEmptyInstruction, "no edits to resolve");
  }
  const Action fallback =
      instr.extraction_phrased() ? Action::kRemove : Action::kKeep;
  std::vector<std::optional<Action>> assigned(sources.size());

  auto assign = [&](std::size_t i, Action a, const PartialSignature& t) {
    if (assigned[i] && *assigned[i] != a) {
      throw Error(ErrorCode::kConflictingEdits,
                  sources[i].to_string() + " receives two actions via " +
                      to_string(t));
    }
    assigned[i] = a;
  };

  for (const SimplifiedEdit& edit : instr.edits) {
    if (const auto* group = std::get_if<SourceGroup>(&edit.target)) {
      const bool speech = *group == SourceGroup::kAllSpeech;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        if (sources[i].is_speech() == speech) assign(i, edit.action, edit.target);
      }
      continue;
    }
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const Signature& s = sources[i];
      if (const auto* p = std::get_if<PartialStyle>(&edit.target)) {
        if (s.is_speech() && p->matches(s.style())) hits.push_back(i);
      } else if (!s.is_speech() &&
                 s.label() == std::get<ClassLabel>(edit.target)) {
        hits.push_back(i);
      }
    }
    if (hits.size() != 1) {
      throw Error(ErrorCode::kUnresolvedDescriptor,
                  to_string(edit.target) + " matches " +
                      std::to_string(hits.size()) + " sources");
    }
    assign(hits.front(), edit.action, edit.target);
  }

  std::vector<Action> out;
  out.reserve(sources.size());
  for (const auto& a : assigned) out.push_back(a.value_or(fallback));
  return out;
}

}  // namespace soundedit
