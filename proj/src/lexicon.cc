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

#include "soundedit/lexicon.h"

#include <fstream>
#include <set>
#include <sstream>

#include "builtin_lexicon.h"
#include "json.hpp"
#include "soundedit/error.h"

namespace soundedit {

namespace {

using nlohmann::json;

constexpr int kMinVerbPhrases = 3;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "lexicon: " + what);
}

std::vector<std::string> phrase_list(const json& doc, const std::string& where) {
  if (!doc.is_array() || doc.empty()) {
    schema_error(where + " must be a non-empty array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : doc) {
    if (!item.is_string()) schema_error(where + " holds a non-string entry");
    std::string p = ClassLabel::normalize(item.get<std::string>());
    if (p.empty()) schema_error(where + " holds an empty phrase");
    out.push_back(std::move(p));
  }
  return out;
}

const json& member(const json& doc, const std::string& key,
                   const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) {
    schema_error("missing key '" + key + "' in " + where);
  }
  return doc.at(key);
}

std::optional<Action> action_from_key(std::string_view key) {
  for (Action a : kAllActions) {
    if (action_key(a) == key) return a;
  }
  return std::nullopt;
}

}  // namespace

std::string_view action_key(Action action) {
  switch (action) {
    case Action::kKeep: return "keep";
    case Action::kRemove: return "remove";
    case Action::kVolUp: return "up";
    case Action::kVolDown: return "down";
  }
  return "";
}

Lexicon Lexicon::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("not valid JSON: ") + e.what());
  }
  Lexicon lex;
  const json& version = member(doc, "version", "document");
  if (!version.is_number_integer()) schema_error("version must be an integer");
  lex.version_ = version.get<int>();

  const json& verbs = member(doc, "verbs", "document");
  for (Action a : kAllActions) {
    const std::string key(action_key(a));
    lex.verbs_[static_cast<std::size_t>(a)] =
        phrase_list(member(verbs, key, "verbs"), "verbs." + key);
  }
  lex.speaker_nouns_ = phrase_list(member(doc, "speaker_nouns", "document"),
                                   "speaker_nouns");
  lex.characterizers_ = phrase_list(member(doc, "characterizers", "document"),
                                    "characterizers");
  lex.audio_suffixes_ = phrase_list(member(doc, "audio_suffixes", "document"),
                                    "audio_suffixes");
  const json& groups = member(doc, "groups", "document");
  lex.groups_[0] = phrase_list(member(groups, "speech", "groups"), "groups.speech");
  lex.groups_[1] = phrase_list(member(groups, "audio", "groups"), "groups.audio");

  const json& attrs = member(doc, "attributes", "document");
  const json& nouns = member(doc, "attribute_nouns", "document");
  for (StyleAttribute attr : kAllStyleAttributes) {
    const std::string name(attribute_name(attr));
    const json& values = member(attrs, name, "attributes");
    auto& slot = lex.values_[static_cast<std::size_t>(attr)];
    for (int c = 0; c < attribute_cardinality(attr); ++c) {
      const std::string value(attribute_value_name(attr, c));
      slot.push_back(phrase_list(member(values, value, "attributes." + name),
                                 "attributes." + name + "." + value));
    }
    if (attr != StyleAttribute::kGender && attr != StyleAttribute::kEmotion) {
      lex.nouns_[static_cast<std::size_t>(attr)] =
          phrase_list(member(nouns, name, "attribute_nouns"),
                      "attribute_nouns." + name);
    }
  }

  if (doc.contains("special")) {
    for (const auto& [key, phrases] : doc.at("special").items()) {
      const auto slash = key.find('/');
      auto speech = action_from_key(key.substr(0, slash));
      auto audio = slash == std::string::npos
                       ? std::nullopt
                       : action_from_key(key.substr(slash + 1));
      if (!speech || !audio) {
        schema_error("special key '" + key +
                     "' must be <speech action>/<audio action>");
      }
      std::vector<std::string> list;
      for (const auto& p : phrases) {
        if (!p.is_string() || p.get<std::string>().empty()) {
          schema_error("special." + key + " holds a bad phrase");
        }
        list.push_back(p.get<std::string>());
      }
      lex.special_[{*speech, *audio}] = std::move(list);
    }
  }
  lex.validate();
  return lex;
}

void Lexicon::validate() const {
  std::map<std::string, Action> owner;
  for (Action a : kAllActions) {
    const auto& list = verbs(a);
    if (static_cast<int>(list.size()) < kMinVerbPhrases) {
      schema_error("verbs." + std::string(action_key(a)) + " needs at least " +
                   std::to_string(kMinVerbPhrases) + " phrases");
    }
    for (const auto& p : list) {
      auto [it, inserted] = owner.emplace(p, a);
      if (!inserted && it->second != a) {
        schema_error("verb phrase '" + p + "' serves two actions");
      }
    }
  }
  // Adjective slot: gender and emotion words share it.
  std::map<std::string, std::pair<StyleAttribute, int>> adjectives;
  for (StyleAttribute attr : {StyleAttribute::kGender, StyleAttribute::kEmotion}) {
    for (int c = 0; c < attribute_cardinality(attr); ++c) {
      for (const auto& p : value_phrases(attr, c)) {
        auto [it, inserted] = adjectives.emplace(p, std::make_pair(attr, c));
        if (!inserted && it->second != std::make_pair(attr, c)) {
          schema_error("adjective '" + p + "' is ambiguous");
        }
      }
    }
  }
  std::map<std::string, StyleAttribute> noun_owner;
  for (StyleAttribute attr : {StyleAttribute::kPitch, StyleAttribute::kTempo,
                              StyleAttribute::kVolume}) {
    std::map<std::string, int> level_owner;
    for (int c = 0; c < attribute_cardinality(attr); ++c) {
      for (const auto& p : value_phrases(attr, c)) {
        auto [it, inserted] = level_owner.emplace(p, c);
        if (!inserted && it->second != c) {
          schema_error("level word '" + p + "' is ambiguous for " +
                       std::string(attribute_name(attr)));
        }
      }
    }
    for (const auto& n : attribute_nouns(attr)) {
      auto [it, inserted] = noun_owner.emplace(n, attr);
      if (!inserted && it->second != attr) {
        schema_error("attribute noun '" + n + "' is ambiguous");
      }
    }
  }
  for (const auto& p : groups_[0]) {
    for (const auto& q : groups_[1]) {
      if (p == q) schema_error("group phrase '" + p + "' names both groups");
    }
  }
  std::set<std::string> seen;
  for (const auto& [key, list] : special_) {
    for (const auto& p : list) {
      if (!seen.insert(ClassLabel::normalize(p)).second) {
        schema_error("special phrasing '" + p + "' is listed twice");
      }
    }
  }
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = from_json(detail::kBuiltinLexiconJson);
  return lex;
}

const std::vector<std::string>& Lexicon::value_phrases(StyleAttribute attr,
                                                       int code) const {
  return values_[static_cast<std::size_t>(attr)].at(static_cast<std::size_t>(code));
}

const std::vector<std::string>& Lexicon::special(Action speech,
                                                 Action audio) const {
  static const std::vector<std::string> kNone;
  auto it = special_.find({speech, audio});
  return it == special_.end() ? kNone : it->second;
}

}  // namespace soundedit
