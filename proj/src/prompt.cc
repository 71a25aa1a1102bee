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

#include "soundedit/prompt.h"

#include <algorithm>
#include <cctype>

#include "soundedit/error.h"
#include "soundedit/rng.h"

namespace soundedit {

namespace {

constexpr std::array<StyleAttribute, 3> kLevelAttributes = {
    StyleAttribute::kPitch, StyleAttribute::kTempo, StyleAttribute::kVolume};

// ---------------------------------------------------------------------------
// Tokens

struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool is_punct(char c) {
  return c == ',' || c == '.' || c == '?' || c == '!' || c == ';' || c == ':';
}

bool is_terminal(const Token& t) {
  return t.text == "." || t.text == "?" || t.text == "!";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_punct(c)) {
      out.push_back({std::string(1, c), i, i + 1});
      ++i;
    } else {
      const std::size_t start = i;
      std::string word;
      while (i < text.size() && !is_punct(text[i]) &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        word.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
      }
      out.push_back({std::move(word), start, i});
    }
  }
  return out;
}

std::vector<std::string> words_of(std::string_view phrase) {
  std::vector<std::string> out;
  for (auto& t : tokenize(phrase)) out.push_back(std::move(t.text));
  return out;
}

std::string sentence_key(std::string_view text) {
  std::vector<Token> toks = tokenize(text);
  while (!toks.empty() && is_terminal(toks.back())) toks.pop_back();
  std::string key;
  for (const auto& t : toks) {
    if (!key.empty()) key.push_back(' ');
    key += t.text;
  }
  return key;
}

// ---------------------------------------------------------------------------
// Rendering helpers

std::string join_list(const std::vector<std::string>& items) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? ", and " : ", ";
    out += items[i];
  }
  return out;
}

std::string render_speech(const PartialStyle& p, Rng& rng, const Lexicon& lex) {
  std::string out = "the ";
  for (StyleAttribute attr : {StyleAttribute::kEmotion, StyleAttribute::kGender}) {
    if (p.has(attr)) out += rng.pick(lex.value_phrases(attr, p.get(attr))) + " ";
  }
  out += rng.pick(lex.speaker_nouns());
  std::vector<std::string> levels;
  for (StyleAttribute attr : kLevelAttributes) {
    if (!p.has(attr)) continue;
    levels.push_back(rng.pick(lex.value_phrases(attr, p.get(attr))) + " " +
                     rng.pick(lex.attribute_nouns(attr)));
  }
  if (!levels.empty()) {
    out += " " + rng.pick(lex.characterizers()) + " ";
    out += levels.size() == 2 ? levels[0] + " and " + levels[1]
                              : join_list(levels);
  }
  return out;
}

std::string render_target(const PartialSignature& target, Rng& rng,
                          const Lexicon& lex) {
  if (const auto* p = std::get_if<PartialStyle>(&target)) {
    return render_speech(*p, rng, lex);
  }
  if (const auto* g = std::get_if<SourceGroup>(&target)) {
    return rng.pick(lex.group_phrases(*g));
  }
  return "the " + std::get<ClassLabel>(target).str() + " " +
         rng.pick(lex.audio_suffixes());
}

std::optional<Action> uniform_action(std::span<const Action> actions) {
  if (actions.empty()) return std::nullopt;
  for (Action a : actions) {
    if (a != actions.front()) return std::nullopt;
  }
  return actions.front();
}

// Speech and audio group actions, or nullopt when either group is mixed.
std::optional<std::pair<Action, Action>> group_pattern(
    std::span<const Action> speech, std::span<const Action> audio) {
  auto s = uniform_action(speech);
  auto a = uniform_action(audio);
  if (speech.empty() && audio.empty()) return std::nullopt;
  if (!speech.empty() && !s) return std::nullopt;
  if (!audio.empty() && !a) return std::nullopt;
  if (!s) s = a;
  if (!a) a = s;
  return std::make_pair(*s, *a);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> catalog,
         const Lexicon& lex)
      : text_(text), lex_(lex), toks_(tokenize(text)) {
    for (const auto& label : catalog) {
      auto w = words_of(label);
      if (!w.empty()) labels_.push_back({std::move(w), ClassLabel(label)});
    }
    for (Action a : kAllActions) {
      for (const auto& v : lex.verbs(a)) verbs_.push_back({words_of(v), a});
    }
    for (SourceGroup g : {SourceGroup::kAllSpeech, SourceGroup::kAllAudio}) {
      for (const auto& p : lex.group_phrases(g)) groups_.push_back({words_of(p), g});
    }
    for (StyleAttribute attr : {StyleAttribute::kGender, StyleAttribute::kEmotion}) {
      for (int c = 0; c < attribute_cardinality(attr); ++c) {
        for (const auto& p : lex.value_phrases(attr, c)) {
          adjectives_.push_back({words_of(p), {attr, c}});
        }
      }
    }
    for (StyleAttribute attr : kLevelAttributes) {
      for (int c = 0; c < attribute_cardinality(attr); ++c) {
        for (const auto& lv : lex.value_phrases(attr, c)) {
          for (const auto& n : lex.attribute_nouns(attr)) {
            auto w = words_of(lv);
            for (auto& x : words_of(n)) w.push_back(std::move(x));
            levels_.push_back({std::move(w), {attr, c}});
          }
        }
      }
    }
    for (const auto& n : lex.speaker_nouns()) nouns_.push_back(words_of(n));
    for (const auto& n : lex.characterizers()) characterizers_.push_back(words_of(n));
    for (const auto& n : lex.audio_suffixes()) suffixes_.push_back(words_of(n));
  }

  SimplifiedInstruction run() {
    end_ = toks_.size();
    while (end_ > 0 && is_terminal(toks_[end_ - 1])) --end_;
    skip_prefix();
    if (pos_ >= end_) {
      throw ParseError(ErrorCode::kEmptyInstruction, "prompt names no edit", 0,
                       text_.size());
    }
    SimplifiedInstruction out;
    while (true) {
      const std::size_t clause_start = pos_;
      const Action action = parse_verb();
      PartialSignature target = parse_descriptor();
      add_edit(out, action, std::move(target), clause_start);
      if (pos_ >= end_) break;
      const std::size_t sep = pos_;
      skip_separator();
      if (pos_ == sep) {
        throw error_at(ErrorCode::kUnknownDescriptor,
                       "unexpected words after descriptor", pos_, end_);
      }
      if (pos_ >= end_) {
        throw ParseError(ErrorCode::kUnknownVerb, "dangling list separator",
                         toks_[sep].begin, text_.size() - toks_[sep].begin);
      }
    }
    return out;
  }

 private:
  template <typename T>
  struct Entry {
    std::vector<std::string> words;
    T value;
  };

  bool matches_at(std::size_t at, const std::vector<std::string>& words) const {
    if (words.empty() || at + words.size() > end_) return false;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (toks_[at + k].text != words[k]) return false;
    }
    return true;
  }

  template <typename T>
  const Entry<T>* longest(std::size_t at, const std::vector<Entry<T>>& table) const {
    const Entry<T>* best = nullptr;
    for (const auto& e : table) {
      if (matches_at(at, e.words) && (!best || e.words.size() > best->words.size())) {
        best = &e;
      }
    }
    return best;
  }

  std::size_t longest_plain(std::size_t at,
                            const std::vector<std::vector<std::string>>& table) const {
    std::size_t best = 0;
    for (const auto& w : table) {
      if (matches_at(at, w)) best = std::max(best, w.size());
    }
    return best;
  }

  ParseError error_at(ErrorCode code, const std::string& what, std::size_t from,
                      std::size_t to) const {
    if (from >= toks_.size()) {
      return ParseError(code, what, text_.size(), 0);
    }
    const std::size_t last = std::max(from, std::min(to, toks_.size()) - 1);
    const std::size_t b = toks_[from].begin;
    const std::size_t e = toks_[std::min(last, toks_.size() - 1)].end;
    return ParseError(code, what + ": '" + std::string(text_.substr(b, e - b)) + "'",
                      b, e - b);
  }

  // Index of the next list separator or the end.
  std::size_t phrase_end(std::size_t from) const {
    std::size_t k = from;
    while (k < end_ && toks_[k].text != "," && toks_[k].text != ";") ++k;
    return std::max(k, from + 1);
  }

  void skip_prefix() {
    static const std::vector<std::vector<std::string>> kPrefixes = {
        {"please"}, {"i", "want", "to"}, {"i", "would", "like", "to"},
        {"can", "you"}, {"could", "you"}, {"would", "you"}};
    pos_ += longest_plain(pos_, kPrefixes);
    if (matches_at(pos_, {"please"})) ++pos_;
  }

  // "," / "and" / ", and" / ";"
  void skip_separator() {
    if (pos_ < end_ && (toks_[pos_].text == "," || toks_[pos_].text == ";")) ++pos_;
    if (pos_ < end_ && toks_[pos_].text == "and") ++pos_;
  }

  Action parse_verb() {
    const auto* v = longest(pos_, verbs_);
    if (!v) {
      throw error_at(ErrorCode::kUnknownVerb, "no known action verb", pos_, pos_ + 1);
    }
    pos_ += v->words.size();
    return v->value;
  }

  PartialSignature parse_descriptor() {
    const std::size_t start = pos_;
    if (const auto* g = longest(pos_, groups_)) {
      pos_ += g->words.size();
      return g->value;
    }
    if (matches_at(pos_, {"the"})) ++pos_;
    if (auto speech = parse_speech()) return *speech;
    if (auto audio = parse_audio()) return *audio;
    throw error_at(ErrorCode::kUnknownDescriptor, "no known sound descriptor",
                   start, phrase_end(start));
  }

  std::optional<PartialSignature> parse_speech() {
    const std::size_t start = pos_;
    StyleVector values;
    std::uint8_t mask = 0;
    auto set = [&](std::pair<StyleAttribute, int> v, std::size_t at) {
      if (mask & attribute_bit(v.first)) {
        throw error_at(ErrorCode::kUnknownDescriptor,
                       std::string(attribute_name(v.first)) + " given twice",
                       at, phrase_end(at));
      }
      mask |= attribute_bit(v.first);
      values.set(v.first, v.second);
    };
    std::vector<std::pair<std::pair<StyleAttribute, int>, std::size_t>> adjs;
    std::size_t k = pos_;
    while (const auto* a = longest(k, adjectives_)) {
      adjs.push_back({a->value, k});
      k += a->words.size();
    }
    const std::size_t noun = longest_plain(k, nouns_);
    if (noun == 0) {
      pos_ = start;
      return std::nullopt;
    }
    for (const auto& [v, at] : adjs) set(v, at);
    pos_ = k + noun;
    if (std::size_t c = longest_plain(pos_, characterizers_)) {
      pos_ += c;
      const auto* first = longest(pos_, levels_);
      if (!first) {
        throw error_at(ErrorCode::kUnknownDescriptor, "expected a voice attribute",
                       pos_, phrase_end(pos_));
      }
      set(first->value, pos_);
      pos_ += first->words.size();
      // Continue only while another attribute follows the separator.
      while (pos_ < end_) {
        std::size_t j = pos_;
        if (toks_[j].text == ",") ++j;
        if (j < end_ && toks_[j].text == "and") ++j;
        if (j == pos_) break;
        const auto* next = longest(j, levels_);
        if (!next) break;
        set(next->value, j);
        pos_ = j + next->words.size();
      }
    }
    return PartialStyle::project(values, mask);
  }

  std::optional<PartialSignature> parse_audio() {
    const std::size_t start = pos_;
    if (!labels_.empty()) {
      const auto* hit = longest(pos_, labels_);
      if (!hit) return std::nullopt;
      pos_ += hit->words.size();
      pos_ += longest_plain(pos_, suffixes_);
      return hit->value;
    }
    // No catalog: the label runs up to a suffix that closes the descriptor.
    std::size_t stop = end_;
    for (std::size_t k = pos_ + 1; k < end_; ++k) {
      const std::size_t n = longest_plain(k, suffixes_);
      if (n == 0) continue;
      const std::size_t after = k + n;
      if (after == end_ || toks_[after].text == "," || toks_[after].text == ";" ||
          (toks_[after].text == "and" && after + 1 < end_ &&
           longest(after + 1, verbs_))) {
        stop = k;
        pos_ = after;
        break;
      }
    }
    if (stop == end_) {
      stop = pos_;
      while (stop < end_ && toks_[stop].text != "," && toks_[stop].text != ";" &&
             !(toks_[stop].text == "and" && stop + 1 < end_ &&
               longest(stop + 1, verbs_))) {
        ++stop;
      }
      pos_ = stop;
    }
    if (stop <= start) return std::nullopt;
    const std::size_t b = toks_[start].begin;
    const std::size_t e = toks_[stop - 1].end;
    return ClassLabel(text_.substr(b, e - b));
  }

  void add_edit(SimplifiedInstruction& out, Action action,
                PartialSignature target, std::size_t clause_start) {
    for (const auto& e : out.edits) {
      if (e.target != target) continue;
      if (e.action == action) return;
      throw error_at(ErrorCode::kConflictingEdits,
                     to_string(target) + " is given two different actions",
                     clause_start, pos_);
    }
    out.edits.push_back({action, std::move(target)});
  }

  std::string_view text_;
  const Lexicon& lex_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;

  std::vector<Entry<ClassLabel>> labels_;
  std::vector<Entry<Action>> verbs_;
  std::vector<Entry<SourceGroup>> groups_;
  std::vector<Entry<std::pair<StyleAttribute, int>>> adjectives_;
  std::vector<Entry<std::pair<StyleAttribute, int>>> levels_;
  std::vector<std::vector<std::string>> nouns_;
  std::vector<std::vector<std::string>> characterizers_;
  std::vector<std::vector<std::string>> suffixes_;
};

}  // namespace

std::string_view template_name(TemplateId id) {
  switch (id) {
    case TemplateId::kPlease: return "please";
    case TemplateId::kIWantTo: return "i-want-to";
    case TemplateId::kCanYou: return "can-you";
  }
  return "";
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kTemplate: return "template";
    case Provenance::kSpecialGeneric: return "special-generic";
    case Provenance::kExternalRephrase: return "external-rephrase";
  }
  return "";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  for (Provenance p : {Provenance::kTemplate, Provenance::kSpecialGeneric,
                       Provenance::kExternalRephrase}) {
    if (provenance_name(p) == name) return p;
  }
  return std::nullopt;
}

std::uint8_t distinguishing_mask(std::span<const Signature> sources) {
  std::vector<StyleVector> styles;
  for (const auto& s : sources) {
    if (s.is_speech()) styles.push_back(s.style());
  }
  if (styles.size() <= 1) return attribute_bit(StyleAttribute::kGender);
  // Subsets by size, then lexicographically by attribute index.
  std::vector<std::uint8_t> order;
  for (unsigned m = 1; m <= kFullStyleMask; ++m) order.push_back(static_cast<std::uint8_t>(m));
  auto key = [](std::uint8_t m) {
    std::vector<int> idx;
    for (int a = 0; a < kNumStyleAttributes; ++a) {
      if (m & (1u << a)) idx.push_back(a);
    }
    return std::make_pair(idx.size(), idx);
  };
  std::sort(order.begin(), order.end(),
            [&](std::uint8_t a, std::uint8_t b) { return key(a) < key(b); });
  for (std::uint8_t m : order) {
    bool ok = true;
    for (std::size_t i = 0; i < styles.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < styles.size() && ok; ++j) {
        ok = PartialStyle::project(styles[i], m) != PartialStyle::project(styles[j], m);
      }
    }
    if (ok) return m;
  }
  throw Error(ErrorCode::kCannotDistinguish,
              "two speech sources share every style attribute");
}

SimplifiedInstruction simplify(const Instruction& instr, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<Signature> sigs = instr.signatures();
  const std::uint8_t mask = distinguishing_mask(sigs);
  bool keep_remove_only = true;
  for (const Edit& e : instr.edits()) {
    if (e.action != Action::kKeep && e.action != Action::kRemove) {
      keep_remove_only = false;
    }
  }
  const bool extraction = keep_remove_only && rng.bernoulli(0.5);
  SimplifiedInstruction out;
  for (const Edit& e : instr.edits()) {
    const bool retain = extraction ? e.action == Action::kKeep
                                   : e.action != Action::kKeep;
    if (!retain) continue;
    if (e.signature.is_speech()) {
      out.edits.push_back({e.action, PartialStyle::project(e.signature.style(), mask)});
    } else {
      out.edits.push_back({e.action, e.signature.label()});
    }
  }
  return out;
}

std::string render_descriptor(const PartialSignature& target,
                              std::uint64_t rng_seed, const Lexicon& lexicon) {
  Rng rng(rng_seed);
  return render_target(target, rng, lexicon);
}

Prompt render(const SimplifiedInstruction& simplified, TemplateId id,
              std::uint64_t seed, const Lexicon& lexicon) {
  if (simplified.edits.empty()) {
    throw Error(ErrorCode::kEmptyInstruction, "nothing to render");
  }
  Rng rng(seed);
  std::vector<SimplifiedEdit> edits = simplified.edits;
  rng.shuffle(edits);
  std::vector<std::string> clauses;
  for (const auto& e : edits) {
    std::string verb = rng.pick(lexicon.verbs(e.action));
    clauses.push_back(verb + " " + render_target(e.target, rng, lexicon));
  }
  const std::string body = join_list(clauses);
  switch (id) {
    case TemplateId::kPlease: return {"Please " + body + ".", Provenance::kTemplate};
    case TemplateId::kIWantTo: return {"I want to " + body + ".", Provenance::kTemplate};
    case TemplateId::kCanYou: return {"Can you " + body + "?", Provenance::kTemplate};
  }
  return {};
}

std::optional<Prompt> special_generic(std::span<const Action> actions,
                                      const Composition& comp,
                                      std::uint64_t seed,
                                      const Lexicon& lexicon) {
  if (actions.size() != static_cast<std::size_t>(comp.total()) ||
      comp.n_speech < 0 || comp.n_audio < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "action count does not match the composition");
  }
  const auto n_s = static_cast<std::size_t>(comp.n_speech);
  auto pattern = group_pattern(actions.subspan(0, n_s), actions.subspan(n_s));
  if (!pattern) return std::nullopt;
  const auto& phrases = lexicon.special(pattern->first, pattern->second);
  if (phrases.empty()) return std::nullopt;
  Rng rng(seed);
  return Prompt{rng.pick(phrases), Provenance::kSpecialGeneric};
}

SimplifiedInstruction parse(std::string_view text,
                            std::span<const std::string> catalog,
                            const Lexicon& lexicon) {
  const std::string key = sentence_key(text);
  if (key.empty()) {
    throw ParseError(ErrorCode::kEmptyInstruction, "prompt is empty", 0, text.size());
  }
  for (const auto& [pattern, phrases] : lexicon.all_special()) {
    for (const auto& p : phrases) {
      if (sentence_key(p) != key) continue;
      SimplifiedInstruction out;
      out.edits.push_back({pattern.first, SourceGroup::kAllSpeech});
      out.edits.push_back({pattern.second, SourceGroup::kAllAudio});
      return out;
    }
  }
  return Parser(text, catalog, lexicon).run();
}

GeneratedPrompt generate_prompt(const Instruction& instr, std::uint64_t seed,
                                const Lexicon& lexicon) {
  Rng rng(seed);
  GeneratedPrompt out;
  out.simplified = simplify(instr, derive_seed(seed, 1));
  std::vector<Action> speech, audio;
  for (const Edit& e : instr.edits()) {
    (e.signature.is_speech() ? speech : audio).push_back(e.action);
  }
  std::vector<Action> ordered = speech;
  ordered.insert(ordered.end(), audio.begin(), audio.end());
  const Composition comp{static_cast<int>(speech.size()),
                         static_cast<int>(audio.size())};
  auto special = special_generic(ordered, comp, derive_seed(seed, 2), lexicon);
  if (special && rng.bernoulli(kSpecialPromptProbability)) {
    auto pattern = group_pattern(speech, audio);
    out.simplified.edits = {{pattern->first, SourceGroup::kAllSpeech},
                            {pattern->second, SourceGroup::kAllAudio}};
    out.prompt = *special;
    return out;
  }
  const TemplateId id = kAllTemplates[rng.uniform_index(kAllTemplates.size())];
  out.template_id = id;
  out.prompt = render(out.simplified, id, derive_seed(seed, 3), lexicon);
  return out;
}

}  // namespace soundedit
