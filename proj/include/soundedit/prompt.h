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

// Instruction simplification, template prompts and the inverse parser.

#ifndef SOUNDEDIT_PROMPT_H_
#define SOUNDEDIT_PROMPT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soundedit/core.h"
#include "soundedit/lexicon.h"
#include "soundedit/taskspace.h"

namespace soundedit {

enum class TemplateId : std::uint8_t { kPlease, kIWantTo, kCanYou };
inline constexpr std::array<TemplateId, 3> kAllTemplates = {
    TemplateId::kPlease, TemplateId::kIWantTo, TemplateId::kCanYou};
std::string_view template_name(TemplateId id);

enum class Provenance : std::uint8_t { kTemplate, kSpecialGeneric, kExternalRephrase };
std::string_view provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

struct Prompt {
  std::string text;
  Provenance provenance = Provenance::kTemplate;
};

// Probability that a caller swaps in a group-level prompt when one exists.
inline constexpr double kSpecialPromptProbability = 0.5;

// Attribute mask shared by every speech source: the smallest subset that
// tells all speech styles apart, first in (gender, pitch, tempo, volume,
// emotion) order among subsets of that size. A lone speaker gets {gender}.
// Throws kCannotDistinguish when two speech styles are identical.
std::uint8_t distinguishing_mask(std::span<const Signature> sources);

// Drops the edits a listener would not need to hear. Keep/Remove-only edits
// are phrased either as extraction (Keeps retained) or removal (Removes
// retained) with equal probability; everything else loses its Keeps.
SimplifiedInstruction simplify(const Instruction& instr, std::uint64_t seed);

// Renders one descriptor, e.g. "the calm female speaker characterized by
// slow tempo" or "the dog sound". Synonyms are drawn from `rng_seed`.
std::string render_descriptor(const PartialSignature& target,
                              std::uint64_t rng_seed,
                              const Lexicon& lexicon = Lexicon::builtin());

Prompt render(const SimplifiedInstruction& simplified, TemplateId id,
              std::uint64_t seed, const Lexicon& lexicon = Lexicon::builtin());

// Group-level prompt for edits where all speech sources share one action and
// all audio sources share one action. Sources are speech first, as in
// `comp`. Returns nullopt when the pattern does not apply.
std::optional<Prompt> special_generic(std::span<const Action> actions,
                                      const Composition& comp,
                                      std::uint64_t seed,
                                      const Lexicon& lexicon = Lexicon::builtin());

// Inverse of render() and special_generic(). `catalog` lists known audio
// labels; when empty, an audio descriptor runs up to the "sound" suffix.
// Errors are ParseError with a byte span into `text`.
SimplifiedInstruction parse(std::string_view text,
                            std::span<const std::string> catalog = {},
                            const Lexicon& lexicon = Lexicon::builtin());

struct GeneratedPrompt {
  SimplifiedInstruction simplified;
  Prompt prompt;
  std::optional<TemplateId> template_id;
};

// simplify, then a special prompt with kSpecialPromptProbability when one
// applies, else a template chosen uniformly.
GeneratedPrompt generate_prompt(const Instruction& instr, std::uint64_t seed,
                                const Lexicon& lexicon = Lexicon::builtin());

}  // namespace soundedit

#endif  // SOUNDEDIT_PROMPT_H_
