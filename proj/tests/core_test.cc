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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;

TEST(Action, AlphaValues) {
  EXPECT_EQ(alpha(Action::kRemove), 0.0);
  EXPECT_EQ(alpha(Action::kKeep), 1.0);
  EXPECT_EQ(alpha(Action::kVolUp), 2.0);
  EXPECT_EQ(alpha(Action::kVolDown), 0.5);
  EXPECT_NEAR(20.0 * std::log10(alpha(Action::kVolUp)), 6.0206, 1e-4);
}

TEST(Action, AlphaInjective) {
  std::set<double> seen;
  for (Action a : kAllActions) seen.insert(alpha(a));
  EXPECT_EQ(seen.size(), kAllActions.size());
}

TEST(Action, ParseSymbolsAndAscii) {
  const auto a = parse_action_vector("0,↓,↑,1");
  const std::vector<Action> want = {Action::kRemove, Action::kVolDown,
                                    Action::kVolUp, Action::kKeep};
  EXPECT_EQ(a, want);
  EXPECT_EQ(parse_action_vector("0, d, u ,1"), want);
  EXPECT_EQ(format_action_vector(want), "0,↓,↑,1");
  EXPECT_EQ(format_action_vector(want, true), "0,d,u,1");
  EXPECT_EQ(error_of([] { parse_action_vector("0,x"); }),
            ErrorCode::kInvalidArgument);
}

TEST(ClassLabel, Normalizes) {
  EXPECT_EQ(ClassLabel("  Church   Bell ").str(), "church bell");
  EXPECT_EQ(ClassLabel("DOG"), ClassLabel("dog"));
  EXPECT_EQ(error_of([] { ClassLabel("   "); }), ErrorCode::kInvalidArgument);
}

TEST(Signature, EqualityIsVariantAndPayload) {
  const Signature a = testing::speaker(3);
  const Signature b = testing::speaker(3);
  const Signature c = testing::speaker(4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_NE(Signature(ClassLabel("dog")), a);
  EXPECT_EQ(Signature(ClassLabel("Dog")), Signature(ClassLabel("dog")));
}

TEST(ValidateInstruction, Examples) {
  const Signature spk = testing::speaker(0);
  const Signature dog = testing::audio("dog");
  EXPECT_EQ(error_of([&] {
              validate_instruction({{Action::kKeep, spk}, {Action::kRemove, spk}});
            }),
            ErrorCode::kDuplicateSignature);
  EXPECT_EQ(error_of([&] {
              validate_instruction({{Action::kKeep, spk}, {Action::kKeep, dog}});
            }),
            ErrorCode::kTrivialIdentity);
  EXPECT_EQ(error_of([&] {
              validate_instruction({{Action::kRemove, spk}, {Action::kRemove, dog}});
            }),
            ErrorCode::kTrivialSilence);
  EXPECT_EQ(error_of([&] { validate_instruction({{Action::kKeep, spk}}); }),
            ErrorCode::kInvalidArgument);
  const Instruction ok =
      validate_instruction({{Action::kKeep, spk}, {Action::kRemove, dog}});
  EXPECT_EQ(ok.size(), 2u);
}

// Exactly 4^N - 2 vectors survive validation for a fixed signature list.
TEST(ValidateInstruction, AcceptsAllButTwoVectors) {
  for (int n = 2; n <= 4; ++n) {
    const auto sigs = testing::signatures_for(n / 2, n - n / 2);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    std::size_t accepted = 0;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Edit> edits;
      std::size_t c = code;
      for (int i = 0; i < n; ++i) {
        edits.push_back({kAllActions[c % 4], sigs[i]});
        c /= 4;
      }
      if (!error_of([&] { validate_instruction(edits); })) ++accepted;
    }
    EXPECT_EQ(accepted, total - 2) << "N=" << n;
  }
}

TEST(PartialStyle, ProjectAndMatch) {
  const StyleVector s =
      testing::style(Gender::kMale, Level::kHigh, Level::kLow, Level::kNormal,
                     Emotion::kHappy);
  const std::uint8_t mask = attribute_bit(StyleAttribute::kGender) |
                            attribute_bit(StyleAttribute::kPitch);
  const PartialStyle p = PartialStyle::project(s, mask);
  EXPECT_EQ(p.attribute_count(), 2);
  EXPECT_TRUE(p.has(StyleAttribute::kGender));
  EXPECT_FALSE(p.has(StyleAttribute::kEmotion));
  EXPECT_TRUE(p.matches(s));
  StyleVector other = s;
  other.emotion = Emotion::kSad;
  EXPECT_TRUE(p.matches(other));
  other.pitch = Level::kLow;
  EXPECT_FALSE(p.matches(other));
  // Projection discards the unselected fields entirely.
  EXPECT_EQ(PartialStyle::project(s, mask),
            PartialStyle::project(
                testing::style(Gender::kMale, Level::kHigh, Level::kHigh,
                               Level::kHigh, Emotion::kSad),
                mask));
}

TEST(ResolveActions, ExtractionPhrasingRemovesTheRest) {
  const auto sigs = testing::signatures_for(2, 2);
  SimplifiedInstruction si;
  si.edits.push_back({Action::kKeep, ClassLabel("dog")});
  const std::vector<Action> want = {Action::kRemove, Action::kRemove,
                                    Action::kKeep, Action::kRemove};
  EXPECT_EQ(resolve_actions(si, sigs), want);
}

TEST(ResolveActions, OtherPhrasingKeepsTheRest) {
  const auto sigs = testing::signatures_for(2, 2);
  SimplifiedInstruction si;
  si.edits.push_back({Action::kVolUp, ClassLabel("dog")});
  si.edits.push_back({Action::kRemove, ClassLabel("church bell")});
  const std::vector<Action> want = {Action::kKeep, Action::kKeep,
                                    Action::kVolUp, Action::kRemove};
  EXPECT_EQ(resolve_actions(si, sigs), want);
}

TEST(ResolveActions, GroupsAndErrors) {
  const auto sigs = testing::signatures_for(2, 2);
  SimplifiedInstruction si;
  si.edits.push_back({Action::kKeep, SourceGroup::kAllSpeech});
  si.edits.push_back({Action::kRemove, SourceGroup::kAllAudio});
  const std::vector<Action> se = {Action::kKeep, Action::kKeep, Action::kRemove,
                                  Action::kRemove};
  EXPECT_EQ(resolve_actions(si, sigs), se);

  SimplifiedInstruction bad;
  bad.edits.push_back({Action::kKeep, ClassLabel("cat")});
  EXPECT_EQ(error_of([&] { resolve_actions(bad, sigs); }),
            ErrorCode::kUnresolvedDescriptor);

  SimplifiedInstruction clash;
  clash.edits.push_back({Action::kVolUp, SourceGroup::kAllAudio});
  clash.edits.push_back({Action::kRemove, ClassLabel("dog")});
  EXPECT_EQ(error_of([&] { resolve_actions(clash, sigs); }),
            ErrorCode::kConflictingEdits);

  EXPECT_EQ(error_of([&] { resolve_actions(SimplifiedInstruction{}, sigs); }),
            ErrorCode::kEmptyInstruction);
}

}  // namespace
}  // namespace soundedit
