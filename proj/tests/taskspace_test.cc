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

#include "soundedit/taskspace.h"

#include <map>
#include <set>

#include <gtest/gtest.h>

#include "soundedit/rng.h"
#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;
constexpr Action R = Action::kRemove;
constexpr Action K = Action::kKeep;
constexpr Action U = Action::kVolUp;
constexpr Action D = Action::kVolDown;

std::size_t total(const std::map<Task, std::size_t>& table) {
  std::size_t n = 0;
  for (const auto& [t, c] : table) n += c;
  return n;
}

TEST(CountTable, TwoByTwoMatchesPublishedCounts) {
  const std::map<Task, std::size_t> want = {
      {Task::kTSE, 2},   {Task::kTSR, 2},  {Task::kTSUp, 2}, {Task::kTSDown, 2},
      {Task::kSE, 1},    {Task::kSR, 1},   {Task::kSUp, 3},  {Task::kSDown, 3},
      {Task::kTAE, 2},   {Task::kTAR, 2},  {Task::kTAUp, 2}, {Task::kTADown, 2},
      {Task::kME, 4},    {Task::kMVC, 64}, {Task::kMEVC, 160}, {Task::kOVC, 2}};
  const auto table = count_table({2, 2});
  EXPECT_EQ(table, want);
  EXPECT_EQ(total(table), 254u);
}

TEST(CountTable, SmallCompositionsCoverEverything) {
  EXPECT_EQ(total(count_table({1, 1})), 14u);
  EXPECT_EQ(total(count_table({2, 0})), 14u);
  EXPECT_EQ(total(count_table({2, 1})), 62u);
  EXPECT_EQ(total(count_table({1, 2})), 62u);
  EXPECT_EQ(total(count_table({3, 2})), 1022u);
}

TEST(Classify, Examples) {
  const Composition c{2, 2};
  EXPECT_EQ(classify(std::vector<Action>{R, D, U, K}, c), Task::kMEVC);
  EXPECT_EQ(classify(std::vector<Action>{K, K, R, R}, c), Task::kSE);
  EXPECT_EQ(classify(std::vector<Action>{U, U, U, U}, c), Task::kOVC);
  EXPECT_EQ(classify(std::vector<Action>{U, U, D, D}, c), Task::kSUp);
  EXPECT_EQ(classify(std::vector<Action>{U, D, K, K}, c), Task::kMVC);
  EXPECT_EQ(classify(std::vector<Action>{K, R, R, R}, c), Task::kTSE);
  EXPECT_EQ(classify(std::vector<Action>{R, R, K, R}, c), Task::kTAE);
  EXPECT_EQ(classify(std::vector<Action>{K, K, K, R}, c), Task::kTAR);
  EXPECT_EQ(classify(std::vector<Action>{K, R, K, R}, c), Task::kME);
  EXPECT_EQ(error_of([&] { classify(std::vector<Action>{K, K, K, K}, c); }),
            ErrorCode::kTrivialEdit);
  EXPECT_EQ(error_of([&] { classify(std::vector<Action>{R, R, R, R}, c); }),
            ErrorCode::kTrivialEdit);
  EXPECT_EQ(error_of([&] { classify(std::vector<Action>{K, R}, c); }),
            ErrorCode::kInvalidArgument);
}

TEST(Enumerate, RoundTripAndPartition) {
  for (const Composition c : {Composition{2, 2}, Composition{1, 1},
                              Composition{2, 1}, Composition{1, 2},
                              Composition{2, 0}, Composition{0, 2}}) {
    std::set<std::vector<Action>> seen;
    std::size_t n = 0;
    for (Task t : defined_tasks(c)) {
      for (const auto& v : enumerate_edits(t, c)) {
        EXPECT_EQ(classify(v, c), t);
        seen.insert(v);
        ++n;
      }
    }
    std::size_t all = 1;
    for (int i = 0; i < c.total(); ++i) all *= 4;
    EXPECT_EQ(n, seen.size()) << "lists overlap";
    EXPECT_EQ(seen.size(), all - 2);
  }
}

// n/a cells of the per-composition results table.
TEST(Defined, SmallCompositionPattern) {
  auto undefined = [](Composition c) {
    std::set<Task> out;
    for (Task t : kAllTasks) {
      if (!is_defined(t, c)) out.insert(t);
    }
    return out;
  };
  const std::set<Task> two_speech = {
      Task::kTSR, Task::kTAE,   Task::kTAR, Task::kTAUp, Task::kTADown,
      Task::kSE,  Task::kSR,    Task::kSUp, Task::kSDown, Task::kME};
  EXPECT_EQ(undefined({2, 0}), two_speech);
  const std::set<Task> two_audio = {
      Task::kTSE, Task::kTSR, Task::kTSUp, Task::kTSDown, Task::kTAR,
      Task::kSE,  Task::kSR,  Task::kSUp,  Task::kSDown,  Task::kME};
  EXPECT_EQ(undefined({0, 2}), two_audio);
  const std::set<Task> two_one = {Task::kTAE, Task::kTAR, Task::kTAUp,
                                  Task::kTADown, Task::kME};
  EXPECT_EQ(undefined({2, 1}), two_one);
  const std::set<Task> one_two = {Task::kTSE, Task::kTSR, Task::kTSUp,
                                  Task::kTSDown, Task::kME};
  EXPECT_EQ(undefined({1, 2}), one_two);
  EXPECT_TRUE(undefined({2, 2}).empty());
  EXPECT_EQ(error_of([] { enumerate_edits(Task::kTAE, {2, 0}); }),
            ErrorCode::kUndefinedTask);
}

TEST(SampleEdit, Deterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(sample_edit({2, 2}, seed), sample_edit({2, 2}, seed));
  }
}

TEST(SampleEdit, NeverUndefined) {
  const std::set<Task> banned = {Task::kTAE, Task::kTAR, Task::kTAUp,
                                 Task::kTADown, Task::kSE, Task::kSR};
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    const auto [task, v] = sample_edit({2, 0}, seed);
    EXPECT_FALSE(banned.count(task));
    EXPECT_EQ(classify(v, {2, 0}), task);
  }
}

// Uniform over tasks: every frequency within one percentage point of 1/16,
// and a chi-square statistic below the 0.1% critical value for 15 dof.
TEST(SampleEdit, UniformOverTasks) {
  constexpr int kDraws = 160000;
  std::map<Task, int> hist;
  for (int i = 0; i < kDraws; ++i) {
    ++hist[sample_edit({2, 2}, derive_seed(42, i)).first];
  }
  ASSERT_EQ(hist.size(), 16u);
  const double expected = kDraws / 16.0;
  double chi2 = 0.0;
  for (const auto& [t, n] : hist) {
    EXPECT_NEAR(n / static_cast<double>(kDraws), 1.0 / 16.0, 0.01)
        << task_name(t);
    chi2 += (n - expected) * (n - expected) / expected;
  }
  EXPECT_LT(chi2, 37.70);
}

TEST(TaskNames, RoundTrip) {
  for (Task t : kAllTasks) {
    EXPECT_EQ(parse_task(task_name(t)), t);
    EXPECT_EQ(parse_task(task_ascii(t)), t);
  }
  EXPECT_FALSE(parse_task("XYZ").has_value());
}

}  // namespace
}  // namespace soundedit
