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

// The sixteen editing tasks and the combinatorics of action vectors.
//
// Action vectors are positional: the first n_speech entries address speech
// sources and the remaining n_audio entries address audio sources.
//
// Classification precedence, first match wins:
//   OVC   every action is the same volume change
//   SE    speech all kept, audio all removed
//   SR    speech all removed, audio all kept
//   S↑    speech up and audio kept, speech kept and audio down, or both
//   S↓    the mirror image of S↑
//   TSE, TSR, TS↑, TS↓, TAE, TAR, TA↑, TA↓
//         single target: one source extracted (all others removed), or one
//         source removed / turned up / turned down (all others kept)
//   ME    only keep/remove present
//   MVC   only keep/up/down present
//   MEVC  everything else
// A task is defined for a composition iff at least one action vector
// classifies to it.

#ifndef SOUNDEDIT_TASKSPACE_H_
#define SOUNDEDIT_TASKSPACE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "soundedit/core.h"

namespace soundedit {

enum class Task : std::uint8_t {
  kTSE,
  kTSR,
  kTSUp,
  kTSDown,
  kTAE,
  kTAR,
  kTAUp,
  kTADown,
  kSE,
  kSR,
  kSUp,
  kSDown,
  kME,
  kMVC,
  kMEVC,
  kOVC,
};
inline constexpr int kNumTasks = 16;
inline constexpr std::array<Task, kNumTasks> kAllTasks = {
    Task::kTSE,  Task::kTSR, Task::kTSUp, Task::kTSDown, Task::kTAE, Task::kTAR,
    Task::kTAUp, Task::kTADown, Task::kSE, Task::kSR,    Task::kSUp, Task::kSDown,
    Task::kME,   Task::kMVC, Task::kMEVC, Task::kOVC};

// "TSE", "TS↑", ...
std::string_view task_name(Task task);
// ASCII form used in file formats: "TSE", "TSUp", ...
std::string_view task_ascii(Task task);
std::optional<Task> parse_task(std::string_view name);

// True for tasks whose edits only use keep/remove.
bool is_extraction_family(Task task);

struct Composition {
  int n_speech = 0;
  int n_audio = 0;

  int total() const { return n_speech + n_audio; }
  // Throws kInvalidArgument unless counts are non-negative and total >= 2.
  void validate() const;
  friend bool operator==(const Composition&, const Composition&) = default;
};

// Throws kInvalidArgument on a length mismatch, kTrivialEdit for the
// identity and silence vectors.
Task classify(std::span<const Action> actions, const Composition& comp);

// Every action vector classified as `task`, in lexicographic order of
// action codes. Throws kUndefinedTask when there are none.
std::vector<std::vector<Action>> enumerate_edits(Task task,
                                                 const Composition& comp);

bool is_defined(Task task, const Composition& comp);
std::vector<Task> defined_tasks(const Composition& comp);

// Counts for all sixteen tasks; undefined tasks map to zero.
std::map<Task, std::size_t> count_table(const Composition& comp);

// Uniform over the defined tasks, then uniform over the task's edits.
std::pair<Task, std::vector<Action>> sample_edit(const Composition& comp,
                                                 std::uint64_t seed);

}  // namespace soundedit

#endif  // SOUNDEDIT_TASKSPACE_H_
