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

#include <algorithm>
#include <string>

#include "soundedit/error.h"
#include "soundedit/rng.h"

namespace soundedit {

namespace {

// Sources addressable by an action vector are capped so that enumeration
// (4^N vectors) stays cheap.
constexpr int kMaxSources = 10;

bool all_are(std::span<const Action> v, Action a) {
  return std::all_of(v.begin(), v.end(), [a](Action x) { return x == a; });
}

struct Counts {
  int keep = 0, remove = 0, up = 0, down = 0;
};

Counts count(std::span<const Action> v) {
  Counts c;
  for (Action a : v) {
    switch (a) {
      case Action::kKeep: ++c.keep; break;
      case Action::kRemove: ++c.remove; break;
      case Action::kVolUp: ++c.up; break;
      case Action::kVolDown: ++c.down; break;
    }
  }
  return c;
}

// Single-target patterns within `group` given the rest of the vector.
// `others` must hold every action outside `group`.
std::optional<Task> single_target(std::span<const Action> group,
                                  std::span<const Action> others,
                                  bool speech) {
  if (group.empty()) return std::nullopt;
  Counts g = count(group);
  const int n = static_cast<int>(group.size());
  if (g.keep == 1 && g.remove == n - 1 && all_are(others, Action::kRemove)) {
    return speech ? Task::kTSE : Task::kTAE;
  }
  if (!all_are(others, Action::kKeep)) return std::nullopt;
  if (g.remove == 1 && g.keep == n - 1) return speech ? Task::kTSR : Task::kTAR;
  if (g.up == 1 && g.keep == n - 1) return speech ? Task::kTSUp : Task::kTAUp;
  if (g.down == 1 && g.keep == n - 1) {
    return speech ? Task::kTSDown : Task::kTADown;
  }
  return std::nullopt;
}

void check_sources(const Composition& comp) {
  comp.validate();
  if (comp.total() > kMaxSources) {
    throw Error(ErrorCode::kInvalidArgument,
                "at most " + std::to_string(kMaxSources) +
                    " sources are supported");
  }
}

std::vector<std::vector<Action>> all_nontrivial(const Composition& comp) {
  const int n = comp.total();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= kAllActions.size();
  std::vector<std::vector<Action>> out;
  out.reserve(total);
  std::vector<Action> v(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    // Most significant digit first so the list is lexicographic.
    for (int i = n - 1; i >= 0; --i) {
      v[i] = kAllActions[c % kAllActions.size()];
      c /= kAllActions.size();
    }
    if (all_are(v, Action::kKeep) || all_are(v, Action::kRemove)) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kTSE: return "TSE";
    case Task::kTSR: return "TSR";
    case Task::kTSUp: return "TS↑";
    case Task::kTSDown: return "TS↓";
    case Task::kTAE: return "TAE";
    case Task::kTAR: return "TAR";
    case Task::kTAUp: return "TA↑";
    case Task::kTADown: return "TA↓";
    case Task::kSE: return "SE";
    case Task::kSR: return "SR";
    case Task::kSUp: return "S↑";
    case Task::kSDown: return "S↓";
    case Task::kME: return "ME";
    case Task::kMVC: return "MVC";
    case Task::kMEVC: return "MEVC";
    case Task::kOVC: return "OVC";
  }
  return "?";
}

std::string_view task_ascii(Task task) {
  switch (task) {
    case Task::kTSUp: return "TSUp";
    case Task::kTSDown: return "TSDown";
    case Task::kTAUp: return "TAUp";
    case Task::kTADown: return "TADown";
    case Task::kSUp: return "SUp";
    case Task::kSDown: return "SDown";
    default: return task_name(task);
  }
}

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (name == task_name(t) || name == task_ascii(t)) return t;
  }
  return std::nullopt;
}

bool is_extraction_family(Task task) {
  switch (task) {
    case Task::kTSE:
    case Task::kTSR:
    case Task::kTAE:
    case Task::kTAR:
    case Task::kSE:
    case Task::kSR:
    case Task::kME:
      return true;
    default:
      return false;
  }
}

void Composition::validate() const {
  if (n_speech < 0 || n_audio < 0 || total() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "composition needs non-negative counts and at least two "
                "sources, got " +
                    std::to_string(n_speech) + "," + std::to_string(n_audio));
  }
}

Task classify(std::span<const Action> actions, const Composition& comp) {
  comp.validate();
  if (static_cast<int>(actions.size()) != comp.total()) {
    throw Error(ErrorCode::kInvalidArgument,
                "action vector length " + std::to_string(actions.size()) +
                    " does not match composition size " +
                    std::to_string(comp.total()));
  }
  if (all_are(actions, Action::kKeep) || all_are(actions, Action::kRemove)) {
    throw Error(ErrorCode::kTrivialEdit,
                "identity and silence are not edits: " +
                    format_action_vector(actions));
  }
  const auto speech = actions.first(comp.n_speech);
  const auto audio = actions.subspan(comp.n_speech);

  if (all_are(actions, Action::kVolUp) || all_are(actions, Action::kVolDown)) {
    return Task::kOVC;
  }
  if (all_are(speech, Action::kKeep) && all_are(audio, Action::kRemove)) {
    return Task::kSE;
  }
  if (all_are(speech, Action::kRemove) && all_are(audio, Action::kKeep)) {
    return Task::kSR;
  }
  const bool s_up = all_are(speech, Action::kVolUp);
  const bool s_down = all_are(speech, Action::kVolDown);
  const bool s_keep = all_are(speech, Action::kKeep);
  const bool a_up = all_are(audio, Action::kVolUp);
  const bool a_down = all_are(audio, Action::kVolDown);
  const bool a_keep = all_are(audio, Action::kKeep);
  if ((s_up && a_keep) || (s_keep && a_down) || (s_up && a_down)) {
    return Task::kSUp;
  }
  if ((s_down && a_keep) || (s_keep && a_up) || (s_down && a_up)) {
    return Task::kSDown;
  }
  if (auto t = single_target(speech, audio, /*speech=*/true)) return *t;
  if (auto t = single_target(audio, speech, /*speech=*/false)) return *t;

  const Counts c = count(actions);
  if (c.up == 0 && c.down == 0) return Task::kME;
  if (c.remove == 0) return Task::kMVC;
  return Task::kMEVC;
}

std::vector<std::vector<Action>> enumerate_edits(Task task,
                                                 const Composition& comp) {
  check_sources(comp);
  std::vector<std::vector<Action>> out;
  for (auto& v : all_nontrivial(comp)) {
    if (classify(v, comp) == task) out.push_back(std::move(v));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kUndefinedTask,
                std::string(task_name(task)) + " is not defined for " +
                    std::to_string(comp.n_speech) + " speech + " +
                    std::to_string(comp.n_audio) + " audio");
  }
  return out;
}

std::map<Task, std::size_t> count_table(const Composition& comp) {
  check_sources(comp);
  std::map<Task, std::size_t> table;
  for (Task t : kAllTasks) table[t] = 0;
  for (const auto& v : all_nontrivial(comp)) ++table[classify(v, comp)];
  return table;
}

bool is_defined(Task task, const Composition& comp) {
  return count_table(comp).at(task) > 0;
}

std::vector<Task> defined_tasks(const Composition& comp) {
  std::vector<Task> out;
  for (const auto& [task, n] : count_table(comp)) {
    if (n > 0) out.push_back(task);
  }
  return out;
}

std::pair<Task, std::vector<Action>> sample_edit(const Composition& comp,
                                                 std::uint64_t seed) {
  check_sources(comp);
  std::vector<std::vector<std::vector<Action>>> by_task(kNumTasks);
  for (auto& v : all_nontrivial(comp)) {
    by_task[static_cast<std::size_t>(classify(v, comp))].push_back(
        std::move(v));
  }
  std::vector<Task> tasks;
  for (Task t : kAllTasks) {
    if (!by_task[static_cast<std::size_t>(t)].empty()) tasks.push_back(t);
  }
  Rng rng(seed);
  const Task task = rng.pick(tasks);
  const auto& edits = by_task[static_cast<std::size_t>(task)];
  return {task, rng.pick(edits)};
}

}  // namespace soundedit
