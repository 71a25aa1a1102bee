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

#ifndef SOUNDEDIT_TOOLS_COMMANDS_H_
#define SOUNDEDIT_TOOLS_COMMANDS_H_

#include <cstdint>

#include "CLI11.hpp"

namespace soundedit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
  bool json = false;
  std::uint64_t seed = 0;
};

// Each registers a subcommand whose callback stores its exit code in
// `status`.
void add_tasks_command(CLI::App& app, const GlobalOptions& global, int& status);
void add_make_catalog_command(CLI::App& app, const GlobalOptions& global, int& status);
void add_generate_command(CLI::App& app, const GlobalOptions& global, int& status);
void add_edit_command(CLI::App& app, const GlobalOptions& global, int& status);
void add_eval_command(CLI::App& app, const GlobalOptions& global, int& status);
void add_train_toy_command(CLI::App& app, const GlobalOptions& global, int& status);

// Exit code for an error escaping a command.
int exit_code_for(const std::exception& e);

}  // namespace soundedit::cli

#endif  // SOUNDEDIT_TOOLS_COMMANDS_H_
