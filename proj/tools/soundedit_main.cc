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

// soundedit: dataset generation, editing and scoring from the command line.
//
//   soundedit tasks --composition 2,2 --table
//   soundedit make-catalog --out cat
//   soundedit generate --catalog cat/metadata.json --out data --count 100
//   soundedit edit --record data/train-000000/record.json --editor psm --out y.wav
//   soundedit eval --est out --ref data --input data --per-task data/manifest.jsonl
//   soundedit train-toy --config toy.toml
//
// Options may also come from a TOML/INI file given with --config; command
// line flags win over the file, and the file over built-in defaults.

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "soundedit/error.h"

int main(int argc, char** argv) {
  using namespace soundedit::cli;
  CLI::App app{"Mixture-to-mixture sound editing toolkit", "soundedit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values");
  GlobalOptions global;
  app.add_flag("--json", global.json, "Print one JSON document instead of text");
  app.add_option("--seed", global.seed, "Master seed");

  int status = kExitOk;
  add_tasks_command(app, global, status);
  add_make_catalog_command(app, global, status);
  add_generate_command(app, global, status);
  add_edit_command(app, global, status);
  add_eval_command(app, global, status);
  add_train_toy_command(app, global, status);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return status;
}
