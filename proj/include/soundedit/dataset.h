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

// Source catalogs, split assignment, manifest generation and synthesis of
// (input, target, prompt) triples. docs/formats.md describes the files.

#ifndef SOUNDEDIT_DATASET_H_
#define SOUNDEDIT_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soundedit/core.h"
#include "soundedit/error.h"
#include "soundedit/mixer.h"
#include "soundedit/prompt.h"
#include "soundedit/taskspace.h"
#include "soundedit/wav.h"

namespace soundedit {

class RephraseClient;

enum class Split : std::uint8_t { kTrain, kValid, kTest };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kValid,
                                                    Split::kTest};
std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view name);

struct CatalogEntry {
  std::string id;
  // Unit of split assignment: the speaker id for speech, the entry id for
  // audio.
  std::string entity;
  std::filesystem::path path;  // relative to the catalog root
  Signature signature;
  double duration = 0.0;  // seconds
  std::optional<Split> split_hint;
};

struct Catalog {
  std::filesystem::path root;
  std::vector<CatalogEntry> entries;

  const CatalogEntry& find(std::string_view id) const;  // throws kMissingFile
  // Distinct audio labels, sorted.
  std::vector<std::string> audio_labels() const;
};

// Labels that mark human voices in an audio catalog.
std::vector<std::string> default_voice_blocklist();

struct IngestOptions {
  std::vector<std::string> blocklist = default_voice_blocklist();
  // Strict ingestion stops at the first bad row with kBadMetadataRow;
  // lenient ingestion skips it and records why.
  bool strict = true;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  Catalog catalog;
  std::vector<RejectedRow> rejected;
};

// Reads `metadata` (a .json array of objects, or tab-separated text with a
// header row) and checks every referenced file under `root`. Throws
// kMissingFile, kBadMetadataRow (message starts with "line N:"),
// kEmptyCatalog.
IngestResult ingest(const std::filesystem::path& root,
                    const std::filesystem::path& metadata,
                    const IngestOptions& options = IngestOptions());

struct SplitRatios {
  double train = 1177;
  double valid = 50;
  double test = 100;
};

// entity -> split.
using SplitAssignment = std::map<std::string, Split>;

// Shuffles speech speakers and audio clips separately and cuts each list by
// `ratios` (train and valid rounded, test takes the rest). Entries whose
// entity carries a split hint keep it. Throws kTooFewEntities when a split
// of a non-empty kind would be empty.
SplitAssignment partition(const Catalog& catalog, std::uint64_t seed,
                          const SplitRatios& ratios = SplitRatios());

struct SourceRef {
  std::string entry;  // catalog id
  Signature signature;
  double snr_db = 0.0;
  std::uint64_t crop_seed = 0;
};

inline constexpr int kManifestVersion = 1;

struct ManifestRecord {
  std::string id;
  Split split = Split::kTrain;
  Composition composition;
  std::uint64_t seed = 0;  // per-record seed
  std::vector<SourceRef> sources;  // speech first
  std::vector<Action> actions;
  Task task = Task::kTSE;
  SimplifiedInstruction simplified;
  Prompt prompt;
  std::optional<TemplateId> template_id;
  // Filled in by synthesis.
  std::vector<double> gains;
  double rescale = 1.0;

  std::string input_path() const { return id + "/input.wav"; }
  std::string target_path() const { return id + "/target.wav"; }
  std::string prompt_path() const { return id + "/prompt.txt"; }
  std::string record_path() const { return id + "/record.json"; }
  std::string source_path(std::size_t i) const {
    return id + "/source" + std::to_string(i) + ".wav";
  }
};

std::string record_to_json(const ManifestRecord& record);
// Throws kInvalidArgument on malformed or wrong-version documents.
ManifestRecord record_from_json(std::string_view text);

// One record per line.
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestRecord> records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

struct GenerateSpec {
  std::map<Split, std::size_t> counts = {{Split::kTrain, 100}};
  Composition composition{2, 2};
  std::uint64_t seed = 0;
  double seconds = kClipSeconds;
};

inline constexpr int kMaxSourceDraws = 200;

// Per-record seed: derive_seed(derive_seed(master, split), index).
std::uint64_t record_seed(std::uint64_t master, Split split, std::size_t index);

// Throws kTooFewEntities when a split lacks enough sources of a kind and
// kExhaustedRetries when distinct signatures cannot be drawn.
std::vector<ManifestRecord> generate_manifest(const Catalog& catalog,
                                              const SplitAssignment& splits,
                                              const GenerateSpec& spec);

// Replaces template prompts with a rephrasing chosen by the record seed.
// Up to `concurrency` requests are in flight. Returns the number of
// records changed; kDisabled leaves every record untouched.
std::size_t rephrase_records(std::span<ManifestRecord> records,
                             RephraseClient& client, std::size_t concurrency = 4);

// Loads, resamples, crops and scales the record's sources. With
// `record.gains` empty the gains are computed from the stored levels.
MixturePair replay_record(const ManifestRecord& record, const Catalog& catalog,
                          double seconds = kClipSeconds);

struct SynthesisFailure {
  std::string id;
  ErrorCode code;
  std::string message;
};

struct SynthesisSummary {
  std::size_t requested = 0;
  std::size_t written = 0;
  std::vector<SynthesisFailure> failures;
  std::map<Task, std::size_t> task_histogram;  // successful records only
  std::map<Provenance, std::size_t> provenance_histogram;
};

struct SynthesisOptions {
  std::size_t workers = 1;
  WavFormat format = WavFormat::kFloat32;
  double seconds = kClipSeconds;
  bool write_sources = true;
};

// Writes per record: input.wav, target.wav, source<i>.wav, prompt.txt and
// record.json (the record with gains filled in). Record failures are
// collected, not thrown. Output does not depend on the worker count.
SynthesisSummary synthesize(std::span<const ManifestRecord> records,
                            const Catalog& catalog,
                            const std::filesystem::path& out_dir,
                            const SynthesisOptions& options = SynthesisOptions());

std::string summary_to_json(const SynthesisSummary& summary);

}  // namespace soundedit

#endif  // SOUNDEDIT_DATASET_H_
