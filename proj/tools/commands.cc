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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "soundedit/dataset.h"
#include "soundedit/editor.h"
#include "soundedit/film_net.h"
#include "soundedit/metrics.h"
#include "soundedit/rephrase.h"
#include "soundedit/rng.h"
#include "soundedit/synthetic.h"

namespace soundedit::cli {

using nlohmann::json;

namespace {

Error usage(const std::string& what) { return Error(ErrorCode::kInvalidArgument, what); }

Composition parse_composition(const std::string& text) {
  static const std::regex kForm(R"(\s*(\d+)\s*,\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, kForm)) {
    throw usage("composition must look like S,A (e.g. 2,2), got '" + text + "'");
  }
  const Composition c{std::stoi(m[1]), std::stoi(m[2])};
  c.validate();
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Clip load_clip(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kMissingFile, path.string());
  Clip c = read_wav(path);
  return c.rate == kSampleRate ? c : resample(c, kSampleRate);
}

// JSON mode prints one document; text mode prints the config as comments.
void emit(const GlobalOptions& g, const std::string& command, const json& config,
          const json& result, const std::string& text) {
  if (g.json) {
    std::cout << json{{"command", command}, {"config", config}, {"result", result}}.dump(2)
              << "\n";
    return;
  }
  std::cout << "# " << command << " " << config.dump() << "\n" << text;
}

// Left-justifies to `width` display columns; task names contain arrows.
std::string pad(std::string_view s, std::size_t width) {
  std::size_t cols = 0;
  for (unsigned char c : s) cols += (c & 0xc0) != 0x80;
  return std::string(s) + std::string(width > cols ? width - cols : 1, ' ');
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Signature from "audio:<label>" or
// "speech:gender=female,pitch=high,tempo=normal,volume=normal,emotion=happy".
Signature parse_signature(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "audio") return ClassLabel(body);
  if (kind != "speech") throw usage("signature must start with speech: or audio:");
  StyleVector s;
  std::uint8_t seen = 0;
  std::istringstream in(body);
  std::string pair;
  while (std::getline(in, pair, ',')) {
    const std::size_t eq = pair.find('=');
    bool ok = false;
    for (StyleAttribute a : kAllStyleAttributes) {
      if (eq == std::string::npos || attribute_name(a) != pair.substr(0, eq)) continue;
      const auto code = parse_attribute_value(a, pair.substr(eq + 1));
      if (!code) break;
      s.set(a, *code);
      seen |= attribute_bit(a);
      ok = true;
    }
    if (!ok) throw usage("bad style attribute '" + pair + "'");
  }
  if (seen != kFullStyleMask) throw usage("speech signature needs all five attributes");
  return s;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_parse_error(const ParseError& e, const std::string& text) {
  std::cerr << "error: " << e.what() << "\n  " << text << "\n  "
            << std::string(std::min(e.offset(), text.size()), ' ')
            << std::string(std::max<std::size_t>(1, e.length()), '^') << "\n";
}

}  // namespace

int exit_code_for(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return kExitFailure;
  if (dynamic_cast<const ParseError*>(&e)) return kExitUsage;
  switch (err->code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDuplicateSignature:
    case ErrorCode::kTrivialIdentity:
    case ErrorCode::kTrivialSilence:
    case ErrorCode::kTrivialEdit:
    case ErrorCode::kUndefinedTask:
    case ErrorCode::kCannotDistinguish:
    case ErrorCode::kUnknownVerb:
    case ErrorCode::kUnknownDescriptor:
    case ErrorCode::kConflictingEdits:
    case ErrorCode::kEmptyInstruction:
    case ErrorCode::kUnresolvedDescriptor:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

// ---------------------------------------------------------------- tasks

void add_tasks_command(CLI::App& app, const GlobalOptions& global, int& status) {
  struct Opts {
    std::string composition = "2,2";
    bool table = false;
    bool symbols = false;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("tasks", "Count or list the edits of every task");
  sub->add_option("--composition", opts->composition, "speech,audio source counts");
  sub->add_flag("--table", opts->table, "Print only the per-task count table");
  sub->add_flag("--symbols", opts->symbols, "Write actions with arrow symbols");
  sub->callback([opts, &global, &status] {
    const Composition comp = parse_composition(opts->composition);
    const auto counts = count_table(comp);
    json config = {{"composition", opts->composition}, {"table", opts->table},
                   {"symbols", opts->symbols}, {"seed", global.seed}};
    json jcounts = json::object(), jedits = json::object();
    std::ostringstream text;
    std::size_t total = 0;
    text << std::left << std::setw(8) << "task" << "count\n";
    for (Task t : kAllTasks) {
      const std::string key(task_ascii(t));
      const std::size_t n = counts.at(t);
      total += n;
      const bool defined = is_defined(t, comp);
      jcounts[key] = defined ? json(n) : json(nullptr);
      text << pad(task_name(t), 8) << (defined ? std::to_string(n) : "n/a") << "\n";
    }
    text << std::setw(8) << "total" << total << "\n";
    if (!opts->table) {
      for (Task t : defined_tasks(comp)) {
        json list = json::array();
        for (const auto& v : enumerate_edits(t, comp)) {
          const std::string a = format_action_vector(v, !opts->symbols);
          list.push_back(a);
          text << pad(task_name(t), 8) << a << "\n";
        }
        jedits[std::string(task_ascii(t))] = list;
      }
    }
    json result = {{"composition", {comp.n_speech, comp.n_audio}},
                   {"counts", jcounts},
                   {"total", total}};
    if (!opts->table) result["edits"] = jedits;
    emit(global, "tasks", config, result, text.str());
    status = kExitOk;
  });
}

// --------------------------------------------------------- make-catalog

void add_make_catalog_command(CLI::App& app, const GlobalOptions& global, int& status) {
  auto opts = std::make_shared<SyntheticCatalogOptions>();
  auto out = std::make_shared<std::string>();
  CLI::App* sub =
      app.add_subcommand("make-catalog", "Write the generated demo source catalog");
  sub->add_option("--out", *out, "Output directory")->required();
  sub->add_option("--speakers", opts->speakers, "Number of speakers");
  sub->add_option("--utterances", opts->utterances, "Utterances per speaker");
  sub->add_option("--clips-per-label", opts->clips_per_label, "Audio clips per label");
  sub->callback([opts, out, &global, &status] {
    opts->seed = global.seed;
    const auto meta = write_synthetic_catalog(*out, *opts);
    const json config = {{"out", *out}, {"speakers", opts->speakers},
                         {"utterances", opts->utterances},
                         {"clips_per_label", opts->clips_per_label}, {"seed", global.seed}};
    const std::size_t n = opts->speakers * opts->utterances +
                          synthetic_labels().size() * opts->clips_per_label;
    emit(global, "make-catalog", config, {{"metadata", meta.string()}, {"entries", n}},
         "wrote " + std::to_string(n) + " entries, metadata " + meta.string() + "\n");
    status = kExitOk;
  });
}

// ------------------------------------------------------------- generate

void add_generate_command(CLI::App& app, const GlobalOptions& global, int& status) {
  struct Opts {
    std::string catalog, out, composition = "2,2", format = "float32";
    std::size_t count = 100, valid_count = 0, test_count = 0, workers = 1;
    std::size_t rephrase_concurrency = 4;
    bool rephrase = false, rephrase_mock = false, lenient = false, no_sources = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("generate", "Build a dataset from a source catalog");
  sub->add_option("--catalog", o->catalog, "Catalog metadata (.json or .tsv)")->required();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--count", o->count, "Training records");
  sub->add_option("--valid-count", o->valid_count, "Validation records");
  sub->add_option("--test-count", o->test_count, "Test records");
  sub->add_option("--composition", o->composition, "speech,audio source counts");
  sub->add_option("--workers", o->workers, "Synthesis threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", o->format, "WAV sample format")
      ->check(CLI::IsMember({"float32", "pcm16"}));
  sub->add_flag("--rephrase", o->rephrase,
                std::string("Rephrase template prompts through ") + kRephraseEndpointEnv);
  sub->add_flag("--rephrase-mock", o->rephrase_mock, "Use the offline rephraser");
  sub->add_option("--rephrase-concurrency", o->rephrase_concurrency,
                  "Requests in flight")->check(CLI::PositiveNumber);
  sub->add_flag("--lenient", o->lenient, "Skip bad catalog rows instead of failing");
  sub->add_flag("--no-sources", o->no_sources, "Do not write per-source WAVs");
  sub->callback([o, &global, &status] {
    const json config = {
        {"catalog", o->catalog}, {"out", o->out}, {"count", o->count},
        {"valid_count", o->valid_count}, {"test_count", o->test_count},
        {"composition", o->composition}, {"workers", o->workers}, {"format", o->format},
        {"rephrase", o->rephrase}, {"rephrase_mock", o->rephrase_mock},
        {"rephrase_concurrency", o->rephrase_concurrency}, {"lenient", o->lenient},
        {"no_sources", o->no_sources}, {"seed", global.seed}};
    const std::filesystem::path meta = o->catalog;
    IngestOptions io;
    io.strict = !o->lenient;
    const IngestResult ing = ingest(meta.parent_path(), meta, io);
    for (const RejectedRow& r : ing.rejected) {
      std::cerr << "skipped catalog row: " << r.reason << "\n";
    }
    GenerateSpec spec;
    spec.counts.clear();
    if (o->count) spec.counts[Split::kTrain] = o->count;
    if (o->valid_count) spec.counts[Split::kValid] = o->valid_count;
    if (o->test_count) spec.counts[Split::kTest] = o->test_count;
    spec.composition = parse_composition(o->composition);
    spec.seed = global.seed;
    const SplitAssignment splits = partition(ing.catalog, derive_seed(global.seed, 0x5917));
    std::vector<ManifestRecord> records = generate_manifest(ing.catalog, splits, spec);

    std::size_t rephrased = 0;
    if (o->rephrase_mock) {
      MockRephraseClient mock;
      rephrased = rephrase_records(records, mock, o->rephrase_concurrency);
    } else if (o->rephrase) {
      HttpRephraseClient client(RephraseConfig::from_env());
      rephrased = rephrase_records(records, client, o->rephrase_concurrency);
      if (rephrased == 0) {
        std::cerr << "rephrasing unavailable, keeping template prompts\n";
      }
    }

    const std::filesystem::path out = o->out;
    std::filesystem::create_directories(out);
    SynthesisOptions so;
    so.workers = o->workers;
    so.format = o->format == "pcm16" ? WavFormat::kPcm16 : WavFormat::kFloat32;
    so.write_sources = !o->no_sources;
    const SynthesisSummary summary = synthesize(records, ing.catalog, out, so);
    write_manifest(out / "manifest.jsonl", records);
    json jsplits = json::object();
    for (const auto& [entity, split] : splits) jsplits[entity] = split_name(split);
    write_text(out / "splits.json", jsplits.dump(2) + "\n");
    const std::string sj = summary_to_json(summary);
    write_text(out / "summary.json", sj + "\n");

    json result = json::parse(sj);
    result["rephrased"] = rephrased;
    result["rejected_rows"] = ing.rejected.size();
    std::ostringstream text;
    text << "records " << summary.requested << ", written " << summary.written
         << ", failed " << summary.failures.size() << ", rephrased " << rephrased << "\n";
    for (const auto& [t, n] : summary.task_histogram) {
      text << "  " << pad(task_name(t), 6) << n << "\n";
    }
    for (const SynthesisFailure& f : summary.failures) {
      text << "failed " << f.id << ": " << f.message << "\n";
    }
    emit(global, "generate", config, result, text.str());
    status = summary.failures.empty() ? kExitOk : kExitFailure;
  });
}

// ----------------------------------------------------------------- edit

void add_edit_command(CLI::App& app, const GlobalOptions& global, int& status) {
  struct Opts {
    std::string mixture, record, actions, prompt, catalog, editor = "oracle", checkpoint;
    std::string out, dump_mask, metrics_out;
    std::vector<std::string> sources, signatures;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("edit", "Apply an edit to a mixture");
  sub->add_option("--mixture", o->mixture, "Input mixture WAV");
  sub->add_option("--sources", o->sources, "Source WAVs, speech first");
  sub->add_option("--signatures", o->signatures,
                  "Per-source signatures: audio:<label> or speech:gender=..,pitch=..,"
                  "tempo=..,volume=..,emotion=..");
  sub->add_option("--record", o->record,
                  "record.json from a generated dataset; fills mixture, sources, "
                  "signatures and prompt");
  auto* acts = sub->add_option("--actions", o->actions, "Action vector, e.g. 0,d,u,1");
  sub->add_option("--prompt", o->prompt, "Text instruction")->excludes(acts);
  sub->add_option("--catalog", o->catalog, "Comma-separated audio labels for the parser");
  sub->add_option("--editor", o->editor, "oracle, psm, irm or film")
      ->check(CLI::IsMember({"oracle", "psm", "irm", "film"}));
  sub->add_option("--checkpoint", o->checkpoint, "Network checkpoint for --editor film");
  sub->add_option("--out", o->out, "Edited WAV")->required();
  sub->add_option("--dump-mask", o->dump_mask,
                  "Path prefix for mask exports (.csv, .pgm, .mel.csv, .mel.pgm)");
  sub->add_option("--metrics-out", o->metrics_out, "Also write metrics JSON here");
  sub->callback([o, &global, &status] {
    json config = {{"mixture", o->mixture}, {"sources", o->sources},
                   {"signatures", o->signatures}, {"record", o->record},
                   {"actions", o->actions}, {"prompt", o->prompt},
                   {"catalog", o->catalog}, {"editor", o->editor},
                   {"checkpoint", o->checkpoint}, {"out", o->out},
                   {"dump_mask", o->dump_mask}, {"metrics_out", o->metrics_out},
                   {"seed", global.seed}};
    std::vector<std::filesystem::path> source_paths(o->sources.begin(), o->sources.end());
    std::vector<Signature> sigs;
    for (const std::string& s : o->signatures) sigs.push_back(parse_signature(s));
    std::filesystem::path mixture_path = o->mixture;
    std::string prompt = o->prompt;
    if (!o->record.empty()) {
      const ManifestRecord r = record_from_json(read_text(o->record));
      const std::filesystem::path dir = std::filesystem::path(o->record).parent_path();
      if (mixture_path.empty()) mixture_path = dir / "input.wav";
      if (source_paths.empty()) {
        for (std::size_t k = 0; k < r.sources.size(); ++k) {
          source_paths.push_back(dir / ("source" + std::to_string(k) + ".wav"));
        }
      }
      if (sigs.empty()) {
        for (const SourceRef& s : r.sources) sigs.push_back(s.signature);
      }
      if (o->actions.empty() && prompt.empty()) prompt = r.prompt.text;
    }
    if (!sigs.empty() && !source_paths.empty() && sigs.size() != source_paths.size()) {
      throw usage("--signatures and --sources differ in length");
    }
    std::vector<Clip> sources;
    for (const auto& p : source_paths) sources.push_back(load_clip(p));
    if (mixture_path.empty() && sources.empty()) {
      throw usage("need --mixture, --sources or --record");
    }
    const Clip x = mixture_path.empty() ? mix(sources) : load_clip(mixture_path);
    if (!sources.empty()) {
      const Clip sum = mix(sources);
      if (sum.size() != x.size()) throw usage("mixture and sources differ in length");
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, std::abs(sum.samples[i] - x.samples[i]));
      }
      if (worst > 1e-4 * std::max(1.0, peak(x.samples))) {
        throw usage("mixture is not the sum of the sources (max deviation " +
                    std::to_string(worst) + ")");
      }
    }
    std::optional<Composition> comp;
    if (!sigs.empty()) {
      const auto n_s = std::count_if(sigs.begin(), sigs.end(),
                                     [](const Signature& s) { return s.is_speech(); });
      comp = Composition{static_cast<int>(n_s), static_cast<int>(sigs.size() - n_s)};
    }

    // Actions and the simplified instruction.
    std::vector<Action> actions;
    std::optional<SimplifiedInstruction> simplified;
    if (!o->actions.empty()) {
      actions = parse_action_vector(o->actions);
    } else if (!prompt.empty()) {
      if (sigs.empty()) throw usage("--prompt needs --signatures or --record");
      std::vector<std::string> labels = split_csv(o->catalog);
      if (labels.empty()) {
        for (const Signature& s : sigs) {
          if (!s.is_speech()) labels.push_back(s.label().str());
        }
      }
      try {
        simplified = parse(prompt, labels);
        actions = resolve_actions(*simplified, sigs);
      } catch (const ParseError& e) {
        print_parse_error(e, prompt);
        if (global.json) {
          std::cout << json{{"error",
                             {{"code", error_code_name(e.code())}, {"message", e.what()},
                              {"offset", e.offset()}, {"length", e.length()}}}}
                           .dump(2)
                    << "\n";
        }
        status = kExitUsage;
        return;
      }
    } else {
      throw usage("need --actions or --prompt");
    }
    const std::size_t n = sources.empty() ? sigs.size() : sources.size();
    if (n && actions.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "action vector has " + std::to_string(actions.size()) + " entries for " +
                      std::to_string(n) + " sources");
    }
    if (!simplified && !sigs.empty()) {
      std::vector<Edit> edits;
      for (std::size_t k = 0; k < sigs.size(); ++k) edits.push_back({actions[k], sigs[k]});
      simplified = simplify(validate_instruction(edits), global.seed);
    }

    Clip y_hat;
    std::optional<EditingMask> mask;
    bool stft_mask = true;
    if (o->editor == "film") {
      if (o->checkpoint.empty()) throw usage("--editor film needs --checkpoint");
      if (!simplified) throw usage("--editor film needs --signatures or --record");
      const FilmMaskNet net = FilmMaskNet::load(o->checkpoint);
      const auto z = embed_instruction(*simplified, net.config().embed_dim);
      FilmOutput f = net.forward(x, z);
      y_hat = std::move(f.output);
      mask = std::move(f.masks[0]);
      stft_mask = false;
    } else {
      if (sources.empty()) throw usage("--editor " + o->editor + " needs source WAVs");
      const Clip target = target_mixture(sources, actions);
      if (o->editor == "oracle") {
        y_hat = oracle_edit(sources, actions);
        if (!o->dump_mask.empty()) mask = ideal_mask(x, target, MaskKind::kPsm);
      } else {
        mask = ideal_mask(x, target, o->editor == "psm" ? MaskKind::kPsm : MaskKind::kIrm);
        y_hat = mask_edit(x, *mask);
      }
    }
    write_wav(o->out, y_hat);
    if (!o->dump_mask.empty() && mask) {
      const std::string p = o->dump_mask;
      write_grid_csv(p + ".csv", mask->gains);
      write_grid_pgm(p + ".pgm", mask->gains);
      if (stft_mask) {
        const Grid mel = mel_mask(*mask, kSampleRate);
        write_grid_csv(p + ".mel.csv", mel);
        write_grid_pgm(p + ".mel.pgm", mel);
      }
    }

    json metrics = {{"editor", o->editor}, {"output", o->out},
                    {"actions", format_action_vector(actions, true)}};
    if (simplified) metrics["instruction"] = to_string(*simplified);
    if (comp) metrics["task"] = task_ascii(classify(actions, *comp));
    std::ostringstream text;
    text << "wrote " << o->out << "\n";
    if (!sources.empty()) {
      const Clip y = target_mixture(sources, actions);
      const MetricValue out_snr = snr(y_hat, y);
      const MetricValue in_snr = snr(x, y);
      const MetricValue gain = out_snr - in_snr;
      metrics["snr_db"] = out_snr.db;
      metrics["input_snr_db"] = in_snr.db;
      metrics["snri_db"] = gain.db;
      metrics["clamped"] = !gain.finite;
      text << "SNR  " << fixed(out_snr.db) << " dB" << (out_snr.finite ? "" : " (clamped)")
           << "\nSNRi " << fixed(gain.db) << " dB\n";
    }
    if (!o->metrics_out.empty()) write_text(o->metrics_out, metrics.dump(2) + "\n");
    emit(global, "edit", config, metrics, text.str());
    status = kExitOk;
  });
}

// ----------------------------------------------------------------- eval

namespace {

// Linear interpolation between order statistics.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct EvalRow {
  std::string key;
  std::optional<Task> task;
  MetricValue snr_out, snr_in, snri;
};

json aggregate(const std::vector<const EvalRow*>& rows) {
  std::vector<double> g;
  std::size_t improved = 0, clamped = 0;
  double sum = 0.0;
  for (const EvalRow* r : rows) {
    g.push_back(r->snri.db);
    sum += r->snri.db;
    improved += r->snri.db > 0.0;
    clamped += !r->snri.finite;
  }
  return {{"n", rows.size()},
          {"mean_snri_db", sum / static_cast<double>(rows.size())},
          {"q25", quantile(g, 0.25)},
          {"q50", quantile(g, 0.5)},
          {"q75", quantile(g, 0.75)},
          {"improved_fraction", static_cast<double>(improved) / rows.size()},
          {"clamped", clamped}};
}

}  // namespace

void add_eval_command(CLI::App& app, const GlobalOptions& global, int& status) {
  struct Opts {
    std::string est, ref, input, per_task;
    std::string est_name = "output.wav", ref_name = "target.wav", input_name = "input.wav";
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand("eval", "Score edited outputs against targets");
  sub->add_option("--est", o->est, "Directory of edited outputs")->required();
  sub->add_option("--ref", o->ref, "Directory of targets")->required();
  sub->add_option("--input", o->input, "Directory of unprocessed inputs")->required();
  sub->add_option("--per-task", o->per_task,
                  "manifest.jsonl; pairs files per record id and groups by task");
  sub->add_option("--est-name", o->est_name, "Per-record output file name");
  sub->add_option("--ref-name", o->ref_name, "Per-record target file name");
  sub->add_option("--input-name", o->input_name, "Per-record input file name");
  sub->callback([o, &global, &status] {
    const json config = {{"est", o->est}, {"ref", o->ref}, {"input", o->input},
                         {"per_task", o->per_task}, {"est_name", o->est_name},
                         {"ref_name", o->ref_name}, {"input_name", o->input_name},
                         {"seed", global.seed}};
    struct Triple {
      std::string key;
      std::optional<Task> task;
      std::filesystem::path est, ref, input;
    };
    std::vector<Triple> triples;
    if (!o->per_task.empty()) {
      for (const ManifestRecord& r : read_manifest(o->per_task)) {
        triples.push_back({r.id, r.task, std::filesystem::path(o->est) / r.id / o->est_name,
                           std::filesystem::path(o->ref) / r.id / o->ref_name,
                           std::filesystem::path(o->input) / r.id / o->input_name});
      }
    } else {
      if (!std::filesystem::is_directory(o->est)) {
        throw Error(ErrorCode::kMissingFile, o->est + " is not a directory");
      }
      for (const auto& f : std::filesystem::recursive_directory_iterator(o->est)) {
        if (!f.is_regular_file() || f.path().extension() != ".wav") continue;
        const auto rel = std::filesystem::relative(f.path(), o->est);
        triples.push_back({rel.generic_string(), std::nullopt, f.path(),
                           std::filesystem::path(o->ref) / rel,
                           std::filesystem::path(o->input) / rel});
      }
      std::sort(triples.begin(), triples.end(),
                [](const Triple& a, const Triple& b) { return a.key < b.key; });
    }
    if (triples.empty()) throw Error(ErrorCode::kMissingPair, "no files to evaluate");
    std::vector<EvalRow> rows;
    for (const Triple& t : triples) {
      for (const auto& p : {t.est, t.ref, t.input}) {
        if (!std::filesystem::exists(p)) {
          throw Error(ErrorCode::kMissingPair, t.key + ": missing " + p.string());
        }
      }
      const Clip e = load_clip(t.est), r = load_clip(t.ref), x = load_clip(t.input);
      const MetricValue so = snr(e, r), si = snr(x, r);
      rows.push_back({t.key, t.task, so, si, so - si});
    }

    std::vector<const EvalRow*> all;
    std::map<Task, std::vector<const EvalRow*>> by_task;
    json items = json::array();
    for (const EvalRow& r : rows) {
      all.push_back(&r);
      if (r.task) by_task[*r.task].push_back(&r);
      json j = {{"key", r.key}, {"snr_db", r.snr_out.db}, {"input_snr_db", r.snr_in.db},
                {"snri_db", r.snri.db}, {"clamped", !r.snri.finite}};
      if (r.task) j["task"] = task_ascii(*r.task);
      items.push_back(j);
    }
    json result = {{"overall", aggregate(all)}, {"items", items}};
    std::ostringstream text;
    text << std::left << std::setw(8) << "task" << std::right << std::setw(6) << "n"
         << std::setw(10) << "mean" << std::setw(10) << "q25" << std::setw(10) << "q50"
         << std::setw(10) << "q75" << std::setw(10) << "improved" << "\n";
    auto line = [&](const std::string& name, const json& a) {
      text << pad(name, 8) << std::right << std::setw(6)
           << a["n"].get<std::size_t>() << std::setw(10)
           << fixed(a["mean_snri_db"].get<double>()) << std::setw(10)
           << fixed(a["q25"].get<double>()) << std::setw(10) << fixed(a["q50"].get<double>())
           << std::setw(10) << fixed(a["q75"].get<double>()) << std::setw(10)
           << fixed(a["improved_fraction"].get<double>(), 3) << "\n";
    };
    if (!by_task.empty()) {
      json tasks = json::object();
      for (const auto& [t, list] : by_task) {
        tasks[std::string(task_ascii(t))] = aggregate(list);
        line(std::string(task_name(t)), tasks[std::string(task_ascii(t))]);
      }
      result["tasks"] = tasks;
    }
    line("all", result["overall"]);
    if (result["overall"]["clamped"].get<std::size_t>() > 0) {
      text << "note: " << result["overall"]["clamped"].get<std::size_t>()
           << " items hit the SNR clamp\n";
    }
    emit(global, "eval", config, result, text.str());
    status = kExitOk;
  });
}

// ------------------------------------------------------------ train-toy

void add_train_toy_command(CLI::App& app, const GlobalOptions& global, int& status) {
  struct Opts {
    std::string out = "toy_run";
    std::size_t examples = 8, samples = 2000, channels = 16, blocks = 2, kernel = 16;
    TrainConfig train;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "train-toy", "Train the small mask network on generated one-speaker, one-sound mixtures");
  sub->add_option("--out", o->out, "Directory for checkpoint.bin and loss.csv");
  sub->add_option("--examples", o->examples, "Training mixtures")->check(CLI::PositiveNumber);
  sub->add_option("--samples", o->samples, "Samples per mixture")->check(CLI::PositiveNumber);
  sub->add_option("--channels", o->channels, "Latent channels");
  sub->add_option("--blocks", o->blocks, "Conditioned blocks");
  sub->add_option("--kernel", o->kernel, "Encoder kernel");
  sub->add_option("--epochs", o->train.epochs, "Full-batch steps");
  sub->add_option("--lr", o->train.lr, "Learning rate");
  sub->add_option("--clip-norm", o->train.clip_norm, "Gradient norm limit, 0 for none");
  sub->add_flag("--pit", o->train.pit, "Add the per-source permutation objective");
  sub->callback([o, &global, &status] {
    const json config = {{"out", o->out}, {"examples", o->examples},
                         {"samples", o->samples}, {"channels", o->channels},
                         {"blocks", o->blocks}, {"kernel", o->kernel},
                         {"epochs", o->train.epochs}, {"lr", o->train.lr},
                         {"clip_norm", o->train.clip_norm}, {"pit", o->train.pit},
                         {"seed", global.seed}};
    const Composition comp{1, 1};
    const double seconds = static_cast<double>(o->samples) / kSampleRate;
    std::vector<TrainExample> data;
    for (std::size_t i = 0; i < o->examples; ++i) {
      const std::uint64_t s = derive_seed(global.seed, i);
      Rng rng(s);
      StyleVector style;
      style.gender = static_cast<Gender>(rng.uniform_index(2));
      style.pitch = static_cast<Level>(rng.uniform_index(3));
      style.tempo = static_cast<Level>(rng.uniform_index(3));
      style.emotion = static_cast<Emotion>(rng.uniform_index(8));
      const std::string& label = rng.pick(synthetic_labels());
      std::vector<Clip> src = {synth_speech(style, seconds, kSampleRate, rng.next()),
                               synth_audio(label, seconds, kSampleRate, rng.next())};
      for (Clip& c : src) {
        c.samples.resize(o->samples, 0.0);
        const double e = std::sqrt(energy(c.samples) / static_cast<double>(c.size()));
        if (e > 0) {
          for (double& v : c.samples) v *= 0.1 / e;
        }
      }
      const auto [task, actions] = sample_edit(comp, derive_seed(s, 1));
      const std::vector<Signature> sigs = {Signature(style), Signature(ClassLabel(label))};
      std::vector<Edit> edits = {{actions[0], sigs[0]}, {actions[1], sigs[1]}};
      const SimplifiedInstruction si = simplify(validate_instruction(edits), s);
      TrainExample ex{mix(src), embed_instruction(si), target_mixture(src, actions), {}};
      for (std::size_t k = 0; k < 2; ++k) {
        Clip c = src[k];
        for (double& v : c.samples) v *= alpha(actions[k]);
        ex.sources.push_back(std::move(c));
      }
      data.push_back(std::move(ex));
    }
    FilmConfig fc;
    fc.channels = o->channels;
    fc.blocks = o->blocks;
    fc.kernel = o->kernel;
    fc.masks = o->train.pit ? 2 : 1;
    fc.seed = derive_seed(global.seed, 0xf11);
    FilmMaskNet net(fc);
    const TrainResult r = train_toy(net, data, o->train);
    const std::filesystem::path out = o->out;
    std::filesystem::create_directories(out);
    net.save(out / "checkpoint.bin");
    std::ostringstream csv;
    csv << "step,loss\n" << std::setprecision(9);
    for (std::size_t i = 0; i < r.loss_curve.size(); ++i) {
      csv << i << "," << r.loss_curve[i] << "\n";
    }
    write_text(out / "loss.csv", csv.str());
    const json result = {{"checkpoint", (out / "checkpoint.bin").string()},
                         {"loss_csv", (out / "loss.csv").string()},
                         {"initial_loss", r.loss_curve.front()},
                         {"final_loss", r.loss_curve.back()}};
    emit(global, "train-toy", config, result,
         "loss " + fixed(r.loss_curve.front(), 3) + " -> " + fixed(r.loss_curve.back(), 3) +
             "\nwrote " + (out / "checkpoint.bin").string() + "\n");
    status = kExitOk;
  });
}

}  // namespace soundedit::cli
