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

#include "soundedit/dataset.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "soundedit/dsp.h"
#include "soundedit/rephrase.h"
#include "soundedit/rng.h"

namespace soundedit {

using nlohmann::json;

namespace {

[[noreturn]] void bad_row(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kBadMetadataRow, "line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_labels(const std::string& field) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : field + ",") {
    if (c == ',' || c == ';' || c == '|') {
      const std::string n = ClassLabel::normalize(cur);
      if (!n.empty()) out.push_back(n);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

bool blocked(const std::string& label, const std::vector<std::string>& blocklist) {
  const std::string padded = " " + label + " ";
  for (const std::string& b : blocklist) {
    const std::string nb = ClassLabel::normalize(b);
    if (!nb.empty() && padded.find(" " + nb + " ") != std::string::npos) return true;
  }
  return false;
}

// Metadata rows as string maps, with the line number used in diagnostics.
struct RawRow {
  std::size_t line;
  std::map<std::string, std::string> fields;
  std::vector<std::string> labels;  // JSON arrays keep their elements
};

std::vector<RawRow> read_json_rows(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadMetadataRow, std::string("line 1: ") + e.what());
  }
  if (!doc.is_array()) bad_row(1, "metadata JSON must be an array of objects");
  std::vector<RawRow> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& obj = doc[i];
    RawRow row{i + 1, {}, {}};
    if (!obj.is_object()) bad_row(row.line, "entry is not an object");
    for (const auto& [key, value] : obj.items()) {
      if (key == "label" && value.is_array()) {
        for (const json& l : value) {
          if (!l.is_string()) bad_row(row.line, "label entries must be strings");
          const std::string n = ClassLabel::normalize(l.get<std::string>());
          if (!n.empty()) row.labels.push_back(n);
        }
      } else if (value.is_string()) {
        row.fields[key] = value.get<std::string>();
      } else if (value.is_number()) {
        row.fields[key] = value.dump();
      } else {
        bad_row(row.line, "field '" + key + "' must be a string");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> read_tsv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<RawRow> rows;
  std::size_t number = 0;
  auto cells = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == '\t') {
        out.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = cells(line);
      continue;
    }
    const std::vector<std::string> c = cells(line);
    if (c.size() != header.size()) {
      bad_row(number, "expected " + std::to_string(header.size()) + " columns, got " +
                          std::to_string(c.size()));
    }
    RawRow row{number, {}, {}};
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].empty()) row.fields[header[i]] = c[i];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CatalogEntry entry_from_row(const RawRow& row, const std::filesystem::path& root,
                            const IngestOptions& options) {
  auto field = [&](const std::string& key) -> const std::string& {
    auto it = row.fields.find(key);
    if (it == row.fields.end() || it->second.empty()) {
      bad_row(row.line, "missing field '" + key + "'");
    }
    return it->second;
  };
  CatalogEntry e{field("id"), "", field("path"), StyleVector{}, 0.0, std::nullopt};
  if (auto it = row.fields.find("split"); it != row.fields.end()) {
    e.split_hint = parse_split(it->second);
    if (!e.split_hint) bad_row(row.line, "unknown split '" + it->second + "'");
  }
  const std::string& type = field("type");
  if (type == "speech") {
    StyleVector style;
    for (StyleAttribute a : kAllStyleAttributes) {
      const std::string& v = field(std::string(attribute_name(a)));
      const auto code = parse_attribute_value(a, v);
      if (!code) {
        bad_row(row.line, "bad " + std::string(attribute_name(a)) + " '" + v + "'");
      }
      style.set(a, *code);
    }
    e.signature = style;
    e.entity = "speaker:" + field("speaker");
  } else if (type == "audio") {
    std::vector<std::string> labels = row.labels;
    if (auto it = row.fields.find("label"); it != row.fields.end()) {
      for (std::string& l : split_labels(it->second)) labels.push_back(std::move(l));
    }
    if (labels.empty()) bad_row(row.line, "missing field 'label'");
    if (labels.size() > 1) bad_row(row.line, "multiple labels");
    if (blocked(labels[0], options.blocklist)) {
      bad_row(row.line, "label '" + labels[0] + "' is on the voice blocklist");
    }
    e.signature = ClassLabel(labels[0]);
    e.entity = "clip:" + e.id;
  } else {
    bad_row(row.line, "type must be speech or audio, got '" + type + "'");
  }
  const std::filesystem::path full = root / e.path;
  if (!std::filesystem::exists(full)) {
    throw Error(ErrorCode::kMissingFile,
                "line " + std::to_string(row.line) + ": " + full.string());
  }
  const Clip clip = read_wav(full);
  e.duration = clip.duration();
  return e;
}

json style_json(const StyleVector& s) {
  json j = json::object();
  for (StyleAttribute a : kAllStyleAttributes) {
    j[std::string(attribute_name(a))] = attribute_value_name(a, s.get(a));
  }
  return j;
}

StyleVector style_from_json(const json& j) {
  StyleVector s;
  for (StyleAttribute a : kAllStyleAttributes) {
    const std::string name(attribute_name(a));
    const auto code = parse_attribute_value(a, j.at(name).get<std::string>());
    if (!code) throw Error(ErrorCode::kInvalidArgument, "bad " + name);
    s.set(a, *code);
  }
  return s;
}

json signature_json(const Signature& sig) {
  if (sig.is_speech()) return {{"type", "speech"}, {"style", style_json(sig.style())}};
  return {{"type", "audio"}, {"label", sig.label().str()}};
}

Signature signature_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "speech") return style_from_json(j.at("style"));
  if (type == "audio") return ClassLabel(j.at("label").get<std::string>());
  throw Error(ErrorCode::kInvalidArgument, "bad signature type " + type);
}

json target_json(const PartialSignature& t) {
  if (const auto* p = std::get_if<PartialStyle>(&t)) {
    json attrs = json::object();
    for (StyleAttribute a : kAllStyleAttributes) {
      if (p->has(a)) {
        attrs[std::string(attribute_name(a))] = attribute_value_name(a, p->get(a));
      }
    }
    return {{"kind", "speech"}, {"attributes", attrs}};
  }
  if (const auto* l = std::get_if<ClassLabel>(&t)) {
    return {{"kind", "audio"}, {"label", l->str()}};
  }
  return {{"kind", "group"},
          {"group", std::get<SourceGroup>(t) == SourceGroup::kAllSpeech ? "speech"
                                                                        : "audio"}};
}

PartialSignature target_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "audio") return ClassLabel(j.at("label").get<std::string>());
  if (kind == "group") {
    const std::string g = j.at("group").get<std::string>();
    if (g == "speech") return SourceGroup::kAllSpeech;
    if (g == "audio") return SourceGroup::kAllAudio;
    throw Error(ErrorCode::kInvalidArgument, "bad group " + g);
  }
  if (kind != "speech") throw Error(ErrorCode::kInvalidArgument, "bad kind " + kind);
  StyleVector values;
  std::uint8_t mask = 0;
  for (const auto& [key, value] : j.at("attributes").items()) {
    bool known = false;
    for (StyleAttribute a : kAllStyleAttributes) {
      if (attribute_name(a) != key) continue;
      const auto code = parse_attribute_value(a, value.get<std::string>());
      if (!code) throw Error(ErrorCode::kInvalidArgument, "bad " + key);
      values.set(a, *code);
      mask |= attribute_bit(a);
      known = true;
    }
    if (!known) throw Error(ErrorCode::kInvalidArgument, "unknown attribute " + key);
  }
  return PartialStyle::project(values, mask);
}

json simplified_json(const SimplifiedInstruction& s) {
  json edits = json::array();
  for (const SimplifiedEdit& e : s.edits) {
    edits.push_back({{"action", action_key(e.action)}, {"target", target_json(e.target)}});
  }
  return edits;
}

Action action_from_key(const std::string& key) {
  for (Action a : kAllActions) {
    if (action_key(a) == key) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "bad action " + key);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (split_name(s) == name) return s;
  }
  return std::nullopt;
}

const CatalogEntry& Catalog::find(std::string_view id) const {
  for (const CatalogEntry& e : entries) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::kMissingFile, "catalog has no entry " + std::string(id));
}

std::vector<std::string> Catalog::audio_labels() const {
  std::set<std::string> labels;
  for (const CatalogEntry& e : entries) {
    if (!e.signature.is_speech()) labels.insert(e.signature.label().str());
  }
  return {labels.begin(), labels.end()};
}

std::vector<std::string> default_voice_blocklist() {
  return {"speech",   "male speech", "female speech", "child speech",
          "conversation", "people",  "children",      "crowd",
          "human voice",  "singing", "chatter",       "laughter",
          "whispering",   "babbling", "shout",        "narration"};
}

IngestResult ingest(const std::filesystem::path& root,
                    const std::filesystem::path& metadata,
                    const IngestOptions& options) {
  if (!std::filesystem::exists(metadata)) {
    throw Error(ErrorCode::kMissingFile, metadata.string());
  }
  const std::string text = read_text(metadata);
  const std::vector<RawRow> rows = metadata.extension() == ".json"
                                       ? read_json_rows(text)
                                       : read_tsv_rows(text);
  IngestResult result;
  result.catalog.root = root;
  std::set<std::string> ids;
  for (const RawRow& row : rows) {
    try {
      CatalogEntry e = entry_from_row(row, root, options);
      if (!ids.insert(e.id).second) bad_row(row.line, "duplicate id '" + e.id + "'");
      result.catalog.entries.push_back(std::move(e));
    } catch (const Error& e) {
      if (options.strict) throw;
      result.rejected.push_back({row.line, e.what()});
    }
  }
  if (result.catalog.entries.empty()) {
    throw Error(ErrorCode::kEmptyCatalog, metadata.string() + " has no usable entries");
  }
  std::sort(result.catalog.entries.begin(), result.catalog.entries.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
  return result;
}

SplitAssignment partition(const Catalog& catalog, std::uint64_t seed,
                          const SplitRatios& ratios) {
  if (catalog.entries.empty()) throw Error(ErrorCode::kEmptyCatalog, "empty catalog");
  const double total = ratios.train + ratios.valid + ratios.test;
  if (!(ratios.train >= 0 && ratios.valid >= 0 && ratios.test >= 0 && total > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be non-negative");
  }
  SplitAssignment out;
  for (int kind = 0; kind < 2; ++kind) {
    std::map<std::string, std::optional<Split>> entities;
    for (const CatalogEntry& e : catalog.entries) {
      if (e.signature.is_speech() != (kind == 0)) continue;
      auto [it, fresh] = entities.emplace(e.entity, e.split_hint);
      if (!fresh && !it->second) it->second = e.split_hint;
    }
    if (entities.empty()) continue;
    const std::size_t n = entities.size();
    const auto n_train = static_cast<std::size_t>(std::lround(n * ratios.train / total));
    const auto n_valid = static_cast<std::size_t>(std::lround(n * ratios.valid / total));
    std::array<std::size_t, 3> want = {n_train, n_valid,
                                       n - std::min(n, n_train + n_valid)};
    std::array<std::size_t, 3> have = {0, 0, 0};
    std::vector<std::string> free;
    for (const auto& [entity, hint] : entities) {
      if (hint) {
        out[entity] = *hint;
        ++have[static_cast<std::size_t>(*hint)];
      } else {
        free.push_back(entity);
      }
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(kind)));
    rng.shuffle(free);
    std::size_t next = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      while (have[s] < want[s] && next < free.size()) {
        out[free[next++]] = kAllSplits[s];
        ++have[s];
      }
    }
    while (next < free.size()) {
      out[free[next++]] = Split::kTest;
      ++have[2];
    }
    for (std::size_t s = 0; s < 3; ++s) {
      if (have[s] == 0) {
        throw Error(ErrorCode::kTooFewEntities,
                    std::to_string(n) + (kind == 0 ? " speakers" : " audio clips") +
                        " leave the " + std::string(split_name(kAllSplits[s])) +
                        " split empty (" + std::to_string(have[0]) + "/" +
                        std::to_string(have[1]) + "/" + std::to_string(have[2]) + ")");
      }
    }
  }
  return out;
}

std::string record_to_json(const ManifestRecord& r) {
  json sources = json::array();
  for (std::size_t i = 0; i < r.sources.size(); ++i) {
    const SourceRef& s = r.sources[i];
    json j = {{"entry", s.entry},
              {"signature", signature_json(s.signature)},
              {"snr_db", s.snr_db},
              {"crop_seed", s.crop_seed}};
    if (i < r.gains.size()) j["gain"] = r.gains[i];
    sources.push_back(j);
  }
  json j = {{"schema_version", kManifestVersion},
            {"id", r.id},
            {"split", split_name(r.split)},
            {"composition", {r.composition.n_speech, r.composition.n_audio}},
            {"seed", r.seed},
            {"sources", sources},
            {"actions", format_action_vector(r.actions, /*ascii=*/true)},
            {"task", task_ascii(r.task)},
            {"simplified", simplified_json(r.simplified)},
            {"instruction", to_string(r.simplified)},
            {"prompt", r.prompt.text},
            {"provenance", provenance_name(r.prompt.provenance)},
            {"rescale", r.rescale},
            {"files",
             {{"input", r.input_path()},
              {"target", r.target_path()},
              {"prompt", r.prompt_path()}}}};
  if (r.template_id) j["template"] = template_name(*r.template_id);
  return j.dump();
}

ManifestRecord record_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kManifestVersion) {
      throw Error(ErrorCode::kInvalidArgument, "unsupported manifest schema version");
    }
    ManifestRecord r;
    r.id = j.at("id").get<std::string>();
    const auto split = parse_split(j.at("split").get<std::string>());
    if (!split) throw Error(ErrorCode::kInvalidArgument, "bad split");
    r.split = *split;
    r.composition = {j.at("composition").at(0).get<int>(),
                     j.at("composition").at(1).get<int>()};
    r.seed = j.at("seed").get<std::uint64_t>();
    bool all_gains = true;
    for (const json& s : j.at("sources")) {
      r.sources.push_back({s.at("entry").get<std::string>(),
                           signature_from_json(s.at("signature")),
                           s.at("snr_db").get<double>(),
                           s.at("crop_seed").get<std::uint64_t>()});
      if (s.contains("gain")) {
        r.gains.push_back(s.at("gain").get<double>());
      } else {
        all_gains = false;
      }
    }
    if (!all_gains) r.gains.clear();
    r.actions = parse_action_vector(j.at("actions").get<std::string>());
    const auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw Error(ErrorCode::kInvalidArgument, "bad task");
    r.task = *task;
    for (const json& e : j.at("simplified")) {
      r.simplified.edits.push_back({action_from_key(e.at("action").get<std::string>()),
                                    target_from_json(e.at("target"))});
    }
    r.prompt.text = j.at("prompt").get<std::string>();
    const auto prov = parse_provenance(j.at("provenance").get<std::string>());
    if (!prov) throw Error(ErrorCode::kInvalidArgument, "bad provenance");
    r.prompt.provenance = *prov;
    if (j.contains("template")) {
      for (TemplateId t : kAllTemplates) {
        if (template_name(t) == j.at("template").get<std::string>()) r.template_id = t;
      }
    }
    r.rescale = j.value("rescale", 1.0);
    if (r.sources.size() != r.actions.size() ||
        static_cast<int>(r.sources.size()) != r.composition.total()) {
      throw Error(ErrorCode::kInvalidArgument, "record " + r.id + ": source count");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("manifest record: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestRecord> records) {
  std::string text;
  for (const ManifestRecord& r : records) text += record_to_json(r) + "\n";
  write_text(path, text);
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<ManifestRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::uint64_t record_seed(std::uint64_t master, Split split, std::size_t index) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(split)), index);
}

std::vector<ManifestRecord> generate_manifest(const Catalog& catalog,
                                              const SplitAssignment& splits,
                                              const GenerateSpec& spec) {
  spec.composition.validate();
  std::vector<ManifestRecord> out;
  for (const auto& [split, count] : spec.counts) {
    std::vector<const CatalogEntry*> speech, audio;
    for (const CatalogEntry& e : catalog.entries) {
      auto it = splits.find(e.entity);
      if (it == splits.end() || it->second != split) continue;
      (e.signature.is_speech() ? speech : audio).push_back(&e);
    }
    std::sort(speech.begin(), speech.end(),
              [](auto* a, auto* b) { return a->id < b->id; });
    std::sort(audio.begin(), audio.end(), [](auto* a, auto* b) { return a->id < b->id; });
    auto distinct = [](const std::vector<const CatalogEntry*>& pool) {
      std::set<Signature> s;
      for (const CatalogEntry* e : pool) s.insert(e->signature);
      return s.size();
    };
    const auto n_s = static_cast<std::size_t>(spec.composition.n_speech);
    const auto n_a = static_cast<std::size_t>(spec.composition.n_audio);
    if (count > 0 && (distinct(speech) < n_s || distinct(audio) < n_a)) {
      throw Error(ErrorCode::kTooFewEntities,
                  std::string(split_name(split)) + " split has " +
                      std::to_string(distinct(speech)) + " speech and " +
                      std::to_string(distinct(audio)) +
                      " audio signatures, composition needs " + std::to_string(n_s) +
                      " and " + std::to_string(n_a));
    }

    for (std::size_t i = 0; i < count; ++i) {
      ManifestRecord r;
      char id[32];
      std::snprintf(id, sizeof(id), "%s-%06zu", std::string(split_name(split)).c_str(), i);
      r.id = id;
      r.split = split;
      r.composition = spec.composition;
      r.seed = record_seed(spec.seed, split, i);
      Rng rng(derive_seed(r.seed, 1));
      auto draw = [&](const std::vector<const CatalogEntry*>& pool, std::size_t n) {
        for (int attempt = 0; attempt < kMaxSourceDraws; ++attempt) {
          std::vector<const CatalogEntry*> picked;
          std::set<Signature> seen;
          bool ok = true;
          for (std::size_t k = 0; k < n && ok; ++k) {
            const CatalogEntry* e = pool[rng.uniform_index(pool.size())];
            ok = seen.insert(e->signature).second;
            picked.push_back(e);
          }
          if (ok) return picked;
        }
        throw Error(ErrorCode::kExhaustedRetries,
                    r.id + ": no distinct signatures after " +
                        std::to_string(kMaxSourceDraws) + " draws");
      };
      std::vector<const CatalogEntry*> chosen = draw(speech, n_s);
      for (const CatalogEntry* e : draw(audio, n_a)) chosen.push_back(e);

      std::vector<Signature> sigs;
      for (const CatalogEntry* e : chosen) sigs.push_back(e->signature);
      const std::vector<double> snrs = draw_snrs(sigs, derive_seed(r.seed, 2));
      for (std::size_t k = 0; k < chosen.size(); ++k) {
        r.sources.push_back({chosen[k]->id, sigs[k], snrs[k], derive_seed(r.seed, 10 + k)});
      }
      auto [task, actions] = sample_edit(spec.composition, derive_seed(r.seed, 3));
      r.task = task;
      r.actions = actions;
      std::vector<Edit> edits;
      for (std::size_t k = 0; k < sigs.size(); ++k) edits.push_back({actions[k], sigs[k]});
      const GeneratedPrompt gp =
          generate_prompt(validate_instruction(std::move(edits)), derive_seed(r.seed, 4));
      r.simplified = gp.simplified;
      r.prompt = gp.prompt;
      r.template_id = gp.template_id;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::size_t rephrase_records(std::span<ManifestRecord> records, RephraseClient& client,
                             std::size_t concurrency) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].prompt.provenance == Provenance::kTemplate) todo.push_back(i);
  }
  std::vector<std::optional<Prompt>> results(todo.size());
  std::mutex mu;
  std::optional<Error> first_error;
  parallel_for(todo.size(), concurrency, [&](std::size_t k) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (first_error) return;
    }
    const ManifestRecord& r = records[todo[k]];
    try {
      const std::vector<Prompt> options = client.rephrase(r.prompt);
      if (options.empty()) return;
      Rng rng(derive_seed(r.seed, 5));
      results[k] = options[rng.uniform_index(options.size())];
    } catch (const Error& e) {
      std::lock_guard<std::mutex> lock(mu);
      if (!first_error) first_error = e;
    }
  });
  if (first_error) {
    if (first_error->code() == ErrorCode::kDisabled) return 0;
    throw *first_error;
  }
  std::size_t changed = 0;
  for (std::size_t k = 0; k < todo.size(); ++k) {
    if (!results[k]) continue;
    records[todo[k]].prompt = *results[k];
    records[todo[k]].template_id.reset();
    ++changed;
  }
  return changed;
}

MixturePair replay_record(const ManifestRecord& record, const Catalog& catalog,
                          double seconds) {
  std::vector<Clip> clips;
  std::vector<Signature> sigs;
  std::vector<double> snrs;
  for (const SourceRef& s : record.sources) {
    const CatalogEntry& e = catalog.find(s.entry);
    Clip c = read_wav(catalog.root / e.path);
    if (c.rate != kSampleRate) c = resample(c, kSampleRate);
    clips.push_back(condition(c, s.crop_seed, seconds));
    sigs.push_back(s.signature);
    snrs.push_back(s.snr_db);
  }
  std::vector<double> gains = record.gains;
  if (gains.empty()) gains = gains_for_snrs(clips, sigs, snrs).gains;
  if (gains.size() != clips.size()) {
    throw Error(ErrorCode::kCountMismatch, record.id + ": gain count");
  }
  return make_mixture_pair(apply_gains(clips, gains), record.actions);
}

SynthesisSummary synthesize(std::span<const ManifestRecord> records,
                            const Catalog& catalog,
                            const std::filesystem::path& out_dir,
                            const SynthesisOptions& options) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::optional<SynthesisFailure>> failures(records.size());
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    ManifestRecord r = records[i];
    const std::filesystem::path dir = out_dir / r.id;
    try {
      r.gains.clear();
      std::vector<Clip> clips;
      // Gains are solved on the unscaled clips, then stored so that replay
      // from the record alone is exact.
      {
        std::vector<Signature> sigs;
        std::vector<double> snrs;
        for (const SourceRef& s : r.sources) {
          const CatalogEntry& e = catalog.find(s.entry);
          Clip c = read_wav(catalog.root / e.path);
          if (c.rate != kSampleRate) c = resample(c, kSampleRate);
          clips.push_back(condition(c, s.crop_seed, options.seconds));
          sigs.push_back(s.signature);
          snrs.push_back(s.snr_db);
        }
        r.gains = gains_for_snrs(clips, sigs, snrs).gains;
      }
      const MixturePair pair = make_mixture_pair(apply_gains(clips, r.gains), r.actions);
      r.rescale = pair.rescale;
      std::filesystem::create_directories(dir);
      write_wav(out_dir / r.input_path(), pair.input, options.format);
      write_wav(out_dir / r.target_path(), pair.target, options.format);
      if (options.write_sources) {
        for (std::size_t k = 0; k < pair.sources.size(); ++k) {
          write_wav(out_dir / r.source_path(k), pair.sources[k], options.format);
        }
      }
      write_text(out_dir / r.prompt_path(), r.prompt.text + "\n");
      write_text(out_dir / r.record_path(), json::parse(record_to_json(r)).dump(2) + "\n");
    } catch (const Error& e) {
      failures[i] = SynthesisFailure{r.id, e.code(), e.what()};
    } catch (const std::exception& e) {
      failures[i] = SynthesisFailure{r.id, ErrorCode::kIoError, e.what()};
    }
    if (failures[i]) {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  });
  SynthesisSummary summary;
  summary.requested = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (failures[i]) {
      summary.failures.push_back(*failures[i]);
      continue;
    }
    ++summary.written;
    ++summary.task_histogram[records[i].task];
    ++summary.provenance_histogram[records[i].prompt.provenance];
  }
  return summary;
}

std::string summary_to_json(const SynthesisSummary& s) {
  json tasks = json::object();
  for (Task t : kAllTasks) {
    auto it = s.task_histogram.find(t);
    tasks[std::string(task_ascii(t))] = it == s.task_histogram.end() ? 0 : it->second;
  }
  json prov = json::object();
  for (Provenance p : {Provenance::kTemplate, Provenance::kSpecialGeneric,
                       Provenance::kExternalRephrase}) {
    auto it = s.provenance_histogram.find(p);
    prov[std::string(provenance_name(p))] =
        it == s.provenance_histogram.end() ? 0 : it->second;
  }
  json failures = json::array();
  for (const SynthesisFailure& f : s.failures) {
    failures.push_back(
        {{"id", f.id}, {"error", error_code_name(f.code)}, {"message", f.message}});
  }
  return json{{"requested", s.requested},
              {"written", s.written},
              {"failed", s.failures.size()},
              {"failures", failures},
              {"tasks", tasks},
              {"provenance", prov}}
      .dump(2);
}

}  // namespace soundedit
