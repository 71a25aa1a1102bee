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

#include "soundedit/rephrase.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "httplib.h"
#include "json.hpp"
#include "soundedit/error.h"
#include "soundedit/lexicon.h"
#include "soundedit/rng.h"

namespace soundedit {

using nlohmann::json;

std::string rephrase_wrapper(int n) {
  return "Rewrite the following audio editing request " + std::to_string(n) +
         " times. Each version should sound like something a person would "
         "naturally say, and must ask for exactly the same edit. Answer with "
         "one version per line.";
}

RephraseConfig RephraseConfig::from_env() {
  RephraseConfig c;
  if (const char* e = std::getenv(kRephraseEndpointEnv)) c.endpoint = e;
  if (const char* k = std::getenv(kRephraseKeyEnv)) c.api_key = k;
  return c;
}

HttpRephraseClient::HttpRephraseClient(RephraseConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty()) return;
  const std::string scheme = "http://";
  if (config_.endpoint.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "rephrase endpoint must start with http://: " + config_.endpoint);
  }
  std::string rest = config_.endpoint.substr(scheme.size());
  const std::size_t slash = rest.find('/');
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string authority = rest.substr(0, slash);
  const std::size_t colon = authority.rfind(':');
  if (colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in " + config_.endpoint);
    }
    authority.resize(colon);
  }
  if (authority.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no host in " + config_.endpoint);
  }
  host_ = authority;
}

std::vector<Prompt> parse_rephrase_response(const std::string& body, int n) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rephrasings") ||
      !doc["rephrasings"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "missing rephrasings array");
  }
  std::vector<Prompt> out;
  for (const json& r : doc["rephrasings"]) {
    if (!r.is_string()) {
      throw Error(ErrorCode::kMalformedResponse, "rephrasings must be strings");
    }
    std::string text = r.get<std::string>();
    const auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    text = text.substr(b, text.find_last_not_of(" \t\r\n") - b + 1);
    out.push_back({text, Provenance::kExternalRephrase});
    if (static_cast<int>(out.size()) == n) break;
  }
  if (out.empty()) throw Error(ErrorCode::kMalformedResponse, "no rephrasings");
  return out;
}

std::vector<Prompt> HttpRephraseClient::rephrase(const Prompt& prompt) {
  if (config_.endpoint.empty()) {
    throw Error(ErrorCode::kDisabled, std::string(kRephraseEndpointEnv) + " is not set");
  }
  httplib::Client client(host_, port_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs =
      static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const json request = {
      {"prompt", prompt.text}, {"n", config_.n}, {"wrapper", rephrase_wrapper(config_.n)}};
  const auto res = client.Post(path_, headers, request.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kNetworkError,
                "POST " + config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kNetworkError,
                "POST " + config_.endpoint + ": HTTP " + std::to_string(res->status));
  }
  return parse_rephrase_response(res->body, config_.n);
}

namespace {

const std::vector<std::string> kOpenings = {"Please",          "I want to", "Can you",
                                            "Could you",       "Would you",
                                            "I would like to"};

bool is_question(const std::string& opening) {
  return opening == "Can you" || opening == "Could you" || opening == "Would you";
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '\''; }

// Swaps each verb phrase for a synonym of the same action.
std::string shuffle_verbs(const std::string& body, Rng& rng) {
  struct Verb {
    std::string text;
    Action action;
  };
  std::vector<Verb> verbs;
  const Lexicon& lex = Lexicon::builtin();
  for (Action a : kAllActions) {
    for (const std::string& v : lex.verbs(a)) verbs.push_back({v, a});
  }
  std::stable_sort(verbs.begin(), verbs.end(), [](const Verb& x, const Verb& y) {
    return x.text.size() > y.text.size();
  });
  std::string out;
  std::size_t i = 0;
  while (i < body.size()) {
    const bool boundary = i == 0 || !word_char(body[i - 1]);
    const Verb* hit = nullptr;
    if (boundary) {
      for (const Verb& v : verbs) {
        const std::size_t e = i + v.text.size();
        if (body.compare(i, v.text.size(), v.text) == 0 &&
            (e == body.size() || !word_char(body[e]))) {
          hit = &v;
          break;
        }
      }
    }
    if (!hit) {
      out += body[i++];
      continue;
    }
    out += rng.pick(lex.verbs(hit->action));
    i += hit->text.size();
  }
  return out;
}

}  // namespace

std::vector<Prompt> MockRephraseClient::rephrase(const Prompt& prompt) {
  std::string body = prompt.text;
  while (!body.empty() && (body.back() == '.' || body.back() == '?' || body.back() == ' ')) {
    body.pop_back();
  }
  std::string used;
  for (const std::string& o : kOpenings) {
    if (body.rfind(o + " ", 0) == 0 && o.size() > used.size()) used = o;
  }
  if (!used.empty()) body = body.substr(used.size() + 1);
  if (!body.empty()) {
    body[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(body[0])));
  }

  Rng rng(hash_string(prompt.text));
  std::vector<Prompt> out = {{prompt.text, Provenance::kExternalRephrase}};
  std::set<std::string> seen = {prompt.text};
  for (const std::string& o : kOpenings) {
    if (static_cast<int>(out.size()) >= n_) break;
    if (o == used) continue;
    const std::string text =
        o + " " + shuffle_verbs(body, rng) + (is_question(o) ? "?" : ".");
    if (seen.insert(text).second) out.push_back({text, Provenance::kExternalRephrase});
  }
  return out;
}

}  // namespace soundedit
