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

// Clients for an external prompt rephrasing service.
//
// Wire format (JSON over HTTP POST):
//   request  {"prompt": "...", "n": 5, "wrapper": "..."}
//   response {"rephrasings": ["...", ...]}
// The API key, when set, goes in an Authorization: Bearer header.

#ifndef SOUNDEDIT_REPHRASE_H_
#define SOUNDEDIT_REPHRASE_H_

#include <optional>
#include <string>
#include <vector>

#include "soundedit/prompt.h"

namespace soundedit {

inline constexpr int kRephraseCount = 5;
inline constexpr const char* kRephraseEndpointEnv = "SOUNDEDIT_REPHRASE_ENDPOINT";
inline constexpr const char* kRephraseKeyEnv = "SOUNDEDIT_REPHRASE_API_KEY";

// Instruction sent along with every prompt.
std::string rephrase_wrapper(int n = kRephraseCount);

class RephraseClient {
 public:
  virtual ~RephraseClient() = default;
  // Returns rephrasings tagged kExternalRephrase. Throws kDisabled,
  // kNetworkError or kMalformedResponse.
  virtual std::vector<Prompt> rephrase(const Prompt& prompt) = 0;
};

struct RephraseConfig {
  std::string endpoint;  // http://host:port/path; empty disables
  std::string api_key;
  int n = kRephraseCount;
  double timeout_seconds = 30.0;

  // Reads the endpoint and key environment variables.
  static RephraseConfig from_env();
};

class HttpRephraseClient : public RephraseClient {
 public:
  explicit HttpRephraseClient(RephraseConfig config);
  std::vector<Prompt> rephrase(const Prompt& prompt) override;

 private:
  RephraseConfig config_;
  std::string host_;
  int port_ = 80;
  std::string path_;
};

// Parses a response body. Throws kMalformedResponse.
std::vector<Prompt> parse_rephrase_response(const std::string& body, int n);

// Offline stand-in: the prompt itself plus variants with other opening
// phrases and shuffled verb synonyms. Variants of template prompts stay
// parseable.
class MockRephraseClient : public RephraseClient {
 public:
  explicit MockRephraseClient(int n = kRephraseCount) : n_(n) {}
  std::vector<Prompt> rephrase(const Prompt& prompt) override;

 private:
  int n_;
};

}  // namespace soundedit

#endif  // SOUNDEDIT_REPHRASE_H_
