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

#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"
#include "soundedit/prompt.h"
#include "test_util.h"

namespace soundedit {
namespace {

using nlohmann::json;
using testing::error_of;

// Local server whose reply is set per test.
class FakeService : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/rephrase", [this](const httplib::Request& req, httplib::Response& res) {
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      res.status = status_;
      res.set_content(reply_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  RephraseConfig config() const {
    RephraseConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/rephrase";
    c.timeout_seconds = 5.0;
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int status_ = 200;
  std::string reply_;
  std::string last_body_, last_auth_;
};

TEST_F(FakeService, SendsWrapperAndParsesReply) {
  reply_ = R"({"rephrasings": [" a ", "b", "c", "d", "e", "f"]})";
  RephraseConfig c = config();
  c.api_key = "secret-token";
  HttpRephraseClient client(c);
  const auto out = client.rephrase({"Please remove the dog sound.", Provenance::kTemplate});
  ASSERT_EQ(out.size(), 5u);
  EXPECT_EQ(out[0].text, "a");
  for (const Prompt& p : out) EXPECT_EQ(p.provenance, Provenance::kExternalRephrase);
  const json sent = json::parse(last_body_);
  EXPECT_EQ(sent.at("prompt"), "Please remove the dog sound.");
  EXPECT_EQ(sent.at("n"), 5);
  EXPECT_EQ(sent.at("wrapper"), rephrase_wrapper(5));
  EXPECT_EQ(last_auth_, "Bearer secret-token");
}

TEST_F(FakeService, Errors) {
  HttpRephraseClient client(config());
  const Prompt p{"Please remove the dog sound.", Provenance::kTemplate};
  status_ = 500;
  reply_ = "{}";
  EXPECT_EQ(error_of([&] { client.rephrase(p); }), ErrorCode::kNetworkError);
  status_ = 200;
  for (const char* body : {"not json", "{}", R"({"rephrasings": "x"})",
                           R"({"rephrasings": [1, 2]})", R"({"rephrasings": ["  "]})"}) {
    reply_ = body;
    EXPECT_EQ(error_of([&] { client.rephrase(p); }), ErrorCode::kMalformedResponse)
        << body;
  }
}

TEST(HttpRephraseClient, DisabledAndUnreachable) {
  HttpRephraseClient off{RephraseConfig{}};
  EXPECT_EQ(error_of([&] { off.rephrase({"x", Provenance::kTemplate}); }),
            ErrorCode::kDisabled);

  // Grab a free port, then close it so nothing is listening.
  int port = 0;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  RephraseConfig c;
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/";
  c.timeout_seconds = 2.0;
  HttpRephraseClient dead(c);
  EXPECT_EQ(error_of([&] { dead.rephrase({"x", Provenance::kTemplate}); }),
            ErrorCode::kNetworkError);

  for (const char* bad : {"https://example.com/", "ftp://x", "http://:80/", "http://h:port/"}) {
    RephraseConfig b;
    b.endpoint = bad;
    EXPECT_EQ(error_of([&] { HttpRephraseClient{b}; }), ErrorCode::kInvalidArgument) << bad;
  }
}

TEST(MockRephraseClient, FiveDistinctParseableVariants) {
  const std::vector<Signature> sigs = testing::signatures_for(2, 2);
  std::size_t checked = 0;
  for (int code = 0; code < 256; code += 3) {
    std::vector<Edit> edits;
    for (int i = 0; i < 4; ++i) edits.push_back({kAllActions[(code >> (2 * i)) & 3], sigs[i]});
    if (error_of([&] { validate_instruction(edits); })) continue;
    const Instruction instr = validate_instruction(edits);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const GeneratedPrompt g = generate_prompt(instr, seed);
      MockRephraseClient mock;
      const auto out = mock.rephrase(g.prompt);
      ASSERT_EQ(out.size(), 5u) << g.prompt.text;
      std::set<std::string> texts;
      for (const Prompt& p : out) {
        EXPECT_FALSE(p.text.empty());
        EXPECT_EQ(p.provenance, Provenance::kExternalRephrase);
        texts.insert(p.text);
        if (g.prompt.provenance == Provenance::kTemplate) {
          EXPECT_EQ(resolve_actions(parse(p.text), sigs), instr.actions()) << p.text;
        }
      }
      EXPECT_EQ(texts.size(), 5u);
      EXPECT_EQ(out[0].text, g.prompt.text);
      EXPECT_EQ(mock.rephrase(g.prompt)[3].text, out[3].text);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

}  // namespace
}  // namespace soundedit
