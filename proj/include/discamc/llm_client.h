// Copyright 2026 The discamc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISCAMC_LLM_CLIENT_H_
#define DISCAMC_LLM_CLIENT_H_

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discamc/features.h"
#include "discamc/modulation.h"
#include "discamc/prompt.h"
#include "discamc/shortlist.h"

namespace discamc {

// Environment variables read by EndpointConfigFromEnv.
inline constexpr char kApiKeyEnv[] = "DISCAMC_API_KEY";
inline constexpr char kBaseUrlEnv[] = "DISCAMC_BASE_URL";

struct EndpointConfig {
  // Requests go to base_url + "/chat/completions".
  std::string base_url = "https://generativelanguage.googleapis.com/v1beta/openai";
  std::string model_name = "gemini-2.5-flash";
  std::string api_key;  // never serialized or logged
  double temperature = 0.0;
  int max_output_tokens = 2048;
  std::chrono::milliseconds timeout{120000};
  int max_retries = 5;
  int max_in_flight = 4;
  // 0 disables request pacing.
  double max_requests_per_second = 0.0;
  std::chrono::milliseconds backoff_base{1000};
  double backoff_factor = 2.0;
  // Each delay is scaled by a uniform factor in [1 - jitter, 1 + jitter].
  double backoff_jitter = 0.2;

  void Validate() const;
  // Every field except api_key, as a JSON object string.
  std::string ToRedactedJson() const;
};

// Copies `base` and fills api_key / base_url from the environment when set.
EndpointConfig EndpointConfigFromEnv(EndpointConfig base);

struct Prediction {
  enum class Kind { kLabel, kUnknown, kParseFailure };
  Kind kind = Kind::kParseFailure;
  ModulationLabel label = ModulationLabel::k4Ask;  // valid for kLabel only

  static Prediction Of(ModulationLabel l) { return {Kind::kLabel, l}; }
  static Prediction Unknown() { return {Kind::kUnknown, ModulationLabel::k4Ask}; }
  static Prediction ParseFailure() { return {}; }

  // Label spelling, "UNKNOWN" or "PARSE_FAILURE".
  std::string ToString() const;
  bool operator==(const Prediction&) const = default;
};

// Removes <think>...</think> reasoning, then finds the option tokens that
// occur as whole words (case-insensitive). The last occurring option wins;
// no match is a parse failure. UNKNOWN is only recognized when offered.
Prediction ParseResponse(std::string_view raw, std::span<const std::string> options);

struct ClassificationResult {
  Prediction predicted;
  std::string raw_response;
  int64_t latency_ms = 0;
  int attempt_count = 0;
};

// Body of one chat-completion request for `bundle`.
std::string BuildChatRequest(const PromptBundle& bundle, const EndpointConfig& cfg);

// choices[0].message.content of a chat-completion response, or nullopt.
std::optional<std::string> ExtractCompletionText(std::string_view body);

struct HttpResponse {
  int status = 0;  // 0 when no response arrived
  std::string body;
  std::string error;  // transport-level failure description
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse PostJson(const std::string& url, const std::string& body,
                                const std::vector<std::pair<std::string, std::string>>& headers,
                                std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport; supports http:// and https:// URLs.
std::shared_ptr<HttpTransport> MakeHttpTransport();

// Bounds concurrent requests and optionally paces request starts.
class RequestLimiter {
 public:
  RequestLimiter(int max_in_flight, double max_requests_per_second);

  class Slot {
   public:
    explicit Slot(RequestLimiter* owner) : owner_(owner) {}
    Slot(Slot&& other) noexcept : owner_(std::exchange(other.owner_, nullptr)) {}
    Slot& operator=(Slot&&) = delete;
    ~Slot() {
      if (owner_ != nullptr) owner_->Release();
    }

   private:
    RequestLimiter* owner_;
  };

  Slot Acquire();
  int in_flight() const;
  int peak_in_flight() const;

 private:
  void Release();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  const int max_in_flight_;
  const std::chrono::nanoseconds min_interval_;
  std::chrono::steady_clock::time_point next_start_{};
  int in_flight_ = 0;
  int peak_ = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  // `query` is only consulted by mock policies that need the features.
  virtual ClassificationResult Classify(const PromptBundle& bundle,
                                        const FeatureVector* query) = 0;
  virtual std::string Name() const = 0;
  // Live classifiers bound the eval worker pool by max_in_flight.
  virtual int MaxConcurrency() const { return 0; }
};

class LiveClassifier : public Classifier {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit LiveClassifier(EndpointConfig cfg,
                          std::shared_ptr<HttpTransport> transport = MakeHttpTransport(),
                          Sleeper sleeper = nullptr);

  // Retries timeouts, transport failures, 429 and 5xx with exponential
  // backoff; other statuses fail immediately. Throws TransportError once
  // retries are exhausted.
  ClassificationResult Classify(const PromptBundle& bundle,
                                const FeatureVector* query) override;
  std::string Name() const override { return "live:" + cfg_.model_name; }
  int MaxConcurrency() const override { return cfg_.max_in_flight; }

  std::chrono::milliseconds BackoffDelay(int attempt);
  const RequestLimiter& limiter() const { return limiter_; }

 private:
  EndpointConfig cfg_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  RequestLimiter limiter_;
  std::mutex rng_mu_;
  std::mt19937_64 jitter_rng_;
};

struct MockPolicy {
  enum class Kind { kFirstOption, kFixed, kCentroid };
  Kind kind = Kind::kFirstOption;
  ModulationLabel fixed = ModulationLabel::k4Ask;

  std::string ToString() const;
};

// "first_option", "fixed:<LABEL>" or "centroid".
MockPolicy ParseMockPolicy(std::string_view text);

// Offline stand-in. Produces a response string in the live format and runs
// it through ParseResponse, so results obey the same option constraint.
class MockClassifier : public Classifier {
 public:
  // `model` is required for the centroid policy.
  MockClassifier(MockPolicy policy, const CentroidModel* model);

  ClassificationResult Classify(const PromptBundle& bundle,
                                const FeatureVector* query) override;
  std::string Name() const override { return "mock:" + policy_.ToString(); }

 private:
  MockPolicy policy_;
  std::optional<CentroidModel> model_;
};

}  // namespace discamc

#endif  // DISCAMC_LLM_CLIENT_H_
