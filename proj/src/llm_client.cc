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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "discamc/llm_client.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "discamc/errors.h"
#include "fmt/format.h"
#include "httplib.h"
#include "nlohmann/json.hpp"
#include "spdlog/spdlog.h"

namespace discamc {
namespace {

using nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Position of the last whole-word occurrence of `needle` in `hay`, or npos.
size_t LastWordMatch(const std::string& hay, const std::string& needle) {
  if (needle.empty()) return std::string::npos;
  size_t found = std::string::npos;
  size_t pos = hay.find(needle);
  while (pos != std::string::npos) {
    const bool left_ok = pos == 0 || !IsWordChar(hay[pos - 1]);
    const size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !IsWordChar(hay[end]);
    if (left_ok && right_ok) found = pos;
    pos = hay.find(needle, pos + 1);
  }
  return found;
}

std::string StripThinking(std::string_view raw) {
  const std::string lower = Lower(raw);
  const size_t close = lower.rfind("</think>");
  if (close != std::string::npos) return std::string(raw.substr(close + 8));
  const size_t open = lower.find("<think>");
  if (open != std::string::npos) return std::string(raw.substr(0, open));
  return std::string(raw);
}

bool Retryable(const HttpResponse& r) {
  return r.status == 0 || r.status == 429 || (r.status >= 500 && r.status <= 599);
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse PostJson(const std::string& url, const std::string& body,
                        const std::vector<std::pair<std::string, std::string>>& headers,
                        std::chrono::milliseconds timeout) override {
    const size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw ArgumentError(fmt::format("endpoint URL '{}' has no scheme", url));
    }
    const size_t path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    HttpResponse out;
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }
};

}  // namespace

void EndpointConfig::Validate() const {
  if (base_url.empty()) throw ArgumentError("endpoint base_url is empty");
  if (model_name.empty()) throw ArgumentError("endpoint model name is empty");
  if (max_in_flight < 1) throw ArgumentError("max_in_flight must be >= 1");
  if (max_retries < 0) throw ArgumentError("max_retries must be >= 0");
  if (timeout.count() <= 0) throw ArgumentError("timeout must be positive");
  if (max_output_tokens < 1) throw ArgumentError("max_output_tokens must be >= 1");
}

std::string EndpointConfig::ToRedactedJson() const {
  json doc = {{"base_url", base_url},
              {"model", model_name},
              {"temperature", temperature},
              {"max_output_tokens", max_output_tokens},
              {"timeout_ms", timeout.count()},
              {"max_retries", max_retries},
              {"max_in_flight", max_in_flight},
              {"max_requests_per_second", max_requests_per_second},
              {"backoff_base_ms", backoff_base.count()},
              {"backoff_factor", backoff_factor},
              {"backoff_jitter", backoff_jitter}};
  return doc.dump();
}

EndpointConfig EndpointConfigFromEnv(EndpointConfig base) {
  if (const char* key = std::getenv(kApiKeyEnv); key != nullptr && *key != '\0') {
    base.api_key = key;
  }
  if (const char* url = std::getenv(kBaseUrlEnv); url != nullptr && *url != '\0') {
    base.base_url = url;
  }
  return base;
}

std::string Prediction::ToString() const {
  switch (kind) {
    case Kind::kLabel:
      return std::string(LabelName(label));
    case Kind::kUnknown:
      return std::string(kUnknownOption);
    case Kind::kParseFailure:
      return "PARSE_FAILURE";
  }
  return "PARSE_FAILURE";
}

Prediction ParseResponse(std::string_view raw, std::span<const std::string> options) {
  const std::string answer = Lower(StripThinking(raw));
  size_t best_pos = std::string::npos;
  Prediction best = Prediction::ParseFailure();
  for (const std::string& option : options) {
    Prediction candidate;
    if (option == kUnknownOption) {
      candidate = Prediction::Unknown();
    } else if (auto label = ParseLabel(option)) {
      candidate = Prediction::Of(*label);
    } else {
      continue;
    }
    const size_t pos = LastWordMatch(answer, Lower(option));
    if (pos == std::string::npos) continue;
    if (best_pos == std::string::npos || pos > best_pos) {
      best_pos = pos;
      best = candidate;
    }
  }
  return best;
}

std::string BuildChatRequest(const PromptBundle& bundle, const EndpointConfig& cfg) {
  json doc = {{"model", cfg.model_name},
              {"messages", json::array({{{"role", "user"}, {"content", bundle.text}}})},
              {"temperature", cfg.temperature},
              {"max_tokens", cfg.max_output_tokens}};
  return doc.dump();
}

std::optional<std::string> ExtractCompletionText(std::string_view body) {
  try {
    const json doc = json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

std::shared_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_shared<HttplibTransport>();
}

RequestLimiter::RequestLimiter(int max_in_flight, double max_requests_per_second)
    : max_in_flight_(std::max(1, max_in_flight)),
      min_interval_(max_requests_per_second > 0
                        ? std::chrono::nanoseconds(static_cast<int64_t>(
                              1e9 / max_requests_per_second))
                        : std::chrono::nanoseconds(0)) {}

RequestLimiter::Slot RequestLimiter::Acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
  ++in_flight_;
  peak_ = std::max(peak_, in_flight_);
  if (min_interval_.count() > 0) {
    const auto now = std::chrono::steady_clock::now();
    const auto start = std::max(now, next_start_);
    next_start_ = start + min_interval_;
    lock.unlock();
    std::this_thread::sleep_until(start);
  }
  return Slot(this);
}

void RequestLimiter::Release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

int RequestLimiter::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

int RequestLimiter::peak_in_flight() const {
  std::lock_guard lock(mu_);
  return peak_;
}

LiveClassifier::LiveClassifier(EndpointConfig cfg, std::shared_ptr<HttpTransport> transport,
                               Sleeper sleeper)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      limiter_(cfg_.max_in_flight, cfg_.max_requests_per_second),
      jitter_rng_(std::random_device{}()) {
  cfg_.Validate();
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::chrono::milliseconds LiveClassifier::BackoffDelay(int attempt) {
  double scale = 1.0;
  if (cfg_.backoff_jitter > 0) {
    std::lock_guard lock(rng_mu_);
    std::uniform_real_distribution<double> dist(1.0 - cfg_.backoff_jitter,
                                                1.0 + cfg_.backoff_jitter);
    scale = dist(jitter_rng_);
  }
  const double ms = static_cast<double>(cfg_.backoff_base.count()) *
                    std::pow(cfg_.backoff_factor, attempt - 1) * scale;
  return std::chrono::milliseconds(static_cast<int64_t>(std::llround(ms)));
}

ClassificationResult LiveClassifier::Classify(const PromptBundle& bundle,
                                              const FeatureVector* /*query*/) {
  const std::string url = cfg_.base_url + "/chat/completions";
  const std::string body = BuildChatRequest(bundle, cfg_);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!cfg_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + cfg_.api_key);

  ClassificationResult result;
  const auto start = std::chrono::steady_clock::now();
  HttpResponse last;
  for (int attempt = 1; attempt <= cfg_.max_retries + 1; ++attempt) {
    result.attempt_count = attempt;
    {
      auto slot = limiter_.Acquire();
      last = transport_->PostJson(url, body, headers, cfg_.timeout);
    }
    if (last.status >= 200 && last.status < 300) {
      result.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      const auto content = ExtractCompletionText(last.body);
      result.raw_response = content.value_or(last.body);
      result.predicted = content ? ParseResponse(*content, bundle.options)
                                 : Prediction::ParseFailure();
      return result;
    }
    if (!Retryable(last)) {
      throw TransportError(fmt::format("endpoint returned HTTP {} (not retryable)",
                                       last.status),
                           last.status);
    }
    if (attempt <= cfg_.max_retries) {
      const auto delay = BackoffDelay(attempt);
      spdlog::warn("attempt {} failed ({}); retrying in {} ms", attempt,
                   last.status == 0 ? last.error : fmt::format("HTTP {}", last.status),
                   delay.count());
      sleeper_(delay);
    }
  }
  throw TransportError(
      fmt::format("endpoint still failing after {} attempts (last: {})",
                  cfg_.max_retries + 1,
                  last.status == 0 ? last.error : fmt::format("HTTP {}", last.status)),
      last.status);
}

std::string MockPolicy::ToString() const {
  switch (kind) {
    case Kind::kFirstOption:
      return "first_option";
    case Kind::kFixed:
      return fmt::format("fixed:{}", LabelName(fixed));
    case Kind::kCentroid:
      return "centroid";
  }
  return "?";
}

MockPolicy ParseMockPolicy(std::string_view text) {
  MockPolicy p;
  if (text == "first_option") {
    p.kind = MockPolicy::Kind::kFirstOption;
  } else if (text == "centroid") {
    p.kind = MockPolicy::Kind::kCentroid;
  } else if (text.starts_with("fixed:")) {
    p.kind = MockPolicy::Kind::kFixed;
    p.fixed = LabelFromString(text.substr(6));
  } else {
    throw ArgumentError(fmt::format(
        "unknown mock policy '{}' (expected first_option, fixed:<LABEL> or centroid)",
        text));
  }
  return p;
}

MockClassifier::MockClassifier(MockPolicy policy, const CentroidModel* model)
    : policy_(policy) {
  if (policy_.kind == MockPolicy::Kind::kCentroid) {
    if (model == nullptr) throw ArgumentError("centroid mock policy needs a centroid model");
    model_ = *model;
  }
}

ClassificationResult MockClassifier::Classify(const PromptBundle& bundle,
                                              const FeatureVector* query) {
  std::string answer;
  switch (policy_.kind) {
    case MockPolicy::Kind::kFirstOption:
      if (!bundle.options.empty()) answer = bundle.options.front();
      break;
    case MockPolicy::Kind::kFixed:
      answer = std::string(LabelName(policy_.fixed));
      break;
    case MockPolicy::Kind::kCentroid: {
      if (query == nullptr) throw ArgumentError("centroid mock policy needs query features");
      for (ModulationLabel l : RankByCentroid(*query, *model_)) {
        const auto name = std::string(LabelName(l));
        if (std::find(bundle.options.begin(), bundle.options.end(), name) !=
            bundle.options.end()) {
          answer = name;
          break;
        }
      }
      break;
    }
  }
  ClassificationResult result;
  result.raw_response = fmt::format("<think>mock {}</think>\n{}", policy_.ToString(), answer);
  result.predicted = ParseResponse(result.raw_response, bundle.options);
  result.attempt_count = 1;
  return result;
}

}  // namespace discamc
