#ifndef RETROAI_HTTP_PROVIDER_HPP
#define RETROAI_HTTP_PROVIDER_HPP

// OpenAI-compatible chat-completions provider. Define
// CPPHTTPLIB_OPENSSL_SUPPORT (and link OpenSSL) before including this header
// to reach https endpoints.

#include <chrono>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "httplib.h"
#include "json.hpp"
#include "retroai/error.hpp"
#include "retroai/reporting.hpp"

namespace retroai {

struct LlmConfig {
  std::string url;  // full endpoint, e.g. https://api.openai.com/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-4";
  std::chrono::milliseconds timeout{30000};
  bool offline = false;

  // RETROAI_LLM_URL, RETROAI_LLM_KEY, RETROAI_LLM_MODEL, RETROAI_LLM_TIMEOUT_MS.
  static LlmConfig from_env() {
    LlmConfig c;
    auto env = [](const char* name) -> std::optional<std::string> {
      const char* v = std::getenv(name);
      if (v == nullptr || *v == '\0') return std::nullopt;
      return std::string(v);
    };
    if (auto v = env("RETROAI_LLM_URL")) c.url = *v;
    if (auto v = env("RETROAI_LLM_KEY")) c.api_key = *v;
    if (auto v = env("RETROAI_LLM_MODEL")) c.model = *v;
    if (auto v = env("RETROAI_LLM_TIMEOUT_MS")) {
      try {
        c.timeout = std::chrono::milliseconds{std::stoll(*v)};
      } catch (const std::exception&) {
        throw InvalidArgumentError("RETROAI_LLM_TIMEOUT_MS is not an integer: '" + *v + "'");
      }
    }
    return c;
  }
};

class HttpProvider final : public ReportProvider {
 public:
  explicit HttpProvider(LlmConfig config) : config_(std::move(config)) {
    auto scheme_end = config_.url.find("://");
    if (scheme_end == std::string::npos) {
      throw InvalidArgumentError("LLM url must start with http:// or https://");
    }
    auto path_start = config_.url.find('/', scheme_end + 3);
    base_ = config_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
  }

  std::string complete(std::string_view prompt, std::chrono::milliseconds timeout) override {
    nlohmann::json body{{"model", config_.model},
                        {"messages", {{{"role", "user"}, {"content", std::string(prompt)}}}}};
    httplib::Client client(base_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw ProviderError("LLM request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw ProviderError("LLM endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      auto reply = nlohmann::json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("unexpected LLM response: ") + e.what());
    }
  }

 private:
  LlmConfig config_;
  std::string base_;
  std::string path_;
};

// Offline when requested or when no endpoint is configured.
inline std::unique_ptr<ReportProvider> make_provider(const LlmConfig& config) {
  if (config.offline || config.url.empty()) return std::make_unique<OfflineProvider>();
  return std::make_unique<HttpProvider>(config);
}

}  // namespace retroai

#endif  // RETROAI_HTTP_PROVIDER_HPP
