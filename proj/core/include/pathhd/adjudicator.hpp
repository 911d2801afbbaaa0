#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pathhd/error.hpp"
#include "pathhd/retriever.hpp"

namespace pathhd {

inline constexpr std::string_view kSystemPreamble =
    "You are a careful reasoner. Only use the provided KG reasoning paths as evidence. "
    "Cite the most relevant path(s) and answer concisely.";

// "e0 --r1--> e1 --r2--> ... --rl--> el"
std::string verbalize_path(const CandidatePath& path);

struct PromptBundle {
    std::string question;
    std::vector<std::string> paths;  // displayed as 1..n
    std::string rendered;            // full prompt text, preamble included
    std::string system_preamble;     // always kSystemPreamble
};

// Throws ConfigError for an empty question or an empty path list.
PromptBundle render_prompt(std::string_view question, std::vector<std::string> paths);

struct Adjudication {
    std::string answer;
    std::vector<std::size_t> supporting_indices;  // 1-based, all within [1, num_paths]
    std::string rationale;
    std::string raw_response;
    bool dropped_indices = false;  // some cited indices were out of range
};

// The response lacked an "Answer:" section or the answer was empty.
class ResponseParseError : public Error {
public:
    ResponseParseError(const std::string& what, std::string raw)
        : Error(what), raw_(std::move(raw)) {}
    const std::string& raw_text() const noexcept { return raw_; }

private:
    std::string raw_;
};

// The endpoint could not be reached or answered with a non-success status.
class TransportError : public Error {
public:
    using Error::Error;
};

// Extracts "Answer:", "Supporting path(s): [i, j]" and "Rationale:" sections,
// case-insensitively. Out-of-range indices are dropped and flagged.
Adjudication parse_response(std::string_view text, std::size_t num_paths);

struct ClientContract {
    std::string endpoint;                         // http(s)://host[:port]/path
    double timeout_seconds = 60.0;
    std::size_t max_retries = 0;                  // transport failures only
    std::string token_env = "PATHHD_LLM_TOKEN";   // bearer token variable; unset means no auth
    int max_tokens = 256;
    double temperature = 0.0;

    // Throws ConfigError unless timeout > 0 and the endpoint has a scheme.
    void validate() const;
};

// Narrow completion interface. complete() counts every request issued.
class LlmClient {
public:
    virtual ~LlmClient() = default;

    std::string complete(const PromptBundle& bundle) {
        requests_.fetch_add(1, std::memory_order_relaxed);
        return do_complete(bundle);
    }
    std::size_t requests() const noexcept { return requests_.load(std::memory_order_relaxed); }
    virtual std::size_t max_retries() const noexcept { return 0; }

protected:
    virtual std::string do_complete(const PromptBundle& bundle) = 0;

private:
    std::atomic<std::size_t> requests_{0};
};

// POSTs {"prompt", "max_tokens", "temperature"} as JSON and reads {"text"}.
// Safe for concurrent use: each request opens its own connection.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(ClientContract contract);
    std::size_t max_retries() const noexcept override { return contract_.max_retries; }
    const ClientContract& contract() const noexcept { return contract_; }

protected:
    std::string do_complete(const PromptBundle& bundle) override;

private:
    ClientContract contract_;
    std::string scheme_host_port_;
    std::string path_;
};

// Deterministic offline stand-in: always cites path 1 and answers with its
// terminal entity.
std::string mock_response(const PromptBundle& bundle);

class MockLlmClient : public LlmClient {
protected:
    std::string do_complete(const PromptBundle& bundle) override { return mock_response(bundle); }
};

struct CallStats {
    std::size_t attempts = 0;   // requests issued, retries included
    std::size_t completed = 0;  // responses received (the LLM calls that count)
};

// One request-response cycle, retried only on TransportError. Parse failures
// are never retried. Throws TransportError or ResponseParseError.
Adjudication adjudicate(LlmClient& client, const PromptBundle& bundle, CallStats* stats = nullptr);

}  // namespace pathhd
