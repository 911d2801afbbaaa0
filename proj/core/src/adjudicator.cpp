#include "pathhd/adjudicator.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

namespace pathhd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

enum class Section { None, Answer, Supporting, Rationale };

// Recognizes a section label at the start of a line. On success returns the
// section and sets `rest` to the text after the colon.
Section match_label(std::string_view line, std::string_view& rest) {
    // Tolerate markdown emphasis around the label.
    while (!line.empty() && (line.front() == '*' || line.front() == '_' || line.front() == '#')) {
        line.remove_prefix(1);
    }
    line = trim(line);
    Section section = Section::None;
    if (starts_with_icase(line, "answer")) {
        section = Section::Answer;
        line.remove_prefix(6);
    } else if (starts_with_icase(line, "supporting path")) {
        section = Section::Supporting;
        line.remove_prefix(15);
        // "(s)", "s" or nothing
        if (starts_with_icase(line, "(s)")) line.remove_prefix(3);
        else if (starts_with_icase(line, "s")) line.remove_prefix(1);
    } else if (starts_with_icase(line, "rationale")) {
        section = Section::Rationale;
        line.remove_prefix(9);
        line = trim(line);
        // Optional parenthetical such as "(1-2 sentences)".
        if (!line.empty() && line.front() == '(') {
            const auto close = line.find(')');
            if (close == std::string_view::npos) return Section::None;
            line.remove_prefix(close + 1);
        }
    } else {
        return Section::None;
    }
    line = trim(line);
    while (!line.empty() && (line.front() == '*' || line.front() == '_')) line.remove_prefix(1);
    if (line.empty() || line.front() != ':') return Section::None;
    line.remove_prefix(1);
    while (!line.empty() && (line.front() == '*' || line.front() == '_')) line.remove_prefix(1);
    rest = trim(line);
    return section;
}

std::string getenv_or_empty(const std::string& name) {
    if (name.empty()) return {};
    const char* v = std::getenv(name.c_str());
    return v ? std::string(v) : std::string();
}

}  // namespace

std::string verbalize_path(const CandidatePath& path) {
    std::string out = path.entity_chain.empty() ? std::string() : path.entity_chain.front();
    for (std::size_t i = 0; i < path.schema.size() && i + 1 < path.entity_chain.size(); ++i) {
        out += " --";
        out += path.schema.relations[i];
        out += "--> ";
        out += path.entity_chain[i + 1];
    }
    return out;
}

PromptBundle render_prompt(std::string_view question, std::vector<std::string> paths) {
    if (trim(question).empty()) throw ConfigError("cannot render a prompt for an empty question");
    if (paths.empty()) throw ConfigError("cannot render a prompt without retrieved paths");
    std::ostringstream out;
    out << "System: " << kSystemPreamble << "\n\n";
    out << "User:\n";
    out << "Question: \"" << question << "\"\n\n";
    out << "Retrieved paths (Top-" << paths.size() << "):\n";
    for (std::size_t i = 0; i < paths.size(); ++i) out << (i + 1) << ". " << paths[i] << '\n';
    out << '\n';
    out << "Assistant (required format):\n";
    out << "Answer: <short answer>\n";
    out << "Supporting path(s): [indexes from the list above]\n";
    out << "Rationale (1-2 sentences): why those paths imply the answer.\n";

    PromptBundle b;
    b.question = std::string(question);
    b.paths = std::move(paths);
    b.rendered = out.str();
    b.system_preamble = std::string(kSystemPreamble);
    return b;
}

Adjudication parse_response(std::string_view text, std::size_t num_paths) {
    if (num_paths == 0) throw ConfigError("parse_response needs num_paths >= 1");
    std::optional<std::string> answer;
    std::optional<std::string> supporting;
    std::string rationale;
    Section current = Section::None;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        std::string_view rest;
        const Section label = match_label(line, rest);
        if (label != Section::None) {
            current = label;
            if (label == Section::Answer && !answer) answer = std::string(rest);
            else if (label == Section::Supporting && !supporting) supporting = std::string(rest);
            else if (label == Section::Rationale) rationale = std::string(rest);
            else current = Section::None;  // repeated section: ignore
        } else if (!trim(line).empty()) {
            const auto piece = std::string(trim(line));
            if (current == Section::Rationale) {
                rationale += rationale.empty() ? piece : " " + piece;
            } else if (current == Section::Supporting && supporting) {
                *supporting += " " + piece;
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    if (!answer) throw ResponseParseError("response has no 'Answer:' section", std::string(text));
    Adjudication adj;
    adj.answer = std::string(trim(*answer));
    while (!adj.answer.empty() && (adj.answer.back() == '*' || adj.answer.back() == '_')) adj.answer.pop_back();
    if (adj.answer.empty()) throw ResponseParseError("response has an empty answer", std::string(text));
    adj.rationale = std::string(trim(rationale));
    adj.raw_response = std::string(text);

    if (supporting) {
        std::string_view body = *supporting;
        const auto open = body.find('[');
        const auto close = open == std::string_view::npos ? std::string_view::npos : body.find(']', open);
        if (open != std::string_view::npos && close != std::string_view::npos) {
            body = body.substr(open + 1, close - open - 1);
        }
        std::size_t i = 0;
        while (i < body.size()) {
            if (!std::isdigit(static_cast<unsigned char>(body[i]))) {
                ++i;
                continue;
            }
            std::size_t value = 0;
            bool overflow = false;
            while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
                if (value > 1'000'000) overflow = true;
                else value = value * 10 + static_cast<std::size_t>(body[i] - '0');
                ++i;
            }
            if (overflow || value < 1 || value > num_paths) {
                adj.dropped_indices = true;
            } else if (std::find(adj.supporting_indices.begin(), adj.supporting_indices.end(), value) ==
                       adj.supporting_indices.end()) {
                adj.supporting_indices.push_back(value);
            }
        }
    }
    return adj;
}

void ClientContract::validate() const {
    if (!(timeout_seconds > 0.0) || !std::isfinite(timeout_seconds)) throw ConfigError("timeout must be > 0");
    if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0) {
        throw ConfigError("LLM endpoint must start with http:// or https://");
    }
    if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
}

HttpLlmClient::HttpLlmClient(ClientContract contract) : contract_(std::move(contract)) {
    contract_.validate();
    const auto scheme_end = contract_.endpoint.find("://") + 3;
    const auto slash = contract_.endpoint.find('/', scheme_end);
    scheme_host_port_ = contract_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : contract_.endpoint.substr(slash);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (contract_.endpoint.rfind("https://", 0) == 0) {
        throw ConfigError("https endpoints need a build with OpenSSL support");
    }
#endif
}

std::string HttpLlmClient::do_complete(const PromptBundle& bundle) {
    httplib::Client client(scheme_host_port_);
    const auto secs = static_cast<time_t>(contract_.timeout_seconds);
    const auto usecs = static_cast<time_t>((contract_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (const auto token = getenv_or_empty(contract_.token_env); !token.empty()) {
        headers.emplace("Authorization", "Bearer " + token);
    }
    const nlohmann::json body = {
        {"prompt", bundle.rendered}, {"max_tokens", contract_.max_tokens}, {"temperature", contract_.temperature}};
    const auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError("request to " + contract_.endpoint + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError("endpoint " + contract_.endpoint + " returned HTTP " + std::to_string(res->status));
    }
    try {
        const auto reply = nlohmann::json::parse(res->body);
        return reply.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed endpoint reply: ") + e.what());
    }
}

std::string mock_response(const PromptBundle& bundle) {
    const std::string& top = bundle.paths.at(0);
    const auto arrow = top.rfind("--> ");
    const std::string terminal = arrow == std::string::npos ? top : top.substr(arrow + 4);
    return "Answer: " + terminal + "\nSupporting path(s): [1]\nRationale: Path 1 is the top-ranked retrieved path and it ends at " +
           terminal + ".\n";
}

Adjudication adjudicate(LlmClient& client, const PromptBundle& bundle, CallStats* stats) {
    CallStats local;
    std::string response;
    for (std::size_t attempt = 0;; ++attempt) {
        ++local.attempts;
        try {
            response = client.complete(bundle);
            ++local.completed;
            break;
        } catch (const TransportError&) {
            if (attempt >= client.max_retries()) {
                if (stats) *stats = local;
                throw;
            }
        }
    }
    if (stats) *stats = local;
    return parse_response(response, bundle.paths.size());
}

}  // namespace pathhd
