#include "proofkit/remote.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>

namespace proofkit {

RemoteOracle::RemoteOracle(std::string endpoint, std::chrono::milliseconds timeout,
                           std::size_t n)
    : endpoint_(std::move(endpoint)), timeout_(timeout), n_(n) {
    if (endpoint_.find("://") == std::string::npos) endpoint_ = "http://" + endpoint_;
}

Candidates RemoteOracle::query(const std::string& stateString) {
    requests_.fetch_add(1, std::memory_order_relaxed);

    nlohmann::json body;
    body["tactic_state"] = stateString;
    body["n"] = n_;
    body["keyword"] = "PROOFSTEP";

    // one client per request keeps the oracle shareable across search workers
    httplib::Client client(endpoint_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);

    auto res = client.Post("/candidates", body.dump(), "application/json");
    if (!res || res->status != 200) {
        failures_.fetch_add(1, std::memory_order_relaxed);
        return {};
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("candidates") ||
        !j["candidates"].is_array()) {
        failures_.fetch_add(1, std::memory_order_relaxed);
        return {};
    }
    Candidates out;
    for (const auto& c : j["candidates"]) {
        if (!c.is_object() || !c.contains("text") || !c.contains("logprob") ||
            !c["text"].is_string() || !c["logprob"].is_number()) {
            failures_.fetch_add(1, std::memory_order_relaxed);
            return {};
        }
        out.emplace_back(c["text"].get<std::string>(), c["logprob"].get<double>());
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (out.size() > n_) out.resize(n_);
    return out;
}

std::unique_ptr<RemoteOracle> remote_oracle(const std::string& endpoint,
                                            std::chrono::milliseconds timeout, std::size_t n) {
    return std::make_unique<RemoteOracle>(endpoint, timeout, n);
}

} // namespace proofkit
