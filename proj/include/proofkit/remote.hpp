#pragma once

#include "proofkit/search.hpp"

#include <atomic>

namespace proofkit {

// HTTP-backed oracle speaking the candidates wire protocol:
//   POST /candidates  {"tactic_state": string, "n": integer, "keyword": "PROOFSTEP"}
//   200 response      {"candidates": [{"text": string, "logprob": number}, ...]}
// Candidates are re-sorted by decreasing logprob. Transport errors, non-200
// statuses and malformed bodies degrade to an empty candidate list; a search
// is never aborted by its oracle.
class RemoteOracle : public Oracle {
public:
    RemoteOracle(std::string endpoint, std::chrono::milliseconds timeout, std::size_t n);
    Candidates query(const std::string& stateString) override;

    std::uint64_t requests() const { return requests_.load(); }
    std::uint64_t failures() const { return failures_.load(); }

private:
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
    std::size_t n_;
    std::atomic<std::uint64_t> requests_{0};
    std::atomic<std::uint64_t> failures_{0};
};

std::unique_ptr<RemoteOracle> remote_oracle(const std::string& endpoint,
                                            std::chrono::milliseconds timeout =
                                                std::chrono::milliseconds(5000),
                                            std::size_t n = 16);

} // namespace proofkit
