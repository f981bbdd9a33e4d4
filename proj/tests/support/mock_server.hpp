#pragma once

// In-process mock of the candidates endpoint, with optional failure
// injection; backs the remote-oracle tests and the acceptance suite.

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <functional>
#include <string>
#include <thread>

namespace proofkit::testsupport {

class MockCandidateServer {
public:
    using Responder = std::function<std::vector<std::pair<std::string, double>>(
        const std::string& tacticState)>;

    // failEvery > 0 makes every failEvery-th request return HTTP 500.
    MockCandidateServer(Responder responder, int failEvery = 0)
        : responder_(std::move(responder)), failEvery_(failEvery) {
        server_.Post("/candidates", [this](const httplib::Request& req, httplib::Response& res) {
            std::uint64_t n = requests_.fetch_add(1) + 1;
            if (failEvery_ > 0 && n % static_cast<std::uint64_t>(failEvery_) == 0) {
                res.status = 500;
                res.set_content("injected failure", "text/plain");
                return;
            }
            nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.contains("tactic_state") ||
                !body.contains("keyword")) {
                res.status = 400;
                return;
            }
            nlohmann::json out;
            out["candidates"] = nlohmann::json::array();
            for (const auto& [text, logprob] :
                 responder_(body["tactic_state"].get<std::string>())) {
                out["candidates"].push_back({{"text", text}, {"logprob", logprob}});
            }
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockCandidateServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::uint64_t requests() const { return requests_.load(); }

private:
    httplib::Server server_;
    Responder responder_;
    int failEvery_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<std::uint64_t> requests_{0};
};

} // namespace proofkit::testsupport
