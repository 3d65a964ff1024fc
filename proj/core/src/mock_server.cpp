#include <httplib.h>

#include <map>
#include <mutex>
#include <thread>

#include "apicompose/error.hpp"
#include "apicompose/harness.hpp"

namespace apicompose {

struct MockService::Impl {
    ServiceSpec spec;
    std::map<std::string, std::pair<int, Json>> canned;
    httplib::Server server;
    std::thread thread;
    std::string base_url;
    int port = 0;

    mutable std::mutex log_mutex;
    std::vector<InvocationRecord> log;

    void handle(const httplib::Request& req, httplib::Response& res) {
        const auto matched = match_request(spec, req.method, req.path);
        int status = 404;
        if (matched) {
            const auto& [code, body] = canned.at(*matched);
            status = code;
            if (code != 204 && req.method != "HEAD") res.set_content(body.dump(), "application/json");
        } else {
            Json err = {{"error", "no endpoint matches " + req.method + " " + req.path}};
            res.set_content(err.dump(), "application/json");
        }
        res.status = status;

        InvocationRecord record;
        record.method = req.method;
        record.concrete_path = req.path;
        for (const auto& [k, v] : req.params) {
            if (!record.query.empty()) record.query += '&';
            record.query += k + "=" + v;
        }
        record.body = req.body;
        record.matched_endpoint_id = matched;
        record.status_returned = status;
        std::lock_guard lock(log_mutex);
        record.seq = log.size() + 1;
        record.timestamp = std::chrono::steady_clock::now();
        log.push_back(std::move(record));
    }
};

MockService::MockService(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

MockService::~MockService() { stop(); }

std::unique_ptr<MockService> MockService::start(ServiceSpec spec, const std::string& host, int port) {
    auto impl = std::make_unique<Impl>();
    impl->spec = std::move(spec);
    for (const auto& ep : impl->spec.endpoints) {
        const auto [status, schema] = success_response(ep);
        impl->canned.emplace(ep.endpoint_id, std::make_pair(status, synthesize_example(*schema)));
    }

    auto* raw = impl.get();
    impl->server.set_pre_routing_handler([raw](const httplib::Request& req, httplib::Response& res) {
        raw->handle(req, res);
        return httplib::Server::HandlerResponse::Handled;
    });

    if (port == 0) {
        impl->port = impl->server.bind_to_any_port(host);
        if (impl->port < 0) throw Error(ErrorCode::BindError, "cannot bind an ephemeral port on " + host);
    } else {
        if (!impl->server.bind_to_port(host, port)) {
            throw Error(ErrorCode::BindError, "cannot bind " + host + ":" + std::to_string(port));
        }
        impl->port = port;
    }
    impl->base_url = "http://" + host + ":" + std::to_string(impl->port);
    impl->thread = std::thread([raw] { raw->server.listen_after_bind(); });
    impl->server.wait_until_ready();
    return std::unique_ptr<MockService>(new MockService(std::move(impl)));
}

const std::string& MockService::base_url() const { return impl_->base_url; }
int MockService::port() const { return impl_->port; }
const ServiceSpec& MockService::spec() const { return impl_->spec; }

std::vector<InvocationRecord> MockService::log() const {
    std::lock_guard lock(impl_->log_mutex);
    return impl_->log;
}

std::size_t MockService::log_size() const {
    std::lock_guard lock(impl_->log_mutex);
    return impl_->log.size();
}

std::pair<int, Json> MockService::canned_response(const std::string& endpoint_id) const {
    auto it = impl_->canned.find(endpoint_id);
    if (it == impl_->canned.end()) throw Error(ErrorCode::UnknownEndpoint, endpoint_id);
    return it->second;
}

void MockService::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace apicompose
