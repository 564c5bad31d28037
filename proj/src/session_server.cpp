#include <httplib.h>

#include <thread>

#include "arena/session.hpp"

namespace arena::session {

struct Server::Impl {
    SessionManager& manager;
    ServerOptions options;
    httplib::Server http;
    std::thread worker;
    std::thread sweeper;
    std::mutex stop_mutex;
    std::condition_variable stop_cv;
    bool stopping = false;

    Impl(SessionManager& m, ServerOptions o) : manager(m), options(std::move(o)) {
        auto relay = [this](const httplib::Request& req, httplib::Response& res) {
            const HttpReply reply = handle(manager, req.method, req.path, req.body);
            res.status = reply.status;
            res.set_content(reply.body, reply.content_type);
        };
        http.Post("/sessions", relay);
        http.Get(R"(/sessions/[^/]+)", relay);
        http.Post(R"(/sessions/[^/]+/actions)", relay);
        http.Get(R"(/sessions/[^/]+/log)", relay);
        if (!options.ui_dir.empty() && !http.set_mount_point("/", options.ui_dir.string()))
            throw GameError(ErrorCode::InvalidConfig, "UI directory does not exist: " + options.ui_dir.string());
    }

    void start_sweeper() {
        sweeper = std::thread([this] {
            std::unique_lock lock(stop_mutex);
            while (!stop_cv.wait_for(lock, std::chrono::seconds(30), [this] { return stopping; })) manager.sweep();
        });
    }

    int bind() {
        const int port = options.port == 0 ? http.bind_to_any_port(options.host)
                                           : (http.bind_to_port(options.host, options.port) ? options.port : -1);
        if (port < 0)
            throw GameError(ErrorCode::InvalidConfig,
                           "cannot bind " + options.host + ":" + std::to_string(options.port));
        return port;
    }
};

Server::Server(SessionManager& manager, ServerOptions options)
    : impl_(std::make_unique<Impl>(manager, std::move(options))) {}

Server::~Server() { stop(); }

int Server::start() {
    const int port = impl_->bind();
    impl_->start_sweeper();
    impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
    return port;
}

void Server::run() {
    impl_->bind();
    impl_->start_sweeper();
    impl_->http.listen_after_bind();
}

void Server::stop() {
    {
        std::lock_guard lock(impl_->stop_mutex);
        impl_->stopping = true;
    }
    impl_->stop_cv.notify_all();
    impl_->http.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
    if (impl_->sweeper.joinable()) impl_->sweeper.join();
}

}  // namespace arena::session
