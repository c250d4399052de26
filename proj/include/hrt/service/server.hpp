#pragma once

#include "hrt/service/config.hpp"

#include <memory>

namespace hrt::service {

/// WebSocket session server. One port serves both the wire protocol (any
/// path, upgraded) and plain HTTP: GET /health, GET /sessions and
/// GET /sessions/<id>/snapshot. Each session ticks on its own strand;
/// frames from its socket are posted onto that strand.
class Server {
public:
    explicit Server(ServiceConfig cfg);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds, starts the worker threads and returns the bound port (useful
    /// with port 0).
    unsigned short start();
    /// Closes the listener and every socket, then joins the workers.
    void stop();
    /// start(), then block until SIGINT/SIGTERM.
    void run();

    std::size_t session_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace hrt::service
