#include "hrt/service/server.hpp"

#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace hrt::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class Host;

class WsConn : public std::enable_shared_from_this<WsConn> {
public:
    WsConn(tcp::socket&& s, std::function<std::shared_ptr<Host>(const std::string&)> lookup)
        : ws_(std::move(s)), lookup_(std::move(lookup)) {}

    void start(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (!ec) self->read();
        });
    }

    /// Thread-safe: queued onto the socket's strand.
    void send(std::string frame) {
        net::post(ws_.get_executor(), [self = shared_from_this(), f = std::move(frame)]() mutable {
            if (self->closed_) return;
            self->queue_.push_back(std::move(f));
            if (self->queue_.size() == 1) self->write();
        });
    }

    void close() {
        net::post(ws_.get_executor(), [self = shared_from_this()] {
            if (self->closed_) return;
            self->closed_ = true;
            self->ws_.async_close(websocket::close_code::normal, [self](beast::error_code) {});
        });
    }

private:
    void read();
    void on_closed();

    void write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;
            self->queue_.pop_front();
            if (!self->queue_.empty() && !self->closed_) self->write();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buf_;
    std::deque<std::string> queue_;
    std::function<std::shared_ptr<Host>(const std::string&)> lookup_;
    std::shared_ptr<Host> host_;
    bool closed_ = false;
};

/// Owns one Session; everything that touches it runs on strand_.
class Host : public std::enable_shared_from_this<Host> {
public:
    Host(net::io_context& ioc, std::string id, SessionConfig cfg, std::filesystem::path record_dir)
        : strand_(net::make_strand(ioc)),
          timer_(strand_),
          period_(std::chrono::microseconds(1'000'000 / cfg.tick_hz)),
          session_(std::move(id), std::move(cfg)),
          record_dir_(std::move(record_dir)) {
        cache_snapshot();
    }

    void start() {
        net::post(strand_, [self = shared_from_this()] {
            self->next_ = std::chrono::steady_clock::now() + self->period_;
            self->schedule();
        });
    }

    void stop() {
        net::post(strand_, [self = shared_from_this()] {
            self->stopped_ = true;
            self->timer_.cancel();
            if (auto c = self->conn_.lock()) c->close();
        });
    }

    void attach(const std::shared_ptr<WsConn>& c, std::string join_frame) {
        net::post(strand_, [self = shared_from_this(), c, f = std::move(join_frame)] {
            auto bound = self->conn_.lock();
            if (bound && bound != c && self->session_.connected()) {
                // Not routed through the session: its seq belongs to the bound client.
                ServerMessage m;
                m.kind = ServerKind::Error;
                m.session = self->session_.id();
                m.body = {{"error", "a client is already bound to this session"}};
                c->send(m.frame());
                c->close();
                return;
            }
            self->conn_ = c;
            self->session_.handle_frame(f);
            self->flush();
        });
    }

    void frame(const std::shared_ptr<WsConn>& c, std::string text) {
        net::post(strand_, [self = shared_from_this(), c, t = std::move(text)] {
            if (self->conn_.lock() != c) return;
            self->session_.handle_frame(t);
            self->flush();
        });
    }

    void detach(const std::shared_ptr<WsConn>& c) {
        net::post(strand_, [self = shared_from_this(), c] {
            if (self->conn_.lock() != c) return;
            self->conn_.reset();
            self->session_.disconnect();
            self->cache_snapshot();
        });
    }

    std::string snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return snapshot_;
    }

private:
    void schedule() {
        if (stopped_) return;
        timer_.expires_at(next_);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (ec || self->stopped_) return;
            self->next_ += self->period_;
            self->session_.tick();
            self->flush();
            if (self->session_.finished()) {
                self->save_record();
                return;
            }
            self->schedule();
        });
    }

    void flush() {
        const auto msgs = session_.drain();
        if (auto c = conn_.lock())
            for (const ServerMessage& m : msgs) c->send(m.frame());
        cache_snapshot();
    }

    void cache_snapshot() {
        json body = session_.snapshot_body();
        body["session"] = session_.id();
        std::lock_guard<std::mutex> lock(mu_);
        snapshot_ = body.dump();
    }

    void save_record() {
        if (record_dir_.empty() || saved_) return;
        saved_ = true;
        try {
            std::filesystem::create_directories(record_dir_);
            session_.record().save(record_dir_ / (session_.id() + ".jsonl"));
        } catch (const std::exception& e) {
            std::cerr << "hrt: could not save record for " << session_.id() << ": " << e.what() << "\n";
        }
    }

    net::strand<net::io_context::executor_type> strand_;
    net::steady_timer timer_;
    std::chrono::steady_clock::duration period_;
    std::chrono::steady_clock::time_point next_{};
    Session session_;
    std::filesystem::path record_dir_;
    std::weak_ptr<WsConn> conn_;
    bool stopped_ = false;
    bool saved_ = false;
    mutable std::mutex mu_;
    std::string snapshot_;
};

void WsConn::read() {
    ws_.async_read(buf_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) {
            self->on_closed();
            return;
        }
        std::string text = beast::buffers_to_string(self->buf_.data());
        self->buf_.consume(self->buf_.size());
        if (!self->host_) {
            // The first frame must be a Join naming (or asking for) a session.
            try {
                const ClientMessage m = parse_client_message(text);
                const auto* j = std::get_if<Join>(&m);
                if (!j) throw ProtocolError("the first frame must be Join");
                self->host_ = self->lookup_(j->session_token);
                self->host_->attach(self, text);
            } catch (const ProtocolError& e) {
                ServerMessage err;
                err.kind = ServerKind::Error;
                err.body = {{"error", e.what()}};
                self->send(err.frame());
            }
        } else {
            self->host_->frame(self, std::move(text));
        }
        self->read();
    });
}

void WsConn::on_closed() {
    closed_ = true;
    if (host_) host_->detach(shared_from_this());
}

http::response<http::string_body> json_response(http::status status, const std::string& body, unsigned version) {
    http::response<http::string_body> res{status, version};
    res.set(http::field::content_type, "application/json");
    res.set(http::field::access_control_allow_origin, "*");
    res.body() = body;
    res.prepare_payload();
    return res;
}

} // namespace

struct Server::Impl {
    explicit Impl(ServiceConfig c) : cfg(std::move(c)), ioc(cfg.threads), acceptor(ioc) {}

    ServiceConfig cfg;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::vector<std::thread> workers;
    mutable std::mutex mu;
    std::map<std::string, std::shared_ptr<Host>> hosts;
    std::uint64_t created = 0;
    std::mt19937_64 ids{std::random_device{}()};
    bool running = false;

    std::shared_ptr<Host> host_for(const std::string& token) {
        std::lock_guard<std::mutex> lock(mu);
        std::string id = token;
        if (id.empty()) {
            char hex[17];
            std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(ids()));
            id = hex;
        }
        auto it = hosts.find(id);
        if (it != hosts.end()) return it->second;
        auto h = std::make_shared<Host>(ioc, id, cfg.session_config(created++), cfg.record_dir);
        hosts.emplace(id, h);
        h->start();
        return h;
    }

    std::shared_ptr<Host> find(const std::string& id) const {
        std::lock_guard<std::mutex> lock(mu);
        auto it = hosts.find(id);
        return it == hosts.end() ? nullptr : it->second;
    }

    http::response<http::string_body> route(const http::request<http::string_body>& req) const {
        const std::string target(req.target());
        if (req.method() != http::verb::get) return json_response(http::status::method_not_allowed, R"({"error":"GET only"})", req.version());
        if (target == "/health") {
            std::lock_guard<std::mutex> lock(mu);
            return json_response(http::status::ok, json{{"status", "ok"}, {"sessions", hosts.size()}}.dump(), req.version());
        }
        if (target == "/sessions") {
            json ids = json::array();
            std::lock_guard<std::mutex> lock(mu);
            for (const auto& [id, _] : hosts) ids.push_back(id);
            return json_response(http::status::ok, json{{"sessions", ids}}.dump(), req.version());
        }
        const std::string prefix = "/sessions/", suffix = "/snapshot";
        if (target.size() > prefix.size() + suffix.size() && target.rfind(prefix, 0) == 0 &&
            target.compare(target.size() - suffix.size(), suffix.size(), suffix) == 0) {
            const std::string id = target.substr(prefix.size(), target.size() - prefix.size() - suffix.size());
            if (auto h = find(id)) return json_response(http::status::ok, h->snapshot(), req.version());
            return json_response(http::status::not_found, R"({"error":"no such session"})", req.version());
        }
        return json_response(http::status::not_found, R"({"error":"not found"})", req.version());
    }

    void accept() {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
            if (ec) return; // listener closed
            serve(std::move(s));
            accept();
        });
    }

    void serve(tcp::socket s) {
        struct HttpConn : std::enable_shared_from_this<HttpConn> {
            HttpConn(tcp::socket&& sock, Impl& i) : stream(std::move(sock)), impl(i) {}
            beast::tcp_stream stream;
            beast::flat_buffer buf;
            http::request<http::string_body> req;
            http::response<http::string_body> res;
            Impl& impl;

            void read() {
                stream.expires_after(std::chrono::seconds(30));
                http::async_read(stream, buf, req, [self = shared_from_this()](beast::error_code ec, std::size_t) {
                    if (ec) return;
                    if (websocket::is_upgrade(self->req)) {
                        Impl& impl = self->impl;
                        self->stream.expires_never();
                        auto ws = std::make_shared<WsConn>(self->stream.release_socket(),
                                                           [&impl](const std::string& t) { return impl.host_for(t); });
                        ws->start(std::move(self->req));
                        return;
                    }
                    self->res = self->impl.route(self->req);
                    self->res.keep_alive(self->req.keep_alive());
                    http::async_write(self->stream, self->res, [self](beast::error_code wec, std::size_t) {
                        if (wec) return;
                        if (!self->res.keep_alive()) {
                            beast::error_code ignored;
                            self->stream.socket().shutdown(tcp::socket::shutdown_send, ignored);
                            return;
                        }
                        self->req = {};
                        self->read();
                    });
                });
            }
        };
        std::make_shared<HttpConn>(std::move(s), *this)->read();
    }
};

Server::Server(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) { impl_->cfg.validate(); }

Server::~Server() { stop(); }

unsigned short Server::start() {
    Impl& i = *impl_;
    if (i.running) return i.acceptor.local_endpoint().port();
    const tcp::endpoint ep(net::ip::make_address(i.cfg.host), static_cast<unsigned short>(i.cfg.port));
    i.acceptor.open(ep.protocol());
    i.acceptor.set_option(net::socket_base::reuse_address(true));
    i.acceptor.bind(ep);
    i.acceptor.listen(net::socket_base::max_listen_connections);
    i.accept();
    i.running = true;
    for (int t = 0; t < i.cfg.threads; ++t) i.workers.emplace_back([&i] { i.ioc.run(); });
    return i.acceptor.local_endpoint().port();
}

void Server::stop() {
    Impl& i = *impl_;
    if (!i.running) return;
    i.running = false;
    net::post(i.ioc, [&i] {
        beast::error_code ignored;
        i.acceptor.close(ignored);
    });
    {
        std::lock_guard<std::mutex> lock(i.mu);
        for (auto& [_, h] : i.hosts) h->stop();
    }
    // Give the close frames a moment, then wind the loop down.
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    i.ioc.stop();
    for (std::thread& t : i.workers) t.join();
    i.workers.clear();
}

void Server::run() {
    const unsigned short port = start();
    std::cerr << "hrt: serving on " << impl_->cfg.host << ":" << port << " at " << impl_->cfg.tick_hz << " Hz\n";
    std::promise<void> done;
    net::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
    signals.async_wait([&done](beast::error_code, int) { done.set_value(); });
    done.get_future().wait();
    stop();
}

std::size_t Server::session_count() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->hosts.size();
}

} // namespace hrt::service
