#include "tapemouse/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <iostream>

#include "tapemouse/session.hpp"

namespace tapemouse {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

struct Connection {
    explicit Connection(tcp::socket s) : socket(std::move(s)) {}
    tcp::socket socket;
    std::thread worker;
    std::atomic<bool> done{false};
};

void serve_connection(Connection& conn, const PipelineConfig& cfg) {
    try {
        websocket::stream<tcp::socket&> ws(conn.socket);
        ws.read_message_max(16u << 20);
        ws.accept();
        Session session(cfg);
        beast::flat_buffer buffer;
        while (true) {
            buffer.clear();
            ws.read(buffer);
            const auto data = buffer.cdata();
            const auto* bytes = static_cast<const std::uint8_t*>(data.data());
            const SessionReply reply =
                ws.got_text()
                    ? session.on_text(std::string_view(reinterpret_cast<const char*>(bytes),
                                                       data.size()))
                    : session.on_binary(std::span<const std::uint8_t>(bytes, data.size()));
            ws.text(true);
            for (const std::string& m : reply.messages) {
                ws.write(asio::buffer(m));
            }
            if (reply.close) {
                ws.close(websocket::close_reason(websocket::close_code::policy_error));
                break;
            }
        }
    } catch (const beast::system_error& e) {
        if (e.code() != websocket::error::closed && e.code() != asio::error::eof &&
            e.code() != asio::error::connection_reset && e.code() != asio::error::not_connected &&
            e.code() != asio::error::bad_descriptor && e.code() != asio::error::operation_aborted) {
            std::cerr << "session ended: " << e.code().message() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "session ended: " << e.what() << "\n";
    }
    conn.done = true;
}

}  // namespace

struct Server::Impl {
    Impl(const PipelineConfig& c, const std::string& address, std::uint16_t port)
        : cfg(c), acceptor(io, tcp::endpoint(asio::ip::make_address(address), port)) {}

    PipelineConfig cfg;
    asio::io_context io;
    tcp::acceptor acceptor;
    std::atomic<bool> stopping{false};
    std::mutex mutex;
    std::list<std::unique_ptr<Connection>> connections;

    void reap_finished() {
        std::lock_guard lock(mutex);
        for (auto it = connections.begin(); it != connections.end();) {
            if ((*it)->done) {
                (*it)->worker.join();
                it = connections.erase(it);
            } else {
                ++it;
            }
        }
    }
};

Server::Server(const PipelineConfig& cfg, std::uint16_t port, const std::string& address) {
    cfg.validate();
    // Fail on a bad skin histogram before accepting anyone.
    Detector probe(cfg);
    impl_ = std::make_unique<Impl>(cfg, address, port);
    port_ = impl_->acceptor.local_endpoint().port();
}

Server::~Server() { stop(); }

void Server::run() {
    while (!impl_->stopping) {
        tcp::socket socket(impl_->io);
        beast::error_code ec;
        impl_->acceptor.accept(socket, ec);
        if (impl_->stopping) {
            break;
        }
        if (ec) {
            continue;
        }
        impl_->reap_finished();
        std::lock_guard lock(impl_->mutex);
        if (impl_->stopping) {
            break;
        }
        auto conn = std::make_unique<Connection>(std::move(socket));
        Connection* raw = conn.get();
        raw->worker = std::thread([raw, this] { serve_connection(*raw, impl_->cfg); });
        impl_->connections.push_back(std::move(conn));
    }
}

void Server::stop() {
    if (!impl_ || impl_->stopping.exchange(true)) {
        return;
    }
    // Wake a blocking accept() with a throwaway connection.
    {
        beast::error_code ec;
        tcp::endpoint target = impl_->acceptor.local_endpoint(ec);
        if (target.address().is_unspecified()) {
            target.address(asio::ip::address_v4::loopback());
        }
        tcp::socket poke(impl_->io);
        poke.connect(target, ec);
    }
    std::lock_guard lock(impl_->mutex);
    for (auto& conn : impl_->connections) {
        beast::error_code ec;
        conn->socket.shutdown(tcp::socket::shutdown_both, ec);
    }
    for (auto& conn : impl_->connections) {
        conn->worker.join();
    }
    impl_->connections.clear();
}

}  // namespace tapemouse
