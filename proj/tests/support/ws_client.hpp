#pragma once

// Minimal synchronous WebSocket client for driving the frame-stream service.

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tapemouse/session.hpp"

namespace testing_support {

class WsClient {
public:
    explicit WsClient(std::uint16_t port) : ws_(io_) {
        namespace asio = boost::asio;
        asio::ip::tcp::resolver resolver(io_);
        asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.read_message_max(16u << 20);
        ws_.handshake("127.0.0.1", "/");
    }

    ~WsClient() {
        boost::beast::error_code ec;
        ws_.close(boost::beast::websocket::close_code::normal, ec);
    }

    void text(const std::string& message) {
        ws_.text(true);
        ws_.write(boost::asio::buffer(message));
    }

    void frame(const tapemouse::Frame& f) {
        binary(tapemouse::encode_frame_message(f));
    }

    void binary(const std::string& bytes) {
        ws_.binary(true);
        ws_.write(boost::asio::buffer(bytes));
    }

    /// Next text message, or nullopt once the server has closed.
    std::optional<std::string> read() {
        boost::beast::flat_buffer buffer;
        boost::beast::error_code ec;
        ws_.read(buffer, ec);
        if (ec) {
            return std::nullopt;
        }
        return boost::beast::buffers_to_string(buffer.data());
    }

private:
    boost::asio::io_context io_;
    boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_;
};

}  // namespace testing_support
