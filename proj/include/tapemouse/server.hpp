#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "tapemouse/config.hpp"

namespace tapemouse {

/// WebSocket front end for Session: one thread and one Session per
/// connection, frames handled in arrival order.
class Server {
public:
    /// Binds immediately; port 0 picks a free port (see port()).
    Server(const PipelineConfig& cfg, std::uint16_t port, const std::string& address = "0.0.0.0");
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    /// Accepts connections until stop() is called.
    void run();

    /// Stops accepting, shuts down open connections and joins their threads.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::uint16_t port_ = 0;
};

}  // namespace tapemouse
