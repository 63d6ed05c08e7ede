/*
 * serve.hpp
 *
 * This source file is part of the hrcguard open source project
 *
 * Copyright 2026 The hrcguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "control.hpp"
#include "scenario.hpp"
#include "simulator.hpp"

namespace httplib {
class Server;
}

namespace hrcguard {

/// Live session state shared between the paced simulation loop (the owner
/// that calls tick) and any number of connection handlers.
class ServeSession {
public:
    explicit ServeSession(ScenarioConfig config);

    /// Any thread. Returns an error message when the control is refused.
    std::optional<std::string> submit(const ControlMessage& msg);

    /// Owner thread: applies session controls, advances one step unless
    /// paused, publishes a snapshot.
    void tick();

    struct Snapshot {
        std::uint64_t sequence = 0;
        std::shared_ptr<const std::string> json;
    };
    Snapshot latest() const;
    /// Blocks until a snapshot newer than `after` exists or the timeout passes.
    Snapshot wait_newer(std::uint64_t after, std::chrono::milliseconds timeout) const;

    bool paused() const { return paused_.load(); }
    /// Owner thread only.
    const Simulator& simulator() const { return *sim_; }
    /// Controls applied since the last reset, keyed by the step they took
    /// effect in; replaying them as scripted controls reproduces the run.
    std::vector<ScheduledControl> recorded_controls() const;
    ScenarioConfig replay_config() const;

private:
    void publish();
    void reset(std::optional<std::uint64_t> seed);

    ScenarioConfig config_;
    std::unique_ptr<Simulator> sim_;
    std::atomic<bool> paused_{false};

    mutable std::mutex queue_mutex_;
    std::vector<ControlMessage> queue_;
    std::set<int> known_ids_;
    std::vector<ScheduledControl> recorded_;

    mutable std::mutex snapshot_mutex_;
    mutable std::condition_variable snapshot_cv_;
    Snapshot snapshot_;
    std::deque<Event> tail_;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8765;  // 0 picks a free port
    double realtime_factor = 1.0;
    std::optional<std::filesystem::path> static_dir;
};

/// "host:port" or ":port" or "port".
ServerOptions parse_endpoint(const std::string& endpoint, ServerOptions base = {});

/// HTTP front end: GET /api/v1/telemetry, GET /api/v1/stream (framed
/// snapshots), POST /api/v1/control.
class Server {
public:
    Server(ScenarioConfig config, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts the loop and connection threads.
    void start();
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();
    int port() const { return port_; }
    ServeSession& session() { return session_; }

private:
    void loop();

    ServerOptions options_;
    ServeSession session_;
    std::unique_ptr<httplib::Server> http_;
    std::thread http_thread_;
    std::thread loop_thread_;
    std::atomic<bool> running_{false};
    std::mutex stop_mutex_;
    std::condition_variable stop_cv_;
    int port_ = 0;
};

}  // namespace hrcguard
