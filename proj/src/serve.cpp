/*
 * serve.cpp
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

#include "serve.hpp"

#include <httplib.h>

#include <cmath>

#include "error.hpp"
#include "telemetry.hpp"

namespace hrcguard {

namespace {

constexpr std::size_t kEventTail = 32;

std::string error_body(const std::string& message) {
    nlohmann::ordered_json j;
    j["version"] = kTelemetryVersion;
    j["ok"] = false;
    j["error"] = message;
    return j.dump();
}

}  // namespace

ServeSession::ServeSession(ScenarioConfig config)
    : config_(std::move(config)), sim_(std::make_unique<Simulator>(config_)) {
    publish();
}

std::optional<std::string> ServeSession::submit(const ControlMessage& msg) {
    std::lock_guard lock(queue_mutex_);
    if (msg.type == ControlType::Drag || msg.type == ControlType::RemoveOperator) {
        if (!msg.id || !known_ids_.count(*msg.id)) {
            return "no operator with id " + std::to_string(msg.id.value_or(-1));
        }
    }
    if (msg.type == ControlType::AddOperator && msg.id && known_ids_.count(*msg.id)) {
        return "operator " + std::to_string(*msg.id) + " already exists";
    }
    queue_.push_back(msg);
    return std::nullopt;
}

void ServeSession::reset(std::optional<std::uint64_t> seed) {
    if (seed) config_.seed = *seed;
    sim_ = std::make_unique<Simulator>(config_);
    recorded_.clear();
    std::lock_guard lock(snapshot_mutex_);
    tail_.clear();
}

void ServeSession::tick() {
    std::vector<ControlMessage> pending;
    {
        std::lock_guard lock(queue_mutex_);
        pending.swap(queue_);
    }
    for (const auto& msg : pending) {
        switch (msg.type) {
            case ControlType::Pause: paused_ = true; break;
            case ControlType::Resume: paused_ = false; break;
            case ControlType::Reset: {
                std::lock_guard lock(queue_mutex_);
                reset(std::nullopt);
                break;
            }
            case ControlType::SetSeed: {
                std::lock_guard lock(queue_mutex_);
                reset(msg.seed);
                break;
            }
            default: {
                sim_->enqueue_control(msg);
                std::lock_guard lock(queue_mutex_);
                recorded_.push_back({sim_->world().step + 1, msg});
                break;
            }
        }
    }
    if (!paused_) {
        const std::vector<Event> events = sim_->step();
        std::lock_guard lock(snapshot_mutex_);
        for (const auto& e : events) tail_.push_back(e);
        while (tail_.size() > kEventTail) tail_.pop_front();
    }
    publish();
}

void ServeSession::publish() {
    {
        std::lock_guard lock(queue_mutex_);
        known_ids_.clear();
        for (const auto& op : sim_->world().operators) known_ids_.insert(op.id);
    }
    std::lock_guard lock(snapshot_mutex_);
    const std::vector<Event> tail(tail_.begin(), tail_.end());
    auto json = std::make_shared<const std::string>(telemetry_snapshot(*sim_, paused_, tail).dump());
    snapshot_ = {snapshot_.sequence + 1, std::move(json)};
    snapshot_cv_.notify_all();
}

ServeSession::Snapshot ServeSession::latest() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
}

ServeSession::Snapshot ServeSession::wait_newer(std::uint64_t after,
                                                std::chrono::milliseconds timeout) const {
    std::unique_lock lock(snapshot_mutex_);
    snapshot_cv_.wait_for(lock, timeout, [&] { return snapshot_.sequence > after; });
    return snapshot_;
}

std::vector<ScheduledControl> ServeSession::recorded_controls() const {
    std::lock_guard lock(queue_mutex_);
    return recorded_;
}

ScenarioConfig ServeSession::replay_config() const {
    std::lock_guard lock(queue_mutex_);
    ScenarioConfig c = config_;
    c.controls.insert(c.controls.end(), recorded_.begin(), recorded_.end());
    std::stable_sort(c.controls.begin(), c.controls.end(),
                     [](const ScheduledControl& a, const ScheduledControl& b) {
                         return a.step < b.step;
                     });
    return c;
}

ServerOptions parse_endpoint(const std::string& endpoint, ServerOptions base) {
    std::string host = base.host;
    std::string port_text = endpoint;
    if (const auto colon = endpoint.rfind(':'); colon != std::string::npos) {
        if (colon > 0) host = endpoint.substr(0, colon);
        port_text = endpoint.substr(colon + 1);
    }
    int port = -1;
    try {
        std::size_t used = 0;
        port = std::stoi(port_text, &used);
        if (used != port_text.size()) port = -1;
    } catch (const std::exception&) {
        port = -1;
    }
    if (port < 0 || port > 65535 || host.empty()) {
        fail(ErrorCode::InvalidArgument, "endpoint must look like host:port, got '" + endpoint + "'");
    }
    base.host = host;
    base.port = port;
    return base;
}

Server::Server(ScenarioConfig config, ServerOptions options)
    : options_(std::move(options)), session_(std::move(config)) {
    require(std::isfinite(options_.realtime_factor) && options_.realtime_factor > 0.0,
            "realtime factor must be positive");
}

Server::~Server() { stop(); }

void Server::start() {
    http_ = std::make_unique<httplib::Server>();
    auto& http = *http_;

    http.Get("/api/v1/telemetry", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(*session_.latest().json, "application/json");
    });

    http.Get("/api/v1/stream", [this](const httplib::Request&, httplib::Response& res) {
        auto last = std::make_shared<std::uint64_t>(0);
        res.set_chunked_content_provider(
            "application/x-hrcguard-stream",
            [this, last](std::size_t, httplib::DataSink& sink) {
                if (!running_) return false;
                const auto snap = session_.wait_newer(*last, std::chrono::milliseconds(250));
                if (snap.sequence > *last) {
                    *last = snap.sequence;
                    const std::string framed = frame_message(*snap.json);
                    if (!sink.write(framed.data(), framed.size())) return false;
                }
                return running_.load();
            });
    });

    http.Post("/api/v1/control", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            const ControlMessage msg = parse_control(nlohmann::json::parse(req.body));
            if (const auto refused = session_.submit(msg)) {
                res.status = 409;
                res.set_content(error_body(*refused), "application/json");
                return;
            }
            nlohmann::ordered_json ok;
            ok["version"] = kTelemetryVersion;
            ok["ok"] = true;
            ok["accepted"] = to_json(msg);
            res.set_content(ok.dump(), "application/json");
        } catch (const nlohmann::json::exception& e) {
            res.status = 400;
            res.set_content(error_body(std::string("malformed JSON: ") + e.what()),
                            "application/json");
        } catch (const Error& e) {
            res.status = 400;
            res.set_content(error_body(e.what()), "application/json");
        }
    });

    if (options_.static_dir) {
        if (!http.set_mount_point("/", options_.static_dir->string())) {
            fail(ErrorCode::Io, "static directory '" + options_.static_dir->string() + "' not found");
        }
    }

    if (options_.port == 0) {
        port_ = http.bind_to_any_port(options_.host);
    } else {
        port_ = http.bind_to_port(options_.host, options_.port) ? options_.port : -1;
    }
    if (port_ < 0) {
        fail(ErrorCode::Io, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
    }
    running_ = true;
    http_thread_ = std::thread([this] { http_->listen_after_bind(); });
    loop_thread_ = std::thread([this] { loop(); });
}

void Server::loop() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(
        session_.simulator().config().dt / options_.realtime_factor));
    auto next = clock::now();
    while (running_) {
        session_.tick();
        next += period;
        std::unique_lock lock(stop_mutex_);
        stop_cv_.wait_until(lock, next, [this] { return !running_; });
    }
}

void Server::stop() {
    {
        std::lock_guard lock(stop_mutex_);
        if (!running_ && !http_thread_.joinable() && !loop_thread_.joinable()) return;
        running_ = false;
    }
    stop_cv_.notify_all();
    if (loop_thread_.joinable()) loop_thread_.join();
    if (http_) http_->stop();
    if (http_thread_.joinable()) http_thread_.join();
}

void Server::wait() {
    std::unique_lock lock(stop_mutex_);
    stop_cv_.wait(lock, [this] { return !running_; });
}

}  // namespace hrcguard
