#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>

#include "statgate/api/gateway.hpp"

namespace statgate::api {

namespace detail {

inline ApiRequest translate(const httplib::Request& in) {
  ApiRequest out;
  out.method = in.method;
  out.path = in.path;
  for (const auto& [k, v] : in.params) out.query.emplace_back(k, v);
  std::string ct = in.get_header_value("Content-Type");
  auto semi = ct.find(';');
  if (semi != std::string::npos) ct = ct.substr(0, semi);
  for (auto& c : ct) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  out.content_type = ct;
  out.body = in.body;
  if (in.is_multipart_form_data()) {
    for (const auto& [name, item] : in.files)
      out.multipart.push_back(MultipartItem{name, item.filename, item.content});
  }
  return out;
}

inline void apply(const ApiResponse& from, httplib::Response& to) {
  to.status = from.status;
  for (const auto& [k, v] : from.headers) to.set_header(k, v);
  to.set_content(from.body, from.content_type);
}

}  // namespace detail

// HTTP/1.1 binding: requests are handled concurrently by a worker pool;
// each RPC runs in its own evaluation context, so two calls always make
// simultaneous progress. A background thread sweeps expired sessions.
class HttpServer {
 public:
  HttpServer(Gateway& gateway, size_t worker_threads = 64)
      : gateway_(gateway) {
    srv_.new_task_queue = [worker_threads] {
      return new httplib::ThreadPool(worker_threads);
    };
    srv_.set_payload_max_length(gateway_.config().max_body);
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      detail::apply(gateway_.handle(detail::translate(req)), res);
    };
    srv_.Get(".*", handler);
    srv_.Post(".*", handler);
    // anything that reaches the error handler without a status set by us
    // is an unrouted method
    srv_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (req.method != "GET" && req.method != "POST") {
        res.status = 405;
        res.set_content("method " + req.method + " is not allowed\n", "text/plain");
      } else if (res.body.empty()) {
        res.set_content("no route for " + req.path + "\n", "text/plain");
      }
    });
  }

  ~HttpServer() { stop(); }

  // Binds and serves; blocks until stop(). Returns false on bind failure.
  bool listen(const std::string& host, int port) {
    if (!srv_.bind_to_port(host, port)) return false;
    port_ = port;
    start_evictor();
    return srv_.listen_after_bind();
  }

  // Binds an ephemeral port and serves on a background thread (tests).
  int start_background(const std::string& host = "127.0.0.1") {
    int port = srv_.bind_to_any_port(host);
    if (port <= 0) return -1;
    port_ = port;
    start_evictor();
    serve_thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
    return port;
  }

  int port() const { return port_; }

  void stop() {
    bool was_running = !stopped_.exchange(true);
    if (!was_running) return;
    {
      std::lock_guard<std::mutex> lock(evict_mu_);
      evict_stop_ = true;
    }
    evict_cv_.notify_all();
    if (evictor_.joinable()) evictor_.join();
    srv_.stop();
    if (serve_thread_.joinable()) serve_thread_.join();
  }

 private:
  void start_evictor() {
    evictor_ = std::thread([this] {
      std::unique_lock<std::mutex> lock(evict_mu_);
      while (!evict_stop_) {
        evict_cv_.wait_for(lock, std::chrono::seconds(60),
                           [this] { return evict_stop_; });
        if (evict_stop_) break;
        lock.unlock();
        gateway_.sessions().evict_expired(store::SessionStore::unix_now());
        lock.lock();
      }
    });
  }

  Gateway& gateway_;
  httplib::Server srv_;
  std::thread serve_thread_;
  std::thread evictor_;
  std::mutex evict_mu_;
  std::condition_variable evict_cv_;
  bool evict_stop_ = false;
  std::atomic<bool> stopped_{false};
  int port_ = -1;
};

}  // namespace statgate::api
