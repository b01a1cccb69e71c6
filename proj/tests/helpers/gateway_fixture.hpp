#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include "statgate/api/gateway.hpp"

namespace testgw {

using namespace statgate;
namespace fs = std::filesystem;

inline void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << content;
}

// A package root with a demo package mirroring the one shipped in
// packages/: builtin re-exports, the cats data set, manuals, files.
inline void populate_demo_package(const fs::path& root) {
  fs::path demo = root / "demo";
  write_file(demo / "MANIFEST", "name: demo\nversion: 1.0.0\n");
  write_file(demo / "R" / "exports.r",
             "c <- c\nidentity <- identity\nmean <- mean\nsum <- sum\n"
             "rnorm <- rnorm\nrunif <- runif\nset_seed <- set_seed\n"
             "lsfit <- lsfit\nplot <- plot\nhist <- hist\ntitle <- title\n"
             "rep <- rep\nread_csv <- read_csv\nwrite_csv <- write_csv\n"
             "paste <- paste\nmin <- min\nmax <- max\nlength <- length\n"
             "sort <- sort\nhead <- head\nnrow <- nrow\n");
  write_file(demo / "data" / "cats.csv",
             "Sex,Bwt,Hwt\nF,2,7\nF,2.1,7.4\nF,2.3,9.5\nM,2.9,9.8\nM,3.2,11.9\nM,3.9,14.5\n");
  write_file(demo / "man" / "cats.txt",
             "name: cats\ntitle: Cat weights\ndescription: Six cats.\nusage: cats\n");
  write_file(demo / "man" / "lsfit.txt",
             "name: lsfit\ntitle: Least squares fit\nusage: lsfit(x, y)\n"
             "arguments:\n  x: predictors\n  y: response\n");
  write_file(demo / "NEWS", "demo 1.0.0\n");
  write_file(demo / "scripts" / "ch01.r",
             "x <- c(1.2, 2.4, 3.1, 4.8, 5)\n"
             "y <- c(2.1, 4, 6.2, 9.5, 10.1)\n"
             "fit <- lsfit(x, y)\n"
             "plot(x, y)\n"
             "title(\"ch01\")\n"
             "fit\n");
  write_file(demo / "scripts" / "ch02.tex", "\\documentclass{article}\n");
}

struct GatewayFixture {
  fs::path root;
  api::GatewayConfig cfg;
  std::unique_ptr<api::Gateway> gateway;

  explicit GatewayFixture(std::chrono::milliseconds timeout = std::chrono::seconds(20),
                          uint64_t cell_limit = 10'000'000) {
    root = fs::temp_directory_path() /
           ("statgate-gw-" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    populate_demo_package(root / "packages");
    cfg.package_root = root / "packages";
    cfg.session_root = root / "sessions";
    cfg.timeout = timeout;
    cfg.cell_limit = cell_limit;
    gateway = std::make_unique<api::Gateway>(cfg);
    gateway->load_packages();
  }

  ~GatewayFixture() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }

  api::ApiResponse get(const std::string& path,
                       std::vector<std::pair<std::string, std::string>> query = {}) {
    api::ApiRequest req;
    req.method = "GET";
    req.path = path;
    req.query = std::move(query);
    return gateway->handle(req);
  }

  api::ApiResponse post_form(const std::string& path, const std::string& body) {
    api::ApiRequest req;
    req.method = "POST";
    req.path = path;
    req.content_type = "application/x-www-form-urlencoded";
    req.body = body;
    return gateway->handle(req);
  }

  api::ApiResponse post_json(const std::string& path, const std::string& body) {
    api::ApiRequest req;
    req.method = "POST";
    req.path = path;
    req.content_type = "application/json";
    req.body = body;
    return gateway->handle(req);
  }

  api::ApiResponse post_multipart(const std::string& path,
                                  std::vector<api::MultipartItem> items) {
    api::ApiRequest req;
    req.method = "POST";
    req.path = path;
    req.content_type = "multipart/form-data";
    req.multipart = std::move(items);
    return gateway->handle(req);
  }

  static std::string key_of(const api::ApiResponse& resp) {
    for (const auto& [k, v] : resp.headers) {
      if (k == "Location") {
        // {prefix}/tmp/{key}/
        std::string s = v;
        if (!s.empty() && s.back() == '/') s.pop_back();
        auto slash = s.find_last_of('/');
        return s.substr(slash + 1);
      }
    }
    return "";
  }
};

}  // namespace testgw
