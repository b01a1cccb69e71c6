// statgate: serve the gateway, or drive one from the command line.
//
// Exit codes for client subcommands mirror the HTTP class: 2xx -> 0,
// 4xx -> 1, 5xx -> 2, network failure -> 3. The session key is always
// the last line on stdout so shell pipelines can chain calls.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "statgate/api/gateway.hpp"
#include "statgate/api/server.hpp"
#include "statgate/version.hpp"

namespace {

statgate::api::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

struct ClientOptions {
  std::string server = "http://127.0.0.1:8004";
  std::string prefix = "/ocpu";
};

int exit_code_for_status(int status) {
  if (status >= 200 && status < 300) return 0;
  if (status >= 400 && status < 500) return 1;
  if (status >= 500) return 2;
  return 0;
}

std::unique_ptr<httplib::Client> make_client(const ClientOptions& opt) {
  auto cli = std::make_unique<httplib::Client>(opt.server);
  cli->set_connection_timeout(10);
  cli->set_read_timeout(120);
  return cli;
}

std::string absolute_target(const ClientOptions& opt, const std::string& target,
                            bool tmp_relative) {
  if (!target.empty() && target[0] == '/') return target;
  if (tmp_relative) return opt.prefix + "/tmp/" + target;
  return opt.prefix + "/" + target;
}

// Prints a 201 response: resource paths, then the key alone on the last
// line. Error bodies go to stderr.
int report_rpc_result(const httplib::Result& res) {
  if (!res) {
    std::cerr << "network failure: " << httplib::to_string(res.error()) << "\n";
    return 3;
  }
  if (res->status == 201) {
    std::cout << res->body;
    std::string location = res->get_header_value("Location");
    // .../tmp/{key}/
    std::string key = location;
    if (!key.empty() && key.back() == '/') key.pop_back();
    auto slash = key.find_last_of('/');
    if (slash != std::string::npos) key = key.substr(slash + 1);
    std::cout << key << "\n";
    return 0;
  }
  std::cerr << res->body;
  return exit_code_for_status(res->status);
}

int cmd_call(const ClientOptions& opt, const std::string& target,
             const std::vector<std::string>& args, const std::string& json_body) {
  auto cli = make_client(opt);
  std::string path = absolute_target(opt, target, false);
  httplib::Result res;
  if (!json_body.empty()) {
    res = cli->Post(path, json_body, "application/json");
  } else {
    httplib::Params params;
    for (const auto& a : args) {
      auto eq = a.find('=');
      if (eq == std::string::npos) {
        std::cerr << "arguments take the form name=value: " << a << "\n";
        return 1;
      }
      params.emplace(a.substr(0, eq), a.substr(eq + 1));
    }
    res = cli->Post(path, params);
  }
  return report_rpc_result(res);
}

int cmd_get(const ClientOptions& opt, const std::string& target,
            const std::string& out_file) {
  auto cli = make_client(opt);
  std::string path = absolute_target(opt, target, true);
  auto res = cli->Get(path);
  if (!res) {
    std::cerr << "network failure: " << httplib::to_string(res.error()) << "\n";
    return 3;
  }
  if (res->status >= 400) {
    std::cerr << res->body;
    return exit_code_for_status(res->status);
  }
  if (!out_file.empty()) {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out_file << "\n";
      return 1;
    }
    f.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
  } else {
    std::cout << res->body;
  }
  return exit_code_for_status(res->status);
}

int cmd_run(const ClientOptions& opt, const std::string& file,
            const std::vector<std::string>& args) {
  std::ifstream f(file, std::ios::binary);
  if (!f) {
    std::cerr << "cannot read " << file << "\n";
    return 1;
  }
  std::string script((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
  httplib::MultipartFormDataItems items;
  items.push_back({"script", script,
                   std::filesystem::path(file).filename().string(), "text/plain"});
  for (const auto& a : args) {
    auto eq = a.find('=');
    if (eq == std::string::npos) {
      std::cerr << "arguments take the form name=value: " << a << "\n";
      return 1;
    }
    items.push_back({a.substr(0, eq), a.substr(eq + 1), "", ""});
  }
  auto cli = make_client(opt);
  auto res = cli->Post(opt.prefix + "/run", items);
  return report_rpc_result(res);
}

int cmd_replay(const ClientOptions& opt, const std::string& key) {
  auto cli = make_client(opt);
  auto res = cli->Post(opt.prefix + "/tmp/" + key + "/replay", "", "text/plain");
  return report_rpc_result(res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statgate: an HTTP gateway for embedded data analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", statgate::kVersion);

  ClientOptions client;

  // serve
  auto* serve = app.add_subcommand("serve", "run the gateway server");
  std::string addr = "127.0.0.1:8004";
  statgate::api::GatewayConfig cfg;
  double ttl_seconds = 86400;
  double timeout_seconds = 30;
  serve->add_option("--addr", addr, "host:port to bind")->envname("STATGATE_ADDR");
  serve->add_option("--root-prefix", cfg.root_prefix, "API root prefix")
      ->envname("STATGATE_ROOT_PREFIX");
  serve->add_option("--package-root", cfg.package_root, "directory of packages")
      ->envname("STATGATE_PACKAGE_ROOT");
  serve->add_option("--session-root", cfg.session_root, "directory for sessions")
      ->envname("STATGATE_SESSION_ROOT");
  serve->add_option("--ttl", ttl_seconds, "session time-to-live in seconds")
      ->envname("STATGATE_TTL");
  serve->add_option("--timeout", timeout_seconds, "per-call wall clock limit in seconds")
      ->envname("STATGATE_TIMEOUT");
  serve->add_option("--cell-limit", cfg.cell_limit, "per-call allocation budget in cells")
      ->envname("STATGATE_CELL_LIMIT");
  serve->add_option("--max-body", cfg.max_body, "request body limit in bytes")
      ->envname("STATGATE_MAX_BODY");
  serve->add_option("--max-sessions", cfg.max_sessions, "retained session count limit");
  serve->add_option("--max-session-bytes", cfg.max_session_bytes,
                    "per-session disk limit in bytes");

  // shared client flags
  auto add_client_flags = [&client](CLI::App* cmd) {
    cmd->add_option("--server", client.server, "server base url")
        ->envname("STATGATE_SERVER");
    cmd->add_option("--root-prefix", client.prefix, "API root prefix");
  };

  auto* call = app.add_subcommand("call", "POST a remote function call");
  std::string call_target, call_json;
  std::vector<std::string> call_args;
  call->add_option("target", call_target, "function path, e.g. /ocpu/library/demo/R/mean")
      ->required();
  call->add_option("args", call_args, "arguments as name=value (value is code/key/json)");
  call->add_option("--json", call_json, "send this json object as the request body");
  add_client_flags(call);

  auto* get = app.add_subcommand("get", "GET a resource");
  std::string get_target, get_out;
  get->add_option("target", get_target,
                  "resource path; bare paths are relative to /tmp/")
      ->required();
  get->add_option("--out", get_out, "write the body to this file");
  add_client_flags(get);

  auto* run = app.add_subcommand("run", "upload and execute a .r script");
  std::string run_file;
  std::vector<std::string> run_args;
  run->add_option("file", run_file, "local script file")->required();
  run->add_option("args", run_args, "arguments as name=value");
  add_client_flags(run);

  auto* replay = app.add_subcommand("replay", "re-execute a stored session");
  std::string replay_key;
  replay->add_option("key", replay_key, "session key")->required();
  add_client_flags(replay);

  CLI11_PARSE(app, argc, argv);

  if (serve->parsed()) {
    cfg.ttl = std::chrono::seconds(static_cast<int64_t>(ttl_seconds));
    cfg.timeout =
        std::chrono::milliseconds(static_cast<int64_t>(timeout_seconds * 1000.0));
    std::string host = addr;
    int port = 8004;
    auto colon = addr.find_last_of(':');
    if (colon != std::string::npos) {
      host = addr.substr(0, colon);
      port = std::atoi(addr.c_str() + colon + 1);
    }
    try {
      statgate::api::Gateway gateway(cfg);
      gateway.load_packages();
      for (const auto& name : gateway.packages().names())
        std::cerr << "loaded package " << name << "\n";
      statgate::api::HttpServer server(gateway);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "serving on http://" << host << ":" << port << cfg.root_prefix
                << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "cannot bind " << addr << "\n";
        return 1;
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  }
  if (call->parsed()) return cmd_call(client, call_target, call_args, call_json);
  if (get->parsed()) return cmd_get(client, get_target, get_out);
  if (run->parsed()) return cmd_run(client, run_file, run_args);
  if (replay->parsed()) return cmd_replay(client, replay_key);
  return 1;
}
