#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "statgate/api/config.hpp"
#include "statgate/container.hpp"
#include "statgate/error.hpp"
#include "statgate/formats/export.hpp"
#include "statgate/formats/import.hpp"
#include "statgate/keys.hpp"
#include "statgate/lang/deparse.hpp"
#include "statgate/lang/eval.hpp"
#include "statgate/repro/callrecord.hpp"
#include "statgate/repro/console.hpp"
#include "statgate/store/package.hpp"
#include "statgate/store/store.hpp"

namespace statgate::api {

struct MultipartItem {
  std::string name;
  std::string filename;  // empty for plain text fields
  std::string content;
};

// Transport-independent request/response pair; the HTTP layer translates
// to and from these, and tests can exercise the gateway without sockets.
struct ApiRequest {
  std::string method;
  std::string path;  // decoded, without query string
  std::vector<std::pair<std::string, std::string>> query;
  std::string content_type;  // media type only, lowercased
  std::string body;
  std::vector<MultipartItem> multipart;  // pre-parsed multipart payload
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "text/plain";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;  // Location etc.
};

namespace detail {

inline std::vector<std::string> split_path(std::string_view rest) {
  std::vector<std::string> segs;
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t slash = rest.find('/', pos);
    std::string_view seg = rest.substr(
        pos, slash == std::string_view::npos ? rest.size() - pos : slash - pos);
    if (!seg.empty()) segs.emplace_back(seg);
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return segs;
}

inline std::string media_type_for_file(const std::string& path) {
  auto ends_with = [&path](const char* suffix) {
    std::string_view sv(path);
    std::string_view s(suffix);
    return sv.size() >= s.size() && sv.substr(sv.size() - s.size()) == s;
  };
  if (ends_with(".txt") || ends_with(".r") || ends_with(".R")) return "text/plain";
  if (ends_with(".csv")) return "text/csv";
  if (ends_with(".json")) return "application/json";
  if (ends_with(".html")) return "text/html";
  if (ends_with(".svg")) return "image/svg+xml";
  if (ends_with(".png")) return "image/png";
  return "application/octet-stream";
}

inline bool format_candidate(const std::string& seg) {
  return formats::known_format_id(seg) || formats::reserved_format_id(seg) ||
         formats::manual_format_id(seg);
}

// value serialization for call-record arguments: bin for data, the
// function record for functions
inline std::string record_encode(const Value& v) {
  if (v.tag() == Tag::Function) return "F" + store::function_to_json(v.func());
  return "B" + formats::encode_bin(v);
}

inline Value record_decode(const std::string& bytes) {
  if (bytes.empty()) throw format_error("empty argument record");
  if (bytes[0] == 'F') return store::function_from_json(bytes.substr(1));
  if (bytes[0] == 'B') return formats::decode_bin(std::string_view(bytes).substr(1));
  throw format_error("bad argument record");
}

}  // namespace detail

inline ApiResponse map_error_response(const Error& e) {
  int status = 503;
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Eval:
    case ErrorKind::Numeric:
    case ErrorKind::Format:
    case ErrorKind::Argument:
      status = 400;
      break;
    case ErrorKind::NotFound:
      status = 404;
      break;
    case ErrorKind::Method:
      status = 405;
      break;
    case ErrorKind::Resource:
    case ErrorKind::Server:
      status = 503;
      break;
  }
  ApiResponse resp;
  resp.status = status;
  resp.content_type = "text/plain";
  if (e.has_location())
    resp.body = "line " + std::to_string(e.line()) + ", column " +
                std::to_string(e.col()) + ": " + e.message() + "\n";
  else
    resp.body = e.message() + "\n";
  return resp;
}

class Gateway {
 public:
  explicit Gateway(GatewayConfig cfg, KeyGenerator keygen = KeyGenerator::random())
      : cfg_(std::move(cfg)),
        store_(store::StoreConfig{cfg_.session_root, cfg_.ttl, cfg_.max_sessions,
                                  cfg_.max_session_bytes},
               std::move(keygen)) {}

  // Loads every package under the configured root; throws on load errors.
  void load_packages() { registry_.load_root(cfg_.package_root); }

  store::PackageRegistry& packages() { return registry_; }
  store::SessionStore& sessions() { return store_; }
  const GatewayConfig& config() const { return cfg_; }

  ApiResponse handle(const ApiRequest& req) {
    try {
      if (req.method == "GET") return handle_get(req);
      if (req.method == "POST") return handle_post(req);
      throw Error(ErrorKind::Method, "method " + req.method + " is not allowed");
    } catch (const Error& e) {
      return map_error_response(e);
    } catch (const std::exception& e) {
      return map_error_response(server_error(std::string("internal failure: ") + e.what()));
    }
  }

 private:
  // ---- routing helpers -----------------------------------------------

  struct Routed {
    std::string library;       // "library" | "tmp"
    std::string container_id;  // package name | session key
    std::vector<std::string> segments;
    bool trailing_slash = false;
  };

  std::string rest_of(const std::string& path) const {
    const std::string& p = cfg_.root_prefix;
    if (path == p) return "";
    if (path.size() > p.size() && path.compare(0, p.size(), p) == 0 &&
        path[p.size()] == '/')
      return path.substr(p.size() + 1);
    throw not_found("no route for " + path);
  }

  ApiResponse redirect(const std::string& to) const {
    ApiResponse resp;
    resp.status = 302;
    resp.content_type = "text/plain";
    resp.body = "redirect to " + to + "\n";
    resp.headers.emplace_back("Location", to);
    return resp;
  }

  std::string container_url(const Routed& r) const {
    return cfg_.root_prefix + "/" + r.library + "/" + r.container_id;
  }

  std::shared_ptr<const Container> load_container(const Routed& r) {
    if (r.library == "library") {
      auto c = registry_.find(r.container_id);
      if (!c) throw not_found("no package '" + r.container_id + "' in this library");
      return c;
    }
    auto c = store_.load(r.container_id);
    if (!c) throw not_found("no session '" + r.container_id + "'");
    return c;
  }

  static ApiResponse text_response(std::string body, int status = 200) {
    ApiResponse resp;
    resp.status = status;
    resp.content_type = "text/plain";
    resp.body = std::move(body);
    return resp;
  }

  // ---- GET --------------------------------------------------------------

  ApiResponse handle_get(const ApiRequest& req) {
    std::string rest = rest_of(req.path);
    bool trailing = !rest.empty() ? rest.back() == '/' : !req.path.empty() &&
                                                             req.path.back() == '/';
    auto segs = detail::split_path(rest);

    if (segs.empty()) {
      if (!trailing) return redirect(cfg_.root_prefix + "/");
      return text_response("library\ntmp\n");
    }
    if (segs[0] == "library") {
      if (segs.size() == 1) {
        if (!trailing) return redirect(cfg_.root_prefix + "/library/");
        return serve_listing(registry_.names(), req.query, "");
      }
      Routed r{"library", segs[1], {segs.begin() + 2, segs.end()}, trailing};
      return serve_container_get(r, req);
    }
    if (segs[0] == "tmp") {
      if (segs.size() == 1)
        throw not_found("sessions are not enumerable; a session key is required");
      Routed r{"tmp", segs[1], {segs.begin() + 2, segs.end()}, trailing};
      return serve_container_get(r, req);
    }
    throw not_found("no route for " + req.path);
  }

  ApiResponse serve_listing(std::vector<std::string> names,
                            const std::vector<std::pair<std::string, std::string>>& query,
                            const std::string& format) const {
    if (format == "json") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& n : names) arr.push_back(n);
      ApiResponse resp;
      resp.content_type = "application/json";
      resp.body = arr.dump();
      return resp;
    }
    (void)query;
    std::string body;
    for (const auto& n : names) body += n + "\n";
    return text_response(std::move(body));
  }

  std::vector<std::string> session_resource_paths(const std::string& key,
                                                  const Container& c) const {
    std::string base = cfg_.root_prefix + "/tmp/" + key + "/";
    std::vector<std::string> out;
    for (const auto& [name, v] : c.names) out.push_back(base + "R/" + name);
    for (size_t i = 1; i <= c.graphics.size(); ++i)
      out.push_back(base + "graphics/" + std::to_string(i));
    for (const auto& [rel, bytes] : c.files) out.push_back(base + "files/" + rel);
    out.push_back(base + "source");
    out.push_back(base + "stdout");
    out.push_back(base + "console");
    return out;
  }

  ApiResponse serve_container_get(const Routed& r, const ApiRequest& req) {
    auto container = load_container(r);

    ResourceHandle handle;
    std::string format;
    try {
      handle = resolve_resource(*container, r.segments);
    } catch (const Error& original) {
      if (original.kind() != ErrorKind::NotFound || r.segments.empty() ||
          !detail::format_candidate(r.segments.back()))
        throw;
      std::vector<std::string> prefix(r.segments.begin(), r.segments.end() - 1);
      handle = resolve_resource(*container, prefix);  // may rethrow; best message
      format = r.segments.back();
    }

    formats::ExportFormat fmt{format, req.query};

    switch (handle.kind) {
      case ResourceHandle::Kind::Info: {
        if (!r.trailing_slash) return redirect(container_url(r) + "/");
        if (container->kind == Container::Kind::Session) {
          std::string body;
          for (const auto& p : session_resource_paths(r.container_id, *container))
            body += p + "\n";
          return text_response(std::move(body));
        }
        std::string body = "Package: " + container->name + "\n" +
                           "Version: " + container->version + "\n";
        return text_response(std::move(body));
      }
      case ResourceHandle::Kind::Listing: {
        if (format.empty() && !r.trailing_slash)
          return redirect(container_url(r) + "/" + join(r.segments) + "/");
        if (!format.empty() && format != "json")
          throw format_error("listings support only the json format");
        return serve_listing(handle.listing, req.query, format);
      }
      case ResourceHandle::Kind::Object:
      case ResourceHandle::Kind::Data: {
        if (format.empty()) fmt.id = "print";
        auto exported = formats::export_value(*handle.object, fmt);
        ApiResponse resp;
        resp.content_type = exported.media_type;
        resp.body = std::move(exported.bytes);
        return resp;
      }
      case ResourceHandle::Kind::Manual: {
        if (format.empty()) format = "text";
        if (!req.query.empty())
          throw format_error("manual renderings accept no parameters");
        auto exported = formats::export_manual(*handle.manual, format);
        ApiResponse resp;
        resp.content_type = exported.media_type;
        resp.body = std::move(exported.bytes);
        return resp;
      }
      case ResourceHandle::Kind::Graphic: {
        if (format.empty()) fmt.id = "svg";
        auto exported = formats::export_graphic(*handle.graphic, fmt);
        ApiResponse resp;
        resp.content_type = exported.media_type;
        resp.body = std::move(exported.bytes);
        return resp;
      }
      case ResourceHandle::Kind::File: {
        ApiResponse resp;
        resp.content_type = detail::media_type_for_file(handle.file_path);
        resp.body = *handle.file_bytes;
        return resp;
      }
      case ResourceHandle::Kind::Source:
        return text_response(container->source);
      case ResourceHandle::Kind::Stdout:
        return text_response(container->stdout_text);
      case ResourceHandle::Kind::Console:
        return text_response(container->console);
    }
    throw server_error("unhandled resource kind");
  }

  static std::string join(const std::vector<std::string>& segs) {
    std::string out;
    for (size_t i = 0; i < segs.size(); ++i) {
      if (i) out += '/';
      out += segs[i];
    }
    return out;
  }

  // ---- POST (RPC) -----------------------------------------------------

  ApiResponse handle_post(const ApiRequest& req) {
    if (req.body.size() > cfg_.max_body)
      throw resource_error("request body exceeds the configured limit of " +
                           std::to_string(cfg_.max_body) + " bytes");
    std::string rest = rest_of(req.path);
    auto segs = detail::split_path(rest);

    if (segs.size() == 1 && segs[0] == "run") return handle_run_upload(req);

    if (segs.size() >= 2 && segs[0] == "tmp" && segs.back() == "replay" &&
        segs.size() == 3)
      return handle_replay(segs[1]);

    if (segs.size() < 2)
      throw argument_error("POST requires a function or script target");

    Routed r;
    if (segs[0] == "library")
      r = {"library", segs[1], {segs.begin() + 2, segs.end()}, false};
    else if (segs[0] == "tmp")
      r = {"tmp", segs[1], {segs.begin() + 2, segs.end()}, false};
    else
      throw not_found("no route for " + req.path);

    auto container = load_container(r);
    ResourceHandle handle = resolve_resource(*container, r.segments);

    auto args = collect_args(req);

    switch (handle.kind) {
      case ResourceHandle::Kind::Object: {
        if (handle.object->tag() != Tag::Function)
          throw argument_error("'" + r.segments.back() + "' is not a function");
        RpcCall call;
        call.kind = repro::CallRecord::Kind::FunctionCall;
        call.library = r.library;
        call.container_id = r.container_id;
        call.target = r.segments.back();
        call.fn = *handle.object;
        call.args = std::move(args);
        call.seed = draw_seed();
        return run_rpc(call);
      }
      case ResourceHandle::Kind::Data:
        throw argument_error("data resources support GET only");
      case ResourceHandle::Kind::File: {
        const std::string& path = handle.file_path;
        auto dot = path.find_last_of('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot);
        if (ext == ".r" || ext == ".R") {
          RpcCall call;
          call.kind = repro::CallRecord::Kind::Script;
          call.library = r.library;
          call.container_id = r.container_id;
          call.target = path;
          call.script_text = *handle.file_bytes;
          call.args = std::move(args);
          call.seed = draw_seed();
          return run_rpc(call);
        }
        if (ext == ".tex" || ext == ".rnw" || ext == ".md" || ext == ".rmd" ||
            ext == ".brew")
          throw argument_error("script type '" + ext +
                               "' is not supported by this server");
        throw argument_error("'" + path + "' is not an executable script");
      }
      default:
        throw argument_error("POST requires a function or script target");
    }
  }

  ApiResponse handle_run_upload(const ApiRequest& req) {
    if (req.content_type.rfind("multipart/form-data", 0) != 0)
      throw argument_error("uploading a script requires multipart/form-data");
    std::string script_text;
    bool have_script = false;
    std::vector<formats::ImportedArg> args;
    for (const auto& item : req.multipart) {
      if (!item.filename.empty()) {
        std::string ext;
        auto dot = item.filename.find_last_of('.');
        if (dot != std::string::npos) ext = item.filename.substr(dot);
        if (!have_script && (ext == ".r" || ext == ".R")) {
          script_text = item.content;
          have_script = true;
          continue;
        }
      }
      formats::ArgumentSource src;
      src.origin = item.filename.empty()
                       ? formats::ArgumentSource::Origin::MultipartField
                       : formats::ArgumentSource::Origin::MultipartFile;
      src.name = item.name;
      src.raw = item.content;
      src.client_filename = item.filename;
      args.push_back(import_one(src));
    }
    if (!have_script) throw argument_error("no .r script file in the upload");

    RpcCall call;
    call.kind = repro::CallRecord::Kind::Script;
    call.library = "upload";
    call.script_text = std::move(script_text);
    call.args = std::move(args);
    call.seed = draw_seed();
    return run_rpc(call);
  }

  // ---- argument handling ----------------------------------------------

  formats::ImportedArg import_one(const formats::ArgumentSource& src) {
    formats::SessionLookup lookup = [this](const std::string& key) {
      return store_.load(key);
    };
    formats::CodeEvaluator eval_code = [this](const std::string& code) {
      lang::EvalContext ctx(lang::base_environment(),
                            lang::Budget::with_limits(cfg_.timeout, cfg_.cell_limit),
                            draw_seed());
      return lang::eval_expression(code, ctx);
    };
    return formats::import_argument(src, lookup, eval_code);
  }

  std::vector<formats::ImportedArg> collect_args(const ApiRequest& req) {
    std::vector<formats::ArgumentSource> sources;
    std::string ct = req.content_type;
    if (ct.empty() && req.body.empty() && req.multipart.empty()) {
      // argument-less call
    } else if (ct.rfind("application/x-www-form-urlencoded", 0) == 0) {
      sources = formats::parse_urlencoded(req.body);
    } else if (ct.rfind("multipart/form-data", 0) == 0) {
      for (const auto& item : req.multipart) {
        formats::ArgumentSource src;
        src.origin = item.filename.empty()
                         ? formats::ArgumentSource::Origin::MultipartField
                         : formats::ArgumentSource::Origin::MultipartFile;
        src.name = item.name;
        src.raw = item.content;
        src.client_filename = item.filename;
        sources.push_back(std::move(src));
      }
    } else if (ct.rfind("application/json", 0) == 0) {
      sources = formats::parse_json_body(req.body);
    } else {
      throw argument_error("content type '" + ct + "' is not supported");
    }
    std::vector<formats::ImportedArg> out;
    out.reserve(sources.size());
    for (const auto& src : sources) out.push_back(import_one(src));
    return out;
  }

  // ---- RPC execution ----------------------------------------------------

  struct RpcCall {
    repro::CallRecord::Kind kind = repro::CallRecord::Kind::FunctionCall;
    std::string library;       // "library" | "tmp" | "upload"
    std::string container_id;  // empty for uploads
    std::string target;        // function name or script path
    Value fn;                  // FunctionCall
    std::string script_text;   // Script
    std::vector<formats::ImportedArg> args;
    uint64_t seed = 0;
  };

  uint64_t draw_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) | rd();
  }

  std::string deparse_call_source(const RpcCall& call) const {
    std::string out = call.target + "(";
    for (size_t i = 0; i < call.args.size(); ++i) {
      if (i) out += ", ";
      if (!call.args[i].name.empty()) out += call.args[i].name + " = ";
      out += lang::deparse_value(call.args[i].value);
    }
    out += ")";
    return out;
  }

  // Scoped working directory for one call; uploads land here, write_csv
  // output is collected from here.
  struct Workdir {
    std::filesystem::path path;
    explicit Workdir(uint64_t tag) {
      path = std::filesystem::temp_directory_path() /
             ("statgate-call-" + std::to_string(tag));
      std::filesystem::create_directories(path);
    }
    ~Workdir() {
      std::error_code ec;
      std::filesystem::remove_all(path, ec);
    }
  };

  ApiResponse run_rpc(RpcCall& call) {
    Workdir workdir(call.seed ^ reinterpret_cast<uintptr_t>(&call));
    for (const auto& a : call.args) {
      if (!a.is_file) continue;
      std::ofstream f(workdir.path / a.filename, std::ios::binary);
      if (!f) throw server_error("cannot stage uploaded file");
      f.write(a.file_bytes.data(), static_cast<std::streamsize>(a.file_bytes.size()));
    }

    lang::EvalContext ctx(lang::base_environment(),
                          lang::Budget::with_limits(cfg_.timeout, cfg_.cell_limit),
                          call.seed, workdir.path);
    lang::Interpreter interp(ctx);

    store::SessionOutputs outputs;
    std::string source;

    if (call.kind == repro::CallRecord::Kind::FunctionCall) {
      std::vector<std::pair<std::string, Value>> fn_args;
      for (const auto& a : call.args) fn_args.emplace_back(a.name, a.value);
      Value result = interp.call_function(call.fn, std::move(fn_args), call.target);
      source = deparse_call_source(call);
      outputs.names.emplace_back(".val", std::move(result));
      outputs.console = repro::build_console_for_call(source, ctx.stdout_buf());
    } else {
      for (const auto& a : call.args) ctx.locals()->assign(a.name, a.value);
      auto result = interp.run_script(call.script_text);
      source = call.script_text;
      outputs.names = std::move(result.delta);
      outputs.console = repro::build_console(result.trace);
    }

    outputs.graphics = ctx.device().take();
    outputs.source = source;
    outputs.stdout_text = ctx.stdout_buf();

    // collect files created in (or uploaded to) the working directory
    {
      std::vector<std::filesystem::path> produced;
      for (const auto& entry : std::filesystem::directory_iterator(workdir.path))
        if (entry.is_regular_file()) produced.push_back(entry.path());
      std::sort(produced.begin(), produced.end());
      for (const auto& p : produced) {
        std::ifstream f(p, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());
        outputs.files.emplace_back(p.filename().string(), std::move(bytes));
      }
    }

    repro::CallRecord record;
    record.kind = call.kind;
    record.library = call.library;
    record.container_id = call.container_id;
    record.target = call.target;
    record.source = source;
    record.seed = call.seed;
    for (const auto& a : call.args) {
      repro::CallRecord::Arg ra;
      ra.name = a.name;
      if (a.is_file) {
        ra.kind = repro::CallRecord::Arg::Kind::File;
        ra.filename = a.filename;
        ra.digest = repro::sha256_hex(a.file_bytes);
      } else if (a.from_key) {
        ra.kind = repro::CallRecord::Arg::Kind::KeyRef;
        ra.key = a.key;
        ra.object = a.key_object;
        ra.bin = detail::record_encode(a.value);
      } else {
        ra.kind = repro::CallRecord::Arg::Kind::Literal;
        ra.bin = detail::record_encode(a.value);
      }
      record.args.push_back(std::move(ra));
    }

    SessionKey key = store_.save(outputs, repro::call_record_to_json(record));

    auto saved = store_.load(key.text);
    ApiResponse resp;
    resp.status = 201;
    resp.content_type = "text/plain";
    resp.headers.emplace_back("Location", cfg_.root_prefix + "/tmp/" + key.text + "/");
    std::string body;
    if (saved)
      for (const auto& p : session_resource_paths(key.text, *saved)) body += p + "\n";
    resp.body = std::move(body);
    return resp;
  }

  // ---- replay -----------------------------------------------------------

  ApiResponse handle_replay(const std::string& key) {
    auto session = store_.load(key);
    if (!session) throw not_found("no session '" + key + "'");
    repro::CallRecord record =
        repro::call_record_from_json(store_.load_call_record(key));

    RpcCall call;
    call.kind = record.kind;
    call.library = record.library;
    call.container_id = record.container_id;
    call.target = record.target;
    call.seed = record.seed;  // replay re-executes under the recorded seed
    call.script_text = record.source;

    if (record.kind == repro::CallRecord::Kind::FunctionCall) {
      Routed r{record.library, record.container_id, {}, false};
      auto container = load_container(r);
      const Value* fn = container->find_name(record.target);
      if (!fn || fn->tag() != Tag::Function)
        throw argument_error("recorded target '" + record.target +
                             "' is no longer a function");
      call.fn = *fn;
    }

    for (const auto& ra : record.args) {
      formats::ImportedArg a;
      a.name = ra.name;
      switch (ra.kind) {
        case repro::CallRecord::Arg::Kind::Literal:
          a.value = detail::record_decode(ra.bin);
          break;
        case repro::CallRecord::Arg::Kind::KeyRef:
          // resolved from the stored snapshot, so replay works even after
          // the referenced session expired
          a.value = detail::record_decode(ra.bin);
          a.from_key = true;
          a.key = ra.key;
          a.key_object = ra.object;
          break;
        case repro::CallRecord::Arg::Kind::File: {
          const std::string* bytes = session->find_file(ra.filename);
          if (!bytes)
            throw server_error("recorded file '" + ra.filename +
                               "' is missing from the session");
          if (repro::sha256_hex(*bytes) != ra.digest)
            throw server_error("recorded file '" + ra.filename +
                               "' does not match its digest");
          a.is_file = true;
          a.filename = ra.filename;
          a.file_bytes = *bytes;
          a.value = Value::string(ra.filename);
          break;
        }
      }
      call.args.push_back(std::move(a));
    }
    return run_rpc(call);
  }

  GatewayConfig cfg_;
  store::PackageRegistry registry_;
  store::SessionStore store_;
};

}  // namespace statgate::api
