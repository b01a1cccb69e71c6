#include <catch2/catch_amalgamated.hpp>

#include "helpers/gateway_fixture.hpp"
#include "statgate/repro/console.hpp"

using namespace statgate;
using testgw::GatewayFixture;

TEST_CASE("source is the canonical deparsed call") {
  GatewayFixture gw;
  auto resp = gw.post_form("/ocpu/library/demo/R/rnorm", "n=3");
  std::string key = GatewayFixture::key_of(resp);
  auto source = gw.get("/ocpu/tmp/" + key + "/source");
  REQUIRE(source.body == "rnorm(n = 3)");
}

TEST_CASE("script source is stored verbatim") {
  GatewayFixture gw;
  const std::string script = "x <- c(1, 2)\nsum(x)\n";
  std::vector<api::MultipartItem> items;
  items.push_back({"script", "s.r", script});
  auto resp = gw.post_multipart("/ocpu/run", items);
  std::string key = GatewayFixture::key_of(resp);
  REQUIRE(gw.get("/ocpu/tmp/" + key + "/source").body == script);
}

TEST_CASE("console interleaves prompts with output") {
  GatewayFixture gw;
  std::vector<api::MultipartItem> items;
  items.push_back({"script", "s.r", "print(2+2)"});
  auto resp = gw.post_multipart("/ocpu/run", items);
  std::string key = GatewayFixture::key_of(resp);
  auto console = gw.get("/ocpu/tmp/" + key + "/console");
  REQUIRE(console.body == "> print(2 + 2)\n[1] 4\n");
}

TEST_CASE("silent assignments show only prompt lines") {
  GatewayFixture gw;
  std::vector<api::MultipartItem> items;
  items.push_back({"script", "s.r", "x <- 1\ny <- x + 1\n"});
  auto resp = gw.post_multipart("/ocpu/run", items);
  std::string key = GatewayFixture::key_of(resp);
  auto console = gw.get("/ocpu/tmp/" + key + "/console");
  REQUIRE(console.body == "> x <- 1\n> y <- x + 1\n");
}

TEST_CASE("multi-line statements continue with plus prompts") {
  std::vector<lang::StatementTrace> trace = {{"c(1,\n  2)", "[1] 1 2\n"}};
  REQUIRE(repro::build_console(trace) == "> c(1,\n+   2)\n[1] 1 2\n");
  REQUIRE(repro::build_console(trace, "boom") ==
          "> c(1,\n+   2)\n[1] 1 2\nError: boom\n");
}

TEST_CASE("console source lines reproduce the stored source") {
  GatewayFixture gw;
  const std::string script = "x <- c(1, 2)\nprint(sum(x))\nmean(x)\n";
  std::vector<api::MultipartItem> items;
  items.push_back({"script", "s.r", script});
  auto resp = gw.post_multipart("/ocpu/run", items);
  std::string key = GatewayFixture::key_of(resp);
  std::string console = gw.get("/ocpu/tmp/" + key + "/console").body;
  std::string source = gw.get("/ocpu/tmp/" + key + "/source").body;

  // stripping "> "/"+ " prompt lines recovers the source lines in order
  std::vector<std::string> recovered;
  size_t pos = 0;
  while (pos < console.size()) {
    size_t nl = console.find('\n', pos);
    std::string line = console.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.rfind("> ", 0) == 0 || line.rfind("+ ", 0) == 0)
      recovered.push_back(line.substr(2));
  }
  std::string joined;
  for (const auto& l : recovered) joined += l + "\n";
  REQUIRE(joined == source);
}

TEST_CASE("replay reproduces values, stdout, and graphics") {
  GatewayFixture gw;
  std::vector<api::MultipartItem> items;
  items.push_back({"script", "s.r",
                   "x <- rnorm(10)\nprint(mean(x))\nplot(x)\nsort(x)\n"});
  auto first = gw.post_multipart("/ocpu/run", items);
  REQUIRE(first.status == 201);
  std::string k1 = GatewayFixture::key_of(first);

  auto second = gw.gateway->handle(
      api::ApiRequest{"POST", "/ocpu/tmp/" + k1 + "/replay", {}, "", "", {}});
  REQUIRE(second.status == 201);
  std::string k2 = GatewayFixture::key_of(second);
  REQUIRE(k1 != k2);

  for (const char* rel : {"/R/.val/bin", "/R/x/bin", "/stdout", "/graphics/1/svg"}) {
    CAPTURE(rel);
    auto a = gw.get("/ocpu/tmp/" + k1 + rel);
    auto b = gw.get("/ocpu/tmp/" + k2 + rel);
    REQUIRE(a.status == 200);
    REQUIRE(a.body == b.body);
  }

  // replay of a replay keeps reproducing
  auto third = gw.gateway->handle(
      api::ApiRequest{"POST", "/ocpu/tmp/" + k2 + "/replay", {}, "", "", {}});
  REQUIRE(third.status == 201);
  std::string k3 = GatewayFixture::key_of(third);
  REQUIRE(gw.get("/ocpu/tmp/" + k3 + "/R/.val/bin").body ==
          gw.get("/ocpu/tmp/" + k1 + "/R/.val/bin").body);
}

TEST_CASE("replay of a key-reference call works after the source expired") {
  GatewayFixture gw;
  auto g = gw.post_form("/ocpu/library/demo/R/sum", "x=c(5,6)");
  std::string gkey = GatewayFixture::key_of(g);
  auto f = gw.post_form("/ocpu/library/demo/R/identity", "x=" + gkey);
  std::string fkey = GatewayFixture::key_of(f);

  // make the referenced session disappear
  std::error_code ec;
  std::filesystem::remove_all(gw.cfg.session_root / gkey, ec);
  gw.gateway->sessions().evict_expired(store::SessionStore::unix_now() + 1'000'000);

  auto replay = gw.gateway->handle(
      api::ApiRequest{"POST", "/ocpu/tmp/" + fkey + "/replay", {}, "", "", {}});
  REQUIRE(replay.status == 201);
  auto val =
      gw.get("/ocpu/tmp/" + GatewayFixture::key_of(replay) + "/R/.val/json");
  REQUIRE(val.body == "[11]");
}

TEST_CASE("replay restages uploaded files byte-identically") {
  GatewayFixture gw;
  std::vector<api::MultipartItem> items;
  items.push_back({"file", "d.csv", "a\n1\n2\n"});
  auto first = gw.post_multipart("/ocpu/library/demo/R/read_csv", items);
  REQUIRE(first.status == 201);
  std::string k1 = GatewayFixture::key_of(first);
  auto replayed = gw.gateway->handle(
      api::ApiRequest{"POST", "/ocpu/tmp/" + k1 + "/replay", {}, "", "", {}});
  REQUIRE(replayed.status == 201);
  std::string k2 = GatewayFixture::key_of(replayed);
  REQUIRE(gw.get("/ocpu/tmp/" + k2 + "/files/d.csv").body == "a\n1\n2\n");
  REQUIRE(gw.get("/ocpu/tmp/" + k2 + "/R/.val/csv").body ==
          gw.get("/ocpu/tmp/" + k1 + "/R/.val/csv").body);
}

TEST_CASE("replay needs an existing session") {
  GatewayFixture gw;
  auto resp = gw.gateway->handle(api::ApiRequest{
      "POST", "/ocpu/tmp/x0123456789abcdef012/replay", {}, "", "", {}});
  REQUIRE(resp.status == 404);
}

TEST_CASE("evicted sessions are gone from the api") {
  GatewayFixture gw;
  auto made = gw.post_form("/ocpu/library/demo/R/sum", "x=c(1)");
  std::string key = GatewayFixture::key_of(made);
  std::error_code ec;
  std::filesystem::remove_all(gw.cfg.session_root / key, ec);
  // a gateway without the warm read cache no longer sees it
  api::Gateway fresh(gw.cfg);
  fresh.load_packages();
  api::ApiRequest req{"GET", "/ocpu/tmp/" + key + "/source", {}, "", "", {}};
  REQUIRE(fresh.handle(req).status == 404);
}
