#include <catch2/catch_amalgamated.hpp>

#include "helpers/gateway_fixture.hpp"

using namespace statgate;
using testgw::GatewayFixture;

namespace {

std::string location_of(const api::ApiResponse& resp) {
  for (const auto& [k, v] : resp.headers)
    if (k == "Location") return v;
  return "";
}

}  // namespace

TEST_CASE("package url tree routes per the table") {
  GatewayFixture gw;

  auto info = gw.get("/ocpu/library/demo/");
  REQUIRE(info.status == 200);
  REQUIRE(info.body.find("Package: demo") != std::string::npos);

  auto objects = gw.get("/ocpu/library/demo/R/");
  REQUIRE(objects.status == 200);
  REQUIRE(objects.body.find("rnorm\n") != std::string::npos);

  auto obj = gw.get("/ocpu/library/demo/R/rnorm");
  REQUIRE(obj.status == 200);
  REQUIRE(obj.content_type == "text/plain");

  auto data_json = gw.get("/ocpu/library/demo/data/cats/json");
  REQUIRE(data_json.status == 200);
  REQUIRE(data_json.content_type == "application/json");
  REQUIRE(data_json.body.find("\"Sex\":\"F\"") != std::string::npos);

  auto man = gw.get("/ocpu/library/demo/man/lsfit/text");
  REQUIRE(man.status == 200);
  REQUIRE(man.content_type == "text/plain");
  REQUIRE(man.body.find("Least squares fit") != std::string::npos);

  auto man_html = gw.get("/ocpu/library/demo/man/lsfit/html");
  REQUIRE(man_html.status == 200);
  REQUIRE(man_html.content_type == "text/html");

  auto file = gw.get("/ocpu/library/demo/NEWS");
  REQUIRE(file.status == 200);
  REQUIRE(file.body == "demo 1.0.0\n");

  auto dir = gw.get("/ocpu/library/demo/scripts/");
  REQUIRE(dir.status == 200);
  REQUIRE(dir.body.find("ch01.r\n") != std::string::npos);
}

TEST_CASE("directories without a trailing slash redirect") {
  GatewayFixture gw;
  for (const char* path : {"/ocpu", "/ocpu/library", "/ocpu/library/demo",
                           "/ocpu/library/demo/R", "/ocpu/library/demo/scripts"}) {
    auto resp = gw.get(path);
    CAPTURE(path);
    REQUIRE(resp.status == 302);
    REQUIRE(location_of(resp) == std::string(path) + "/");
  }
}

TEST_CASE("listings also render as json arrays") {
  GatewayFixture gw;
  auto r = gw.get("/ocpu/library/demo/R/json");
  REQUIRE(r.status == 200);
  REQUIRE(r.content_type == "application/json");
  REQUIRE(r.body.front() == '[');
  REQUIRE(r.body.find("\"rnorm\"") != std::string::npos);

  auto lib = gw.get("/ocpu/library/");
  REQUIRE(lib.status == 200);
  REQUIRE(lib.body == "demo\n");
}

TEST_CASE("unknown things are 404") {
  GatewayFixture gw;
  REQUIRE(gw.get("/ocpu/library/ghost/").status == 404);
  REQUIRE(gw.get("/ocpu/library/demo/R/ghost").status == 404);
  REQUIRE(gw.get("/ocpu/library/demo/man/ghost/text").status == 404);
  REQUIRE(gw.get("/ocpu/library/demo/ghostfile").status == 404);
  REQUIRE(gw.get("/elsewhere/").status == 404);
  REQUIRE(gw.get("/ocpu/zzz/").status == 404);
}

TEST_CASE("sessions are not enumerable") {
  GatewayFixture gw;
  REQUIRE(gw.get("/ocpu/tmp").status == 404);
  REQUIRE(gw.get("/ocpu/tmp/").status == 404);
}

TEST_CASE("session url tree routes per the table") {
  GatewayFixture gw;
  auto created = gw.post_form("/ocpu/library/demo/R/plot",
                              "x=c(1,2,3)&y=c(2,4,6)");
  REQUIRE(created.status == 201);
  std::string key = GatewayFixture::key_of(created);
  REQUIRE(SessionKey::valid(key));

  auto list = gw.get("/ocpu/tmp/" + key + "/");
  REQUIRE(list.status == 200);
  REQUIRE(list.body.find("/ocpu/tmp/" + key + "/graphics/1\n") != std::string::npos);
  REQUIRE(list.body.find("/ocpu/tmp/" + key + "/source\n") != std::string::npos);
  REQUIRE(list.body.find("/ocpu/tmp/" + key + "/console\n") != std::string::npos);

  auto objects = gw.get("/ocpu/tmp/" + key + "/R/");
  REQUIRE(objects.status == 200);

  auto graphic = gw.get("/ocpu/tmp/" + key + "/graphics/1/png");
  REQUIRE(graphic.status == 200);
  REQUIRE(graphic.content_type == "image/png");

  auto svg = gw.get("/ocpu/tmp/" + key + "/graphics/1");
  REQUIRE(svg.status == 200);
  REQUIRE(svg.content_type == "image/svg+xml");

  REQUIRE(gw.get("/ocpu/tmp/" + key + "/graphics/0").status == 404);
  REQUIRE(gw.get("/ocpu/tmp/" + key + "/graphics/2/png").status == 404);

  auto source = gw.get("/ocpu/tmp/" + key + "/source");
  REQUIRE(source.status == 200);
  REQUIRE(source.body.find("plot(") != std::string::npos);

  auto stdout_r = gw.get("/ocpu/tmp/" + key + "/stdout");
  REQUIRE(stdout_r.status == 200);

  auto console = gw.get("/ocpu/tmp/" + key + "/console");
  REQUIRE(console.status == 200);
  REQUIRE(console.body.rfind("> ", 0) == 0);
}

TEST_CASE("format errors are 400 with the message in text/plain") {
  GatewayFixture gw;
  auto r = gw.get("/ocpu/library/demo/R/rnorm/csv");
  REQUIRE(r.status == 400);
  REQUIRE(r.content_type == "text/plain");
  REQUIRE(r.body.find("csv") != std::string::npos);

  auto pb = gw.get("/ocpu/library/demo/data/cats/pb");
  REQUIRE(pb.status == 400);
  REQUIRE(pb.body.find("not supported") != std::string::npos);
}

TEST_CASE("methods other than GET and POST are rejected") {
  GatewayFixture gw;
  api::ApiRequest req;
  req.method = "PUT";
  req.path = "/ocpu/library/demo/";
  auto resp = gw.gateway->handle(req);
  REQUIRE(resp.status == 405);
  req.method = "DELETE";
  REQUIRE(gw.gateway->handle(req).status == 405);
}

TEST_CASE("a valid-shape but never-issued key is 404") {
  GatewayFixture gw;
  REQUIRE(gw.get("/ocpu/tmp/x0123456789abcdef012/").status == 404);
  REQUIRE(gw.get("/ocpu/tmp/x0123456789abcdef012/R/.val").status == 404);
}

TEST_CASE("path traversal never reaches the filesystem") {
  GatewayFixture gw;
  REQUIRE(gw.get("/ocpu/library/demo/../../etc/passwd").status == 404);
  REQUIRE(gw.get("/ocpu/library/demo/files/../MANIFEST").status == 404);
}
