#include "statgate/formats/png.hpp"
#include "statgate/formats/svg.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <zlib.h>

#include "helpers/eval_helpers.hpp"

using namespace statgate;
using testeval::Session;

namespace {

lang::GraphicsRecording sample_plot() {
  Session s;
  s.run("plot(c(1, 2, 3), c(2.5, 4, 9))\ntitle(\"sample\")");
  auto recs = s.ctx.device().take();
  REQUIRE(recs.size() == 1);
  return recs[0];
}

uint32_t be32(const std::string& s, size_t off) {
  return (static_cast<uint32_t>(static_cast<uint8_t>(s[off])) << 24) |
         (static_cast<uint32_t>(static_cast<uint8_t>(s[off + 1])) << 16) |
         (static_cast<uint32_t>(static_cast<uint8_t>(s[off + 2])) << 8) |
         static_cast<uint32_t>(static_cast<uint8_t>(s[off + 3]));
}

// Minimal reader for the PNGs this server emits: 8-bit RGB, filter 0.
// Used as an independent check that the encoder wrote what the raster
// held.
std::vector<uint8_t> decode_png_rgb(const std::string& png, uint32_t& w, uint32_t& h) {
  REQUIRE(png.size() > 8);
  REQUIRE(png.substr(1, 3) == "PNG");
  size_t pos = 8;
  std::string idat;
  w = h = 0;
  while (pos + 8 <= png.size()) {
    uint32_t len = be32(png, pos);
    std::string type = png.substr(pos + 4, 4);
    std::string data = png.substr(pos + 8, len);
    if (type == "IHDR") {
      w = be32(data, 0);
      h = be32(data, 4);
      REQUIRE(static_cast<int>(static_cast<uint8_t>(data[8])) == 8);
      REQUIRE(static_cast<int>(static_cast<uint8_t>(data[9])) == 2);
    } else if (type == "IDAT") {
      idat += data;
    }
    pos += 12 + len;
  }
  REQUIRE(w > 0);
  REQUIRE(h > 0);
  uLongf out_len = static_cast<uLongf>(h) * (1 + w * 3);
  std::vector<uint8_t> raw(out_len);
  REQUIRE(uncompress(raw.data(), &out_len, reinterpret_cast<const Bytef*>(idat.data()),
                     static_cast<uLong>(idat.size())) == Z_OK);
  REQUIRE(out_len == static_cast<uLongf>(h) * (1 + w * 3));
  std::vector<uint8_t> rgb;
  rgb.reserve(static_cast<size_t>(w) * h * 3);
  for (uint32_t y = 0; y < h; ++y) {
    const uint8_t* row = raw.data() + static_cast<size_t>(y) * (1 + w * 3);
    REQUIRE(row[0] == 0);  // filter type 0
    rgb.insert(rgb.end(), row + 1, row + 1 + w * 3);
  }
  return rgb;
}

uint64_t pixel_checksum(const std::vector<uint8_t>& rgb) {
  uint64_t hash = 1469598103934665603ULL;
  for (uint8_t b : rgb) {
    hash ^= b;
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace

TEST_CASE("empty canvas renders as an svg root with no shape elements") {
  lang::GraphicsRecording empty;
  std::string svg = formats::render_svg(empty, 100, 100);
  REQUIRE(svg.find("<svg") != std::string::npos);
  REQUIRE(svg.find("width=\"100\"") != std::string::npos);
  REQUIRE(svg.find("height=\"100\"") != std::string::npos);
  for (const char* elem : {"<circle", "<rect", "<line", "<polyline", "<text"})
    REQUIRE(svg.find(elem) == std::string::npos);
}

TEST_CASE("svg output is byte-deterministic") {
  auto rec = sample_plot();
  std::string a = formats::render_svg(rec, 640, 480);
  std::string b = formats::render_svg(rec, 640, 480);
  REQUIRE(a == b);
  REQUIRE(a.find("<circle") != std::string::npos);
  REQUIRE(a.find("sample") != std::string::npos);
}

TEST_CASE("svg renders at any requested size") {
  auto rec = sample_plot();
  std::string big = formats::render_svg(rec, 1200, 900);
  REQUIRE(big.find("width=\"1200\" height=\"900\"") != std::string::npos);
  REQUIRE(big.find("<circle") != std::string::npos);
}

TEST_CASE("svg text is xml-escaped") {
  Session s;
  s.run("plot(c(1, 2))\ntitle(\"a < b & c\")");
  auto recs = s.ctx.device().take();
  std::string svg = formats::render_svg(recs[0], 640, 480);
  REQUIRE(svg.find("a &lt; b &amp; c") != std::string::npos);
  REQUIRE(svg.find("a < b & c") == std::string::npos);
}

TEST_CASE("png has the requested pixel dimensions") {
  auto rec = sample_plot();
  std::string png = formats::render_png(rec, 800, 600);
  uint32_t w, h;
  auto rgb = decode_png_rgb(png, w, h);
  REQUIRE(w == 800);
  REQUIRE(h == 600);
  REQUIRE(rgb.size() == 800u * 600u * 3u);
}

TEST_CASE("png pixels equal the raster and are deterministic") {
  auto rec = sample_plot();
  std::string png1 = formats::render_png(rec, 640, 480);
  std::string png2 = formats::render_png(rec, 640, 480);
  uint32_t w, h;
  auto rgb1 = decode_png_rgb(png1, w, h);
  auto rgb2 = decode_png_rgb(png2, w, h);
  REQUIRE(pixel_checksum(rgb1) == pixel_checksum(rgb2));

  formats::Raster direct = formats::render_raster(rec, 640, 480);
  REQUIRE(direct.rgb == rgb1);

  // the plot actually drew something darker than the white background
  bool any_ink = false;
  for (size_t i = 0; i < rgb1.size(); i += 3)
    if (rgb1[i] != 255) any_ink = true;
  REQUIRE(any_ink);
}

TEST_CASE("histogram bars appear in the raster") {
  Session s;
  s.run("set_seed(11)\nhist(rnorm(200))");
  auto recs = s.ctx.device().take();
  formats::Raster img = formats::render_raster(recs[0], 400, 300);
  size_t gray = 0;
  for (size_t i = 0; i < img.rgb.size(); i += 3)
    if (img.rgb[i] == 190 && img.rgb[i + 1] == 190) ++gray;
  REQUIRE(gray > 100);
}
