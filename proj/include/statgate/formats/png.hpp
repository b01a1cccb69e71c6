#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "statgate/error.hpp"
#include "statgate/formats/render_common.hpp"
#include "statgate/lang/graphics.hpp"

namespace statgate::formats {

// 8-bit RGB raster with a handful of deterministic drawing primitives;
// no antialiasing, so renders are bit-stable.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;  // 3 bytes per pixel, row-major

  Raster(int w, int h) : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3, 255) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    rgb[i] = c.r;
    rgb[i + 1] = c.g;
    rgb[i + 2] = c.b;
  }

  void fill_rect(double x0, double y0, double x1, double y1, Rgb c) {
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    int xa = static_cast<int>(std::lround(x0)), xb = static_cast<int>(std::lround(x1));
    int ya = static_cast<int>(std::lround(y0)), yb = static_cast<int>(std::lround(y1));
    for (int y = ya; y <= yb; ++y)
      for (int x = xa; x <= xb; ++x) set(x, y, c);
  }

  void fill_circle(double cx, double cy, double r, Rgb c) {
    if (r < 0.5) r = 0.5;
    int xa = static_cast<int>(std::floor(cx - r)), xb = static_cast<int>(std::ceil(cx + r));
    int ya = static_cast<int>(std::floor(cy - r)), yb = static_cast<int>(std::ceil(cy + r));
    double r2 = r * r;
    for (int y = ya; y <= yb; ++y)
      for (int x = xa; x <= xb; ++x) {
        double dx = x - cx, dy = y - cy;
        if (dx * dx + dy * dy <= r2) set(x, y, c);
      }
  }

  void draw_line(double x0, double y0, double x1, double y1, double width_px, Rgb c) {
    double dx = x1 - x0, dy = y1 - y0;
    double len = std::sqrt(dx * dx + dy * dy);
    double r = width_px / 2.0;
    if (len < 1e-9) {
      fill_circle(x0, y0, r, c);
      return;
    }
    int steps = static_cast<int>(std::ceil(len * 2)) + 1;
    for (int i = 0; i <= steps; ++i) {
      double t = static_cast<double>(i) / steps;
      fill_circle(x0 + dx * t, y0 + dy * t, r, c);
    }
  }

  void draw_text(double x, double y, const std::string& text, double size,
                 const std::string& anchor, Rgb c) {
    double unit = size / kGlyphHeight;
    double total_w = static_cast<double>(text.size()) * kGlyphAdvance * unit;
    double x0 = x;
    if (anchor == "middle") x0 -= total_w / 2;
    if (anchor == "end") x0 -= total_w;
    double baseline = y;
    double stroke = std::max(1.0, size / 10.0);
    for (size_t i = 0; i < text.size(); ++i) {
      const GlyphStrokes* g = glyph_strokes(text[i]);
      double gx = x0 + static_cast<double>(i) * kGlyphAdvance * unit;
      for (const auto& strokes : *g) {
        for (size_t p = 1; p < strokes.size(); ++p) {
          draw_line(gx + strokes[p - 1].first * unit,
                    baseline + (strokes[p - 1].second - 6.0) * unit,
                    gx + strokes[p].first * unit,
                    baseline + (strokes[p].second - 6.0) * unit, stroke, c);
        }
      }
    }
  }
};

inline Raster render_raster(const lang::GraphicsRecording& rec, int width, int height) {
  Raster img(width, height);
  PlotMapping m = make_mapping(rec, width, height);
  Rgb black{0, 0, 0};

  for (const auto& c : rec.cmds) {
    switch (c.kind) {
      case lang::DrawCmd::Kind::Canvas:
        break;
      case lang::DrawCmd::Kind::Points: {
        Rgb col = parse_color(c.color);
        for (size_t i = 0; i < c.xs.size() && i < c.ys.size(); ++i)
          img.fill_circle(m.sx(c.xs[i]), m.sy(c.ys[i]), c.radius * m.scale, col);
        break;
      }
      case lang::DrawCmd::Kind::Polyline: {
        Rgb col = parse_color(c.color);
        for (size_t i = 1; i < c.xs.size() && i < c.ys.size(); ++i)
          img.draw_line(m.sx(c.xs[i - 1]), m.sy(c.ys[i - 1]), m.sx(c.xs[i]),
                        m.sy(c.ys[i]), std::max(1.0, c.width * m.scale), col);
        break;
      }
      case lang::DrawCmd::Kind::Rect:
        img.fill_rect(m.sx(c.x0), m.sy(c.y0), m.sx(c.x1), m.sy(c.y1),
                      parse_color(c.fill));
        break;
      case lang::DrawCmd::Kind::Axis: {
        double tick = 5 * m.scale;
        double label_size = 11 * m.scale;
        if (c.side == 1) {
          img.draw_line(m.px0, m.py_bot, m.px1, m.py_bot, 1.0, black);
          for (size_t i = 0; i < c.ticks.size(); ++i) {
            double x = m.sx(c.ticks[i]);
            img.draw_line(x, m.py_bot, x, m.py_bot + tick, 1.0, black);
            if (i < c.labels.size())
              img.draw_text(x, m.py_bot + tick + label_size, c.labels[i], label_size,
                            "middle", black);
          }
        } else {
          img.draw_line(m.px0, m.py_top, m.px0, m.py_bot, 1.0, black);
          for (size_t i = 0; i < c.ticks.size(); ++i) {
            double y = m.sy(c.ticks[i]);
            img.draw_line(m.px0 - tick, y, m.px0, y, 1.0, black);
            if (i < c.labels.size())
              img.draw_text(m.px0 - tick - 2 * m.scale, y + label_size * 0.35,
                            c.labels[i], label_size, "end", black);
          }
        }
        break;
      }
      case lang::DrawCmd::Kind::Text:
        img.draw_text(m.sx(c.x), m.sy(c.y), c.text, c.size * m.scale,
                      c.anchor.empty() ? "start" : c.anchor, black);
        break;
      case lang::DrawCmd::Kind::Title:
        img.draw_text((m.px0 + m.px1) / 2, m.py_top * 0.65, c.text, 14 * m.scale,
                      "middle", black);
        break;
    }
  }
  return img;
}

namespace detail {

inline void png_chunk(std::string& out, const char type[5], const std::string& data) {
  uint32_t len = static_cast<uint32_t>(data.size());
  for (int i = 3; i >= 0; --i) out += static_cast<char>((len >> (8 * i)) & 0xFF);
  size_t crc_start = out.size();
  out += type;
  out += data;
  uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                    static_cast<uInt>(out.size() - crc_start));
  for (int i = 3; i >= 0; --i) out += static_cast<char>((crc >> (8 * i)) & 0xFF);
}

}  // namespace detail

inline std::string encode_png(const Raster& img) {
  // filter type 0 on every scanline
  std::string raw;
  raw.reserve(static_cast<size_t>(img.height) * (1 + img.width * 3));
  for (int y = 0; y < img.height; ++y) {
    raw += '\0';
    raw.append(reinterpret_cast<const char*>(img.rgb.data()) +
                   static_cast<size_t>(y) * img.width * 3,
               static_cast<size_t>(img.width) * 3);
  }
  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(comp_len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &comp_len,
                reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw server_error("png: compression failed");
  compressed.resize(comp_len);

  std::string ihdr;
  auto be32 = [&ihdr](uint32_t v) {
    for (int i = 3; i >= 0; --i) ihdr += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  be32(static_cast<uint32_t>(img.width));
  be32(static_cast<uint32_t>(img.height));
  ihdr += static_cast<char>(8);   // bit depth
  ihdr += static_cast<char>(2);   // color type: truecolor
  ihdr += static_cast<char>(0);   // compression
  ihdr += static_cast<char>(0);   // filter
  ihdr += static_cast<char>(0);   // interlace

  std::string out("\x89PNG\r\n\x1a\n", 8);
  detail::png_chunk(out, "IHDR", ihdr);
  detail::png_chunk(out, "IDAT", compressed);
  detail::png_chunk(out, "IEND", "");
  return out;
}

inline std::string render_png(const lang::GraphicsRecording& rec, int width,
                              int height) {
  return encode_png(render_raster(rec, width, height));
}

}  // namespace statgate::formats
