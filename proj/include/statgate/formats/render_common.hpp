#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "statgate/lang/graphics.hpp"

namespace statgate::formats {

// Maps recorded user coordinates onto an output canvas of a given pixel
// size. Margins are proportional so a recording renders sensibly at any
// size; stroke widths, point radii, and font sizes scale with the ratio
// of output size to the recorded design canvas.
struct PlotMapping {
  double width, height;
  double px0, px1, py_top, py_bot;  // plot box
  double xmin, xmax, ymin, ymax;
  double scale;

  double sx(double x) const {
    double span = xmax - xmin;
    if (span <= 0) return (px0 + px1) / 2;
    return px0 + (x - xmin) / span * (px1 - px0);
  }
  double sy(double y) const {
    double span = ymax - ymin;
    if (span <= 0) return (py_top + py_bot) / 2;
    return py_bot - (y - ymin) / span * (py_bot - py_top);
  }
};

inline PlotMapping make_mapping(const lang::GraphicsRecording& rec, int width,
                                int height) {
  PlotMapping m;
  m.width = width;
  m.height = height;
  m.px0 = 0.10 * width;
  m.px1 = 0.96 * width;
  m.py_top = 0.08 * height;
  m.py_bot = 0.89 * height;
  m.xmin = rec.xmin;
  m.xmax = rec.xmax;
  m.ymin = rec.ymin;
  m.ymax = rec.ymax;
  double cw = 640, ch = 480;
  for (const auto& c : rec.cmds) {
    if (c.kind == lang::DrawCmd::Kind::Canvas && c.w > 0 && c.h > 0) {
      cw = c.w;
      ch = c.h;
      break;
    }
  }
  m.scale = std::min(width / cw, height / ch);
  if (m.scale <= 0) m.scale = 1.0;
  return m;
}

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
};

inline Rgb parse_color(const std::string& name) {
  if (!name.empty() && name[0] == '#' && name.size() == 7) {
    auto hex = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return 0;
    };
    return Rgb{static_cast<uint8_t>(hex(name[1]) * 16 + hex(name[2])),
               static_cast<uint8_t>(hex(name[3]) * 16 + hex(name[4])),
               static_cast<uint8_t>(hex(name[5]) * 16 + hex(name[6]))};
  }
  if (name == "white") return {255, 255, 255};
  if (name == "red") return {205, 0, 0};
  if (name == "green") return {0, 139, 0};
  if (name == "blue") return {0, 0, 205};
  if (name == "gray" || name == "grey") return {190, 190, 190};
  if (name == "steelblue") return {70, 130, 180};
  if (name == "orange") return {255, 165, 0};
  return {0, 0, 0};  // black and anything unknown
}

// Minimal stroke font on a 4x6 grid (y grows downward, baseline at 6).
// Lowercase maps to uppercase; unknown glyphs draw as a box. Good enough
// for axis labels and titles in raster output.
using GlyphStrokes = std::vector<std::vector<std::pair<double, double>>>;

inline const GlyphStrokes* glyph_strokes(char ch) {
  using S = GlyphStrokes;
  static const S s_space = {};
  static const S s_0 = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}, {0, 0}}};
  static const S s_1 = {{{1, 1}, {2, 0}, {2, 6}}, {{1, 6}, {3, 6}}};
  static const S s_2 = {{{0, 0}, {4, 0}, {4, 3}, {0, 3}, {0, 6}, {4, 6}}};
  static const S s_3 = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}}, {{1, 3}, {4, 3}}};
  static const S s_4 = {{{0, 0}, {0, 3}, {4, 3}}, {{4, 0}, {4, 6}}};
  static const S s_5 = {{{4, 0}, {0, 0}, {0, 3}, {4, 3}, {4, 6}, {0, 6}}};
  static const S s_6 = {{{4, 0}, {0, 0}, {0, 6}, {4, 6}, {4, 3}, {0, 3}}};
  static const S s_7 = {{{0, 0}, {4, 0}, {2, 6}}};
  static const S s_8 = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}, {0, 0}}, {{0, 3}, {4, 3}}};
  static const S s_9 = {{{4, 3}, {0, 3}, {0, 0}, {4, 0}, {4, 6}, {0, 6}}};
  static const S s_minus = {{{1, 3}, {3, 3}}};
  static const S s_plus = {{{2, 1}, {2, 5}}, {{0, 3}, {4, 3}}};
  static const S s_dot = {{{2, 5.5}, {2, 6}}};
  static const S s_comma = {{{2, 5}, {1.5, 7}}};
  static const S s_colon = {{{2, 1.5}, {2, 2}}, {{2, 5}, {2, 5.5}}};
  static const S s_lparen = {{{3, 0}, {2, 2}, {2, 4}, {3, 6}}};
  static const S s_rparen = {{{1, 0}, {2, 2}, {2, 4}, {1, 6}}};
  static const S s_slash = {{{0, 6}, {4, 0}}};
  static const S s_eq = {{{0, 2}, {4, 2}}, {{0, 4}, {4, 4}}};
  static const S s_A = {{{0, 6}, {2, 0}, {4, 6}}, {{1, 4}, {3, 4}}};
  static const S s_B = {{{0, 0}, {0, 6}}, {{0, 0}, {3, 0}, {4, 1.5}, {3, 3}, {0, 3}},
                        {{3, 3}, {4, 4.5}, {3, 6}, {0, 6}}};
  static const S s_C = {{{4, 0}, {0, 0}, {0, 6}, {4, 6}}};
  static const S s_D = {{{0, 0}, {0, 6}}, {{0, 0}, {3, 0}, {4, 2}, {4, 4}, {3, 6}, {0, 6}}};
  static const S s_E = {{{4, 0}, {0, 0}, {0, 6}, {4, 6}}, {{0, 3}, {3, 3}}};
  static const S s_F = {{{4, 0}, {0, 0}, {0, 6}}, {{0, 3}, {3, 3}}};
  static const S s_G = {{{4, 0}, {0, 0}, {0, 6}, {4, 6}, {4, 3}, {2, 3}}};
  static const S s_H = {{{0, 0}, {0, 6}}, {{4, 0}, {4, 6}}, {{0, 3}, {4, 3}}};
  static const S s_I = {{{1, 0}, {3, 0}}, {{2, 0}, {2, 6}}, {{1, 6}, {3, 6}}};
  static const S s_J = {{{4, 0}, {4, 5}, {3, 6}, {1, 6}, {0, 5}}};
  static const S s_K = {{{0, 0}, {0, 6}}, {{4, 0}, {0, 3}, {4, 6}}};
  static const S s_L = {{{0, 0}, {0, 6}, {4, 6}}};
  static const S s_M = {{{0, 6}, {0, 0}, {2, 3}, {4, 0}, {4, 6}}};
  static const S s_N = {{{0, 6}, {0, 0}, {4, 6}, {4, 0}}};
  static const S s_O = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}, {0, 0}}};
  static const S s_P = {{{0, 6}, {0, 0}, {4, 0}, {4, 3}, {0, 3}}};
  static const S s_Q = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}, {0, 0}}, {{2.5, 4.5}, {4.5, 6.5}}};
  static const S s_R = {{{0, 6}, {0, 0}, {4, 0}, {4, 3}, {0, 3}}, {{1, 3}, {4, 6}}};
  static const S s_S = {{{4, 0}, {0, 0}, {0, 3}, {4, 3}, {4, 6}, {0, 6}}};
  static const S s_T = {{{0, 0}, {4, 0}}, {{2, 0}, {2, 6}}};
  static const S s_U = {{{0, 0}, {0, 6}, {4, 6}, {4, 0}}};
  static const S s_V = {{{0, 0}, {2, 6}, {4, 0}}};
  static const S s_W = {{{0, 0}, {1, 6}, {2, 3}, {3, 6}, {4, 0}}};
  static const S s_X = {{{0, 0}, {4, 6}}, {{4, 0}, {0, 6}}};
  static const S s_Y = {{{0, 0}, {2, 3}, {4, 0}}, {{2, 3}, {2, 6}}};
  static const S s_Z = {{{0, 0}, {4, 0}, {0, 6}, {4, 6}}};
  static const S s_box = {{{0.5, 0.5}, {3.5, 0.5}, {3.5, 5.5}, {0.5, 5.5}, {0.5, 0.5}}};

  if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  switch (ch) {
    case ' ': return &s_space;
    case '0': return &s_0;
    case '1': return &s_1;
    case '2': return &s_2;
    case '3': return &s_3;
    case '4': return &s_4;
    case '5': return &s_5;
    case '6': return &s_6;
    case '7': return &s_7;
    case '8': return &s_8;
    case '9': return &s_9;
    case '-': return &s_minus;
    case '+': return &s_plus;
    case '.': return &s_dot;
    case ',': return &s_comma;
    case ':': return &s_colon;
    case '(': return &s_lparen;
    case ')': return &s_rparen;
    case '/': return &s_slash;
    case '=': return &s_eq;
    case 'A': return &s_A;
    case 'B': return &s_B;
    case 'C': return &s_C;
    case 'D': return &s_D;
    case 'E': return &s_E;
    case 'F': return &s_F;
    case 'G': return &s_G;
    case 'H': return &s_H;
    case 'I': return &s_I;
    case 'J': return &s_J;
    case 'K': return &s_K;
    case 'L': return &s_L;
    case 'M': return &s_M;
    case 'N': return &s_N;
    case 'O': return &s_O;
    case 'P': return &s_P;
    case 'Q': return &s_Q;
    case 'R': return &s_R;
    case 'S': return &s_S;
    case 'T': return &s_T;
    case 'U': return &s_U;
    case 'V': return &s_V;
    case 'W': return &s_W;
    case 'X': return &s_X;
    case 'Y': return &s_Y;
    case 'Z': return &s_Z;
    default: return &s_box;
  }
}

constexpr double kGlyphAdvance = 6.0;  // grid units, including spacing
constexpr double kGlyphHeight = 7.0;   // grid units a size maps onto

}  // namespace statgate::formats
