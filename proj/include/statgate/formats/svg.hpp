#pragma once

#include <cstdio>
#include <string>

#include "statgate/formats/render_common.hpp"
#include "statgate/lang/graphics.hpp"

namespace statgate::formats {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void svg_text(std::string& out, double x, double y, const std::string& text,
                     double size, const std::string& anchor) {
  out += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" font-size=\"" +
         svg_num(size) + "\" font-family=\"sans-serif\" text-anchor=\"" + anchor +
         "\">" + xml_escape(text) + "</text>\n";
}

}  // namespace detail

// Canonical SVG text: fixed element order (recording order), two-decimal
// coordinates, no volatile content, so equal recordings render to equal
// bytes at equal sizes.
inline std::string render_svg(const lang::GraphicsRecording& rec, int width,
                              int height) {
  using detail::svg_num;
  PlotMapping m = make_mapping(rec, width, height);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";

  for (const auto& c : rec.cmds) {
    switch (c.kind) {
      case lang::DrawCmd::Kind::Canvas:
        break;  // design size only influences the mapping
      case lang::DrawCmd::Kind::Points: {
        double r = c.radius * m.scale;
        for (size_t i = 0; i < c.xs.size() && i < c.ys.size(); ++i) {
          out += "<circle cx=\"" + svg_num(m.sx(c.xs[i])) + "\" cy=\"" +
                 svg_num(m.sy(c.ys[i])) + "\" r=\"" + svg_num(r) + "\" fill=\"" +
                 detail::xml_escape(c.color) + "\"/>\n";
        }
        break;
      }
      case lang::DrawCmd::Kind::Polyline: {
        out += "<polyline fill=\"none\" stroke=\"" + detail::xml_escape(c.color) +
               "\" stroke-width=\"" + svg_num(c.width * m.scale) + "\" points=\"";
        for (size_t i = 0; i < c.xs.size() && i < c.ys.size(); ++i) {
          if (i) out += ' ';
          out += svg_num(m.sx(c.xs[i])) + "," + svg_num(m.sy(c.ys[i]));
        }
        out += "\"/>\n";
        break;
      }
      case lang::DrawCmd::Kind::Rect: {
        double x0 = m.sx(c.x0), x1 = m.sx(c.x1);
        double y0 = m.sy(c.y0), y1 = m.sy(c.y1);
        if (x1 < x0) std::swap(x0, x1);
        if (y1 < y0) std::swap(y0, y1);
        out += "<rect x=\"" + svg_num(x0) + "\" y=\"" + svg_num(y0) + "\" width=\"" +
               svg_num(x1 - x0) + "\" height=\"" + svg_num(y1 - y0) + "\" fill=\"" +
               detail::xml_escape(c.fill) + "\"/>\n";
        break;
      }
      case lang::DrawCmd::Kind::Axis: {
        double tick = 5 * m.scale;
        double label_size = 11 * m.scale;
        if (c.side == 1) {
          out += "<line x1=\"" + svg_num(m.px0) + "\" y1=\"" + svg_num(m.py_bot) +
                 "\" x2=\"" + svg_num(m.px1) + "\" y2=\"" + svg_num(m.py_bot) +
                 "\" stroke=\"black\"/>\n";
          for (size_t i = 0; i < c.ticks.size(); ++i) {
            double x = m.sx(c.ticks[i]);
            out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(m.py_bot) +
                   "\" x2=\"" + svg_num(x) + "\" y2=\"" + svg_num(m.py_bot + tick) +
                   "\" stroke=\"black\"/>\n";
            if (i < c.labels.size())
              detail::svg_text(out, x, m.py_bot + tick + label_size, c.labels[i],
                               label_size, "middle");
          }
        } else {
          out += "<line x1=\"" + svg_num(m.px0) + "\" y1=\"" + svg_num(m.py_top) +
                 "\" x2=\"" + svg_num(m.px0) + "\" y2=\"" + svg_num(m.py_bot) +
                 "\" stroke=\"black\"/>\n";
          for (size_t i = 0; i < c.ticks.size(); ++i) {
            double y = m.sy(c.ticks[i]);
            out += "<line x1=\"" + svg_num(m.px0 - tick) + "\" y1=\"" + svg_num(y) +
                   "\" x2=\"" + svg_num(m.px0) + "\" y2=\"" + svg_num(y) +
                   "\" stroke=\"black\"/>\n";
            if (i < c.labels.size())
              detail::svg_text(out, m.px0 - tick - 2 * m.scale, y + label_size * 0.35,
                               c.labels[i], label_size, "end");
          }
        }
        break;
      }
      case lang::DrawCmd::Kind::Text:
        detail::svg_text(out, m.sx(c.x), m.sy(c.y), c.text, c.size * m.scale,
                         c.anchor.empty() ? "start" : c.anchor);
        break;
      case lang::DrawCmd::Kind::Title:
        detail::svg_text(out, (m.px0 + m.px1) / 2, m.py_top * 0.65, c.text,
                         14 * m.scale, "middle");
        break;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace statgate::formats
