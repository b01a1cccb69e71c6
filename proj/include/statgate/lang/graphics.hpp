#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "statgate/error.hpp"

namespace statgate::lang {

// One recorded draw command in abstract user coordinates. A flat struct
// keeps the recording trivially serializable and comparable; only the
// fields of the active kind are meaningful.
struct DrawCmd {
  enum class Kind { Canvas, Points, Polyline, Rect, Axis, Text, Title };

  Kind kind = Kind::Canvas;
  double w = 0, h = 0;                     // Canvas: unit-free design size
  std::vector<double> xs, ys;              // Points / Polyline
  double radius = 0;                       // Points
  double width = 0;                        // Polyline stroke width
  std::string color;                       // Points / Polyline
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;   // Rect corners
  std::string fill;                        // Rect
  int side = 0;                            // Axis: 1 bottom, 2 left
  std::vector<double> ticks;               // Axis tick positions (user coords)
  std::vector<std::string> labels;         // Axis tick labels
  double x = 0, y = 0, size = 0;           // Text position / font size
  std::string text;                        // Text / Title string
  std::string anchor;                      // Text: start | middle | end

  bool operator==(const DrawCmd&) const = default;
};

// A finished recording: the command list plus the padded data ranges it
// was drawn against, renderable at any raster or vector size afterwards.
struct GraphicsRecording {
  double xmin = 0, xmax = 1;
  double ymin = 0, ymax = 1;
  std::vector<DrawCmd> cmds;

  bool operator==(const GraphicsRecording&) const = default;
};

// Side-effect stream of an evaluation. plot/hist open a new page;
// title appends to the page being drawn. Append-only while evaluating.
class GraphicsDevice {
 public:
  void open_page(GraphicsRecording rec) {
    close_page();
    current_ = std::move(rec);
  }

  void append(DrawCmd cmd) {
    if (!current_) throw eval_error("no active graphic to draw on");
    current_->cmds.push_back(std::move(cmd));
  }

  bool has_page() const { return current_.has_value(); }

  // Finalizes the stream; the device is empty afterwards.
  std::vector<GraphicsRecording> take() {
    close_page();
    return std::move(done_);
  }

  size_t page_count() const { return done_.size() + (current_ ? 1 : 0); }

 private:
  void close_page() {
    if (current_) {
      done_.push_back(std::move(*current_));
      current_.reset();
    }
  }

  std::vector<GraphicsRecording> done_;
  std::optional<GraphicsRecording> current_;
};

}  // namespace statgate::lang
