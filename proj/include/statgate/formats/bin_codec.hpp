#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "statgate/error.hpp"
#include "statgate/value.hpp"

namespace statgate::formats {

// Tag-length-value binary interchange, little-endian, magic "SGB1".
// decode(encode(v)) is deep-equal to v for every non-function value;
// encoding is byte-deterministic (NaN payloads are canonicalized).

namespace binv {

constexpr char kMagic[4] = {'S', 'G', 'B', '1'};

enum : uint8_t {
  kNull = 0x00,
  kLogicalScalar = 0x01,
  kNumberScalar = 0x02,
  kStringScalar = 0x03,
  kVector = 0x04,
  kList = 0x05,
  kDataframe = 0x06,
  kGraphic = 0x07,
};

class Writer {
 public:
  void u8(uint8_t v) { out_ += static_cast<char>(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_ += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  void f64(double d) {
    uint64_t bits;
    if (std::isnan(d)) {
      bits = 0x7FF8000000000000ULL;  // canonical quiet NaN
    } else {
      std::memcpy(&bits, &d, 8);
    }
    u64(bits);
  }
  void str(const std::string& s) {
    if (s.size() > 0xFFFFFFFFULL) throw format_error("bin: string too long");
    u32(static_cast<uint32_t>(s.size()));
    out_ += s;
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(in_[pos_++]);
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<uint8_t>(in_[pos_++])) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(in_[pos_++])) << (8 * i);
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  std::string str() {
    uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  size_t remaining() const { return in_.size() - pos_; }
  void need(size_t n) const {
    if (in_.size() - pos_ < n) throw format_error("bin: truncated input");
  }

 private:
  std::string_view in_;
  size_t pos_ = 0;
};

inline void write_vector_body(Writer& w, const VectorData& v) {
  switch (v.type) {
    case ElemType::Logical: w.u8(1); break;
    case ElemType::Number: w.u8(2); break;
    case ElemType::String: w.u8(3); break;
  }
  w.u64(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    switch (v.type) {
      case ElemType::Logical:
        w.u8(v.is_na(i) ? 2 : (v.log[i] ? 1 : 0));
        break;
      case ElemType::Number:
        w.u8(v.is_na(i) ? 1 : 0);
        w.f64(v.is_na(i) ? 0.0 : v.num[i]);
        break;
      case ElemType::String:
        w.u8(v.is_na(i) ? 1 : 0);
        if (!v.is_na(i)) w.str(v.str[i]);
        break;
    }
  }
}

inline VectorData read_vector_body(Reader& r) {
  VectorData v;
  uint8_t t = r.u8();
  switch (t) {
    case 1: v.type = ElemType::Logical; break;
    case 2: v.type = ElemType::Number; break;
    case 3: v.type = ElemType::String; break;
    default: throw format_error("bin: unknown element type");
  }
  uint64_t n = r.u64();
  // every element takes at least one byte; bounds the allocation up front
  if (n > r.remaining()) throw format_error("bin: element count exceeds input size");
  for (uint64_t i = 0; i < n; ++i) {
    switch (v.type) {
      case ElemType::Logical: {
        uint8_t b = r.u8();
        if (b > 2) throw format_error("bin: bad logical element");
        v.na.push_back(b == 2 ? 1 : 0);
        v.log.push_back(b == 1 ? 1 : 0);
        break;
      }
      case ElemType::Number: {
        uint8_t na = r.u8();
        if (na > 1) throw format_error("bin: bad missing flag");
        double d = r.f64();
        v.na.push_back(na);
        v.num.push_back(na ? 0.0 : d);
        break;
      }
      case ElemType::String: {
        uint8_t na = r.u8();
        if (na > 1) throw format_error("bin: bad missing flag");
        v.na.push_back(na);
        v.str.push_back(na ? std::string() : r.str());
        break;
      }
    }
  }
  return v;
}

void write_graphic(Writer& w, const lang::GraphicsRecording& rec);
lang::GraphicsRecording read_graphic(Reader& r);

inline void write_value(Writer& w, const Value& v) {
  switch (v.tag()) {
    case Tag::Null:
      w.u8(kNull);
      return;
    case Tag::Logical:
      w.u8(kLogicalScalar);
      w.u8(v.logical_scalar().na ? 2 : (v.logical_scalar().value ? 1 : 0));
      return;
    case Tag::Number:
      w.u8(kNumberScalar);
      w.u8(v.number_scalar().na ? 1 : 0);
      w.f64(v.number_scalar().na ? 0.0 : v.number_scalar().value);
      return;
    case Tag::String:
      w.u8(kStringScalar);
      w.str(v.string_scalar());
      return;
    case Tag::Vector:
      w.u8(kVector);
      write_vector_body(w, v.vec());
      return;
    case Tag::List: {
      w.u8(kList);
      const auto& items = v.list_data().items;
      w.u32(static_cast<uint32_t>(items.size()));
      for (const auto& [name, member] : items) {
        w.str(name);
        write_value(w, member);
      }
      return;
    }
    case Tag::Dataframe: {
      w.u8(kDataframe);
      const auto& cols = v.frame().cols;
      w.u32(static_cast<uint32_t>(cols.size()));
      for (const auto& [name, col] : cols) {
        w.str(name);
        write_vector_body(w, col);
      }
      return;
    }
    case Tag::Function:
      throw format_error("functions cannot be encoded in the binary format");
    case Tag::Graphic:
      w.u8(kGraphic);
      write_graphic(w, v.graphic_rec());
      return;
  }
}

inline Value read_value(Reader& r, int depth = 0) {
  if (depth > 64) throw format_error("bin: nesting too deep");
  uint8_t tag = r.u8();
  switch (tag) {
    case kNull:
      return Value::null();
    case kLogicalScalar: {
      uint8_t b = r.u8();
      if (b > 2) throw format_error("bin: bad logical scalar");
      return b == 2 ? Value::logical_na() : Value::logical(b == 1);
    }
    case kNumberScalar: {
      uint8_t na = r.u8();
      if (na > 1) throw format_error("bin: bad missing flag");
      double d = r.f64();
      return na ? Value::number_na() : Value::number(d);
    }
    case kStringScalar:
      return Value::string(r.str());
    case kVector:
      return Value::vector(read_vector_body(r));
    case kList: {
      uint32_t n = r.u32();
      if (n > r.remaining()) throw format_error("bin: item count exceeds input size");
      ListData l;
      for (uint32_t i = 0; i < n; ++i) {
        std::string name = r.str();
        l.items.emplace_back(std::move(name), read_value(r, depth + 1));
      }
      try {
        return Value::list(std::move(l));
      } catch (const Error& e) {
        throw format_error(std::string("bin: ") + e.message());
      }
    }
    case kDataframe: {
      uint32_t n = r.u32();
      if (n > r.remaining()) throw format_error("bin: column count exceeds input size");
      FrameData f;
      for (uint32_t i = 0; i < n; ++i) {
        std::string name = r.str();
        f.cols.emplace_back(std::move(name), read_vector_body(r));
      }
      try {
        return Value::dataframe(std::move(f));
      } catch (const Error& e) {
        throw format_error(std::string("bin: ") + e.message());
      }
    }
    case kGraphic:
      return Value::graphic(read_graphic(r));
    default:
      throw format_error("bin: unknown tag");
  }
}

inline void write_cmd(Writer& w, const lang::DrawCmd& c) {
  using K = lang::DrawCmd::Kind;
  auto write_doubles = [&w](const std::vector<double>& xs) {
    w.u64(xs.size());
    for (double d : xs) w.f64(d);
  };
  switch (c.kind) {
    case K::Canvas:
      w.u8(0);
      w.f64(c.w);
      w.f64(c.h);
      return;
    case K::Points:
      w.u8(1);
      write_doubles(c.xs);
      write_doubles(c.ys);
      w.f64(c.radius);
      w.str(c.color);
      return;
    case K::Polyline:
      w.u8(2);
      write_doubles(c.xs);
      write_doubles(c.ys);
      w.f64(c.width);
      w.str(c.color);
      return;
    case K::Rect:
      w.u8(3);
      w.f64(c.x0);
      w.f64(c.y0);
      w.f64(c.x1);
      w.f64(c.y1);
      w.str(c.fill);
      return;
    case K::Axis:
      w.u8(4);
      w.u8(static_cast<uint8_t>(c.side));
      write_doubles(c.ticks);
      w.u32(static_cast<uint32_t>(c.labels.size()));
      for (const auto& s : c.labels) w.str(s);
      return;
    case K::Text:
      w.u8(5);
      w.f64(c.x);
      w.f64(c.y);
      w.str(c.text);
      w.f64(c.size);
      w.str(c.anchor);
      return;
    case K::Title:
      w.u8(6);
      w.str(c.text);
      return;
  }
}

inline lang::DrawCmd read_cmd(Reader& r) {
  using K = lang::DrawCmd::Kind;
  auto read_doubles = [&r]() {
    uint64_t n = r.u64();
    if (n > r.remaining() / 8) throw format_error("bin: coordinate count exceeds input");
    std::vector<double> out;
    out.reserve(n);
    for (uint64_t i = 0; i < n; ++i) out.push_back(r.f64());
    return out;
  };
  lang::DrawCmd c;
  uint8_t k = r.u8();
  switch (k) {
    case 0:
      c.kind = K::Canvas;
      c.w = r.f64();
      c.h = r.f64();
      return c;
    case 1:
      c.kind = K::Points;
      c.xs = read_doubles();
      c.ys = read_doubles();
      c.radius = r.f64();
      c.color = r.str();
      return c;
    case 2:
      c.kind = K::Polyline;
      c.xs = read_doubles();
      c.ys = read_doubles();
      c.width = r.f64();
      c.color = r.str();
      return c;
    case 3:
      c.kind = K::Rect;
      c.x0 = r.f64();
      c.y0 = r.f64();
      c.x1 = r.f64();
      c.y1 = r.f64();
      c.fill = r.str();
      return c;
    case 4: {
      c.kind = K::Axis;
      c.side = r.u8();
      c.ticks = read_doubles();
      uint32_t n = r.u32();
      if (n > r.remaining()) throw format_error("bin: label count exceeds input");
      for (uint32_t i = 0; i < n; ++i) c.labels.push_back(r.str());
      return c;
    }
    case 5:
      c.kind = K::Text;
      c.x = r.f64();
      c.y = r.f64();
      c.text = r.str();
      c.size = r.f64();
      c.anchor = r.str();
      return c;
    case 6:
      c.kind = K::Title;
      c.text = r.str();
      return c;
    default:
      throw format_error("bin: unknown draw command");
  }
}

inline void write_graphic(Writer& w, const lang::GraphicsRecording& rec) {
  w.f64(rec.xmin);
  w.f64(rec.xmax);
  w.f64(rec.ymin);
  w.f64(rec.ymax);
  w.u32(static_cast<uint32_t>(rec.cmds.size()));
  for (const auto& c : rec.cmds) write_cmd(w, c);
}

inline lang::GraphicsRecording read_graphic(Reader& r) {
  lang::GraphicsRecording rec;
  rec.xmin = r.f64();
  rec.xmax = r.f64();
  rec.ymin = r.f64();
  rec.ymax = r.f64();
  uint32_t n = r.u32();
  if (n > r.remaining()) throw format_error("bin: command count exceeds input");
  for (uint32_t i = 0; i < n; ++i) rec.cmds.push_back(read_cmd(r));
  return rec;
}

}  // namespace binv

inline std::string encode_bin(const Value& v) {
  binv::Writer w;
  binv::write_value(w, v);
  return std::string(binv::kMagic, 4) + w.take();
}

inline Value decode_bin(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), binv::kMagic, 4) != 0)
    throw format_error("bin: bad magic");
  binv::Reader r(bytes.substr(4));
  Value v = binv::read_value(r);
  if (r.remaining() != 0) throw format_error("bin: trailing bytes");
  return v;
}

// Standalone recording serialization for graphics/NNN.rec files.
inline std::string encode_recording(const lang::GraphicsRecording& rec) {
  binv::Writer w;
  binv::write_graphic(w, rec);
  return w.take();
}

inline lang::GraphicsRecording decode_recording(std::string_view bytes) {
  binv::Reader r(bytes);
  lang::GraphicsRecording rec = binv::read_graphic(r);
  if (r.remaining() != 0) throw format_error("bin: trailing bytes");
  return rec;
}

}  // namespace statgate::formats
