#pragma once

// Minimal JSON emitter. Floats are written with 17 significant digits so that
// reports reproduce bit-identically; non-finite values become null.

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "holomap/existence.hpp"
#include "holomap/maps.hpp"
#include "holomap/verify.hpp"

namespace holomap::json {

class Writer {
 public:
  Writer& begin_object() { return open('{'); }
  Writer& end_object() { return close('}'); }
  Writer& begin_array() { return open('['); }
  Writer& end_array() { return close(']'); }

  Writer& key(std::string_view k) {
    comma();
    string_literal(k);
    out_ += ':';
    after_key_ = true;
    return *this;
  }

  Writer& value(std::string_view s) {
    comma();
    string_literal(s);
    return *this;
  }
  Writer& value(const char* s) { return value(std::string_view(s)); }
  Writer& value(bool b) {
    comma();
    out_ += b ? "true" : "false";
    return *this;
  }
  Writer& value(double x) {
    comma();
    if (!std::isfinite(x)) {
      out_ += "null";
      return *this;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    out_ += buf;
    return *this;
  }
  Writer& value(std::uint64_t n) {
    comma();
    out_ += std::to_string(n);
    return *this;
  }
  Writer& value(std::int64_t n) {
    comma();
    out_ += std::to_string(n);
    return *this;
  }
  Writer& null() {
    comma();
    out_ += "null";
    return *this;
  }

  const std::string& str() const { return out_; }

 private:
  Writer& open(char c) {
    comma();
    out_ += c;
    fresh_ = true;
    return *this;
  }
  Writer& close(char c) {
    out_ += c;
    fresh_ = false;
    return *this;
  }
  void comma() {
    if (after_key_) {
      after_key_ = false;
      fresh_ = false;
      return;
    }
    if (!fresh_ && !out_.empty()) out_ += ',';
    fresh_ = false;
  }
  void string_literal(std::string_view s) {
    out_ += '"';
    for (char ch : s) {
      auto c = static_cast<unsigned char>(ch);
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
  bool after_key_ = false;
};

inline void write_point(Writer& w, const ComplexPoint& x) {
  w.begin_array();
  for (auto c : x) w.begin_array().value(c.real()).value(c.imag()).end_array();
  w.end_array();
}

inline void write_sigma(Writer& w, const Permutation& sigma) {
  w.begin_array();
  for (auto i : sigma.one_based()) w.value(static_cast<std::uint64_t>(i));
  w.end_array();
}

/// {"witness":{...}} for existence, {"non_existence":{"reason":...}} otherwise.
inline std::string witness(const ExistenceWitness& wit) {
  Writer w;
  w.begin_object();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NonExistence>) {
          w.key("non_existence").begin_object().key("reason").value(x.reason).end_object();
        } else {
          w.key("witness").begin_object();
          if constexpr (std::is_same_v<T, EllipsoidWitness>) {
            w.key("sigma");
            write_sigma(w, x.sigma);
          } else if constexpr (std::is_same_v<T, Hartogs11Witness>) {
            w.key("k").value(x.k).key("l").value(x.l);
          } else {
            w.key("k").value(x.k).key("sigma");
            write_sigma(w, x.sigma);
          }
          w.end_object();
        }
      },
      wit);
  w.end_object();
  return w.str();
}

inline std::string report(const VerificationReport& r) {
  Writer w;
  w.begin_object();
  w.key("kind").value(r.kind);
  w.key("passed").value(r.passed);
  w.key("samples").value(static_cast<std::uint64_t>(r.samples));
  w.key("seed").value(r.seed);
  w.key("tolerances").begin_object();
  for (const auto& [name, tol] : r.tolerances) w.key(name).value(tol);
  w.end_object();
  w.key("worst_case").begin_object().key("point");
  write_point(w, r.worst_case.point);
  w.key("value").value(r.worst_case.value).end_object();
  w.key("levels");
  if (r.levels) {
    w.begin_array();
    for (const auto& lv : *r.levels)
      w.begin_object().key("eps").value(lv.eps).key("max_target_gap").value(lv.max_target_gap).end_object();
    w.end_array();
  } else {
    w.null();
  }
  w.end_object();
  return w.str();
}

inline std::string map_document(const MapExpr& f) {
  Writer w;
  w.begin_object().key("map").value(format_map(f)).end_object();
  return w.str();
}

inline std::string point_document(const ComplexPoint& x) {
  Writer w;
  w.begin_object().key("value");
  write_point(w, x);
  w.end_object();
  return w.str();
}

}  // namespace holomap::json
