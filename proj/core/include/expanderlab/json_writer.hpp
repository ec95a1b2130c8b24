#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace expanderlab {

/// 17 significant digits; non-finite values become null.
std::string format_double(double v);

/// Streaming JSON emitter with fixed formatting, so that equal inputs give
/// byte-identical output. Objects are indented two spaces per level;
/// numeric arrays go on one line.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);

  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::size_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null();
  JsonWriter& numbers(std::span<const double> values);
  /// Inserts an already serialized value verbatim.
  JsonWriter& raw(const std::string& text);

  template <class T>
  JsonWriter& field(const std::string& name, const T& v) {
    key(name);
    return value(v);
  }

  /// Finished document with a trailing newline.
  std::string str() const { return out_ + "\n"; }

 private:
  struct Frame {
    bool array = false;
    bool empty = true;
  };
  void before_value();
  void newline();

  std::string out_;
  std::vector<Frame> stack_;
  bool after_key_ = false;
};

std::string json_escape(const std::string& s);

}  // namespace expanderlab
