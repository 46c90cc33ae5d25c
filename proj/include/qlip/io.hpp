#pragma once

#include <string>
#include <vector>

#include "qlip/model.hpp"

namespace qlip {

/// Strict instance parsing: required keys n, m, Q, A, b, c; optional "norm"
/// ("l1" | "l2" | "linf", default "l2"); unknown keys rejected.  Throws
/// Error(PARSE_ERROR) on malformed input and validation errors otherwise.
QpInstance load_instance(const std::string& path);

struct Polyhedron {
  std::size_t n = 0;
  std::size_t m = 0;
  Matrix A;
  Vector b;
};

/// Polyhedron files share the instance schema but only n, m, A, b are used;
/// Q, c, norm are tolerated so an instance file doubles as a polyhedron.
Polyhedron load_polyhedron(const std::string& path);

/// Minimal insertion-ordered JSON document with the output conventions:
/// reals as 17-significant-digit doubles, infinities as the strings
/// "inf" / "-inf".
class Json {
 public:
  static Json object();
  static Json array();
  static Json real(double v);
  static Json integer(long long v);
  static Json boolean(bool v);
  static Json string(std::string v);
  static Json null();

  static Json real_vector(const Vector& v);
  static Json int_vector(const std::vector<int>& v);

  Json& add(const std::string& key, Json v);  // object member
  Json& push(Json v);                         // array element

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };
  Kind kind_ = Kind::Null;
  bool b_ = false;
  long long i_ = 0;
  double d_ = 0.0;
  std::string s_;
  std::vector<Json> items_;
  std::vector<std::pair<std::string, Json>> members_;

  void write(std::string& out, int indent, int depth) const;
};

/// 17-significant-digit representation ("inf" / "-inf" for infinities).
std::string format_real(double v);

}  // namespace qlip
