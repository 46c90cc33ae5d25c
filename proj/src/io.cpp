#include "qlip/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qlip/error.hpp"

namespace qlip {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::ParseError, "top-level value must be an object");
  return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      throw Error(ErrorCode::ParseError, "unknown key: \"" + it.key() + "\"");
  }
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.contains(key))
    throw Error(ErrorCode::ParseError, std::string("missing key: \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrorCode::ParseError,
                std::string("\"") + key + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

Vector get_vector(const json& j, const char* key, std::size_t len) {
  if (!j.contains(key))
    throw Error(ErrorCode::ParseError, std::string("missing key: \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != len)
    throw Error(ErrorCode::ParseError,
                std::string("\"") + key + "\" must be an array of length " +
                    std::to_string(len));
  Vector out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!v[i].is_number())
      throw Error(ErrorCode::ParseError,
                  std::string("\"") + key + "\" entries must be numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

Matrix get_matrix(const json& j, const char* key, std::size_t rows, std::size_t cols) {
  if (!j.contains(key))
    throw Error(ErrorCode::ParseError, std::string("missing key: \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != rows)
    throw Error(ErrorCode::ParseError,
                std::string("\"") + key + "\" must be an array of " +
                    std::to_string(rows) + " rows");
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols)
      throw Error(ErrorCode::ParseError,
                  std::string("\"") + key + "\" rows must have length " +
                      std::to_string(cols));
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number())
        throw Error(ErrorCode::ParseError,
                    std::string("\"") + key + "\" entries must be numbers");
      out(i, k) = row[k].get<double>();
    }
  }
  return out;
}

VectorNorm get_norm(const json& j) {
  if (!j.contains("norm")) return VectorNorm::L2;
  const json& v = j.at("norm");
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "l1") return VectorNorm::L1;
    if (s == "l2") return VectorNorm::L2;
    if (s == "linf") return VectorNorm::LInf;
  }
  throw Error(ErrorCode::ParseError, "\"norm\" must be \"l1\", \"l2\" or \"linf\"");
}

}  // namespace

QpInstance load_instance(const std::string& path) {
  json j = read_json(path);
  reject_unknown_keys(j, {"n", "m", "Q", "A", "b", "c", "norm"});
  std::size_t n = get_count(j, "n");
  std::size_t m = get_count(j, "m");
  Matrix Q = get_matrix(j, "Q", n, n);
  Matrix A = get_matrix(j, "A", m, n);
  Vector b = get_vector(j, "b", m);
  Vector c = get_vector(j, "c", n);
  return validate(n, m, std::move(Q), std::move(A), std::move(c), std::move(b),
                  get_norm(j));
}

Polyhedron load_polyhedron(const std::string& path) {
  json j = read_json(path);
  reject_unknown_keys(j, {"n", "m", "Q", "A", "b", "c", "norm"});
  Polyhedron poly;
  poly.n = get_count(j, "n");
  poly.m = get_count(j, "m");
  poly.A = get_matrix(j, "A", poly.m, poly.n);
  poly.b = get_vector(j, "b", poly.m);
  if (!poly.A.all_finite() ||
      std::any_of(poly.b.begin(), poly.b.end(),
                  [](double v) { return !std::isfinite(v); }))
    throw Error(ErrorCode::Nonfinite, "A and b must be finite");
  return poly;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::Obj;
  return j;
}
Json Json::array() {
  Json j;
  j.kind_ = Kind::Arr;
  return j;
}
Json Json::real(double v) {
  Json j;
  j.kind_ = Kind::Real;
  j.d_ = v;
  return j;
}
Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::Int;
  j.i_ = v;
  return j;
}
Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.b_ = v;
  return j;
}
Json Json::string(std::string v) {
  Json j;
  j.kind_ = Kind::Str;
  j.s_ = std::move(v);
  return j;
}
Json Json::null() { return Json{}; }

Json Json::real_vector(const Vector& v) {
  Json arr = array();
  for (double x : v) arr.push(real(x));
  return arr;
}

Json Json::int_vector(const std::vector<int>& v) {
  Json arr = array();
  for (int x : v) arr.push(integer(x));
  return arr;
}

Json& Json::add(const std::string& key, Json v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  items_.push_back(std::move(v));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::Null: out += "null"; return;
    case Kind::Bool: out += b_ ? "true" : "false"; return;
    case Kind::Int: out += std::to_string(i_); return;
    case Kind::Real:
      if (std::isinf(d_) || std::isnan(d_))
        write_escaped(out, format_real(d_));
      else
        out += format_real(d_);
      return;
    case Kind::Str: write_escaped(out, s_); return;
    case Kind::Arr: {
      if (items_.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays stay on one line
      bool flat = std::all_of(items_.begin(), items_.end(), [](const Json& j) {
        return j.kind_ != Kind::Arr && j.kind_ != Kind::Obj;
      });
      out += '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ',';
        if (flat) {
          if (i) out += ' ';
        } else {
          newline_indent(out, indent, depth + 1);
        }
        items_[i].write(out, indent, depth + 1);
      }
      if (!flat) newline_indent(out, indent, depth);
      out += ']';
      return;
    }
    case Kind::Obj: {
      if (members_.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out += ',';
        newline_indent(out, indent, depth + 1);
        write_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, indent, depth + 1);
      }
      newline_indent(out, indent, depth);
      out += '}';
      return;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  return out;
}

}  // namespace qlip
