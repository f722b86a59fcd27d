#include "holosurf/surface_spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>
#include <utility>

namespace holosurf {

namespace {

struct KeyValue {
  std::string value;
  int line = 0;
  int col = 0;  // 1-based column of the value
};

struct Assignment {
  int index = 0;
  Expr expr;
};

struct RawSpec {
  std::map<std::string, KeyValue> keys;
  std::map<int, Assignment> assigns;
  bool has_expr_block = false;
};

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

// One expr-block segment: assignments `f<i>=<rhs>` split on ';'.
void parse_expr_segment(const std::string& seg, int line, int col0,
                        RawSpec& raw) {
  std::size_t start = 0;
  while (start <= seg.size()) {
    std::size_t stop = seg.find(';', start);
    if (stop == std::string::npos) stop = seg.size();
    const std::string piece = seg.substr(start, stop - start);
    if (!blank(piece)) {
      std::size_t lhs = 0;
      while (lhs < piece.size() &&
             std::isspace(static_cast<unsigned char>(piece[lhs])))
        ++lhs;
      const std::size_t eq = piece.find('=');
      const int at = col0 + static_cast<int>(start + lhs) + 1;
      if (eq == std::string::npos || eq <= lhs)
        throw SpecParseError("expected f<index>=expression", line, at);
      std::size_t name_end = eq;
      while (name_end > lhs &&
             std::isspace(static_cast<unsigned char>(piece[name_end - 1])))
        --name_end;
      const std::string name = piece.substr(lhs, name_end - lhs);
      bool well_formed = name.size() >= 2 && name[0] == 'f';
      for (std::size_t i = 1; well_formed && i < name.size(); ++i)
        well_formed = std::isdigit(static_cast<unsigned char>(name[i]));
      if (!well_formed)
        throw SpecParseError("expected f<index> on the left of '='", line, at);
      const int index = std::atoi(name.c_str() + 1);
      if (raw.assigns.count(index))
        throw ValidationError("duplicate assignment for '" + name + "'");
      Expr expr =
          parse_expression(piece.substr(eq + 1), line,
                           col0 + static_cast<int>(start + eq) + 1);
      raw.assigns.emplace(index, Assignment{index, std::move(expr)});
    }
    start = stop + 1;
  }
}

RawSpec tokenize(const std::string& text) {
  RawSpec raw;
  bool in_expr = false;
  int line_no = 0;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    ++line_no;
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);

    if (in_expr) {
      parse_expr_segment(line, line_no, 0, raw);
    } else {
      std::size_t pos = 0;
      while (pos < line.size()) {
        while (pos < line.size() &&
               std::isspace(static_cast<unsigned char>(line[pos])))
          ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() &&
               !std::isspace(static_cast<unsigned char>(line[end])))
          ++end;
        const std::string token = line.substr(pos, end - pos);
        if (token == "expr:") {
          in_expr = true;
          raw.has_expr_block = true;
          parse_expr_segment(line.substr(end), line_no,
                             static_cast<int>(end), raw);
          pos = line.size();
          break;
        }
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
          throw SpecParseError("expected key=value", line_no,
                               static_cast<int>(pos) + 1);
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        const int value_col = static_cast<int>(pos + eq) + 2;
        if (value.empty())
          throw SpecParseError("empty value for key '" + key + "'", line_no,
                               value_col);
        if (raw.keys.count(key))
          throw ValidationError("duplicate key '" + key + "'");
        raw.keys.emplace(key, KeyValue{value, line_no, value_col});
        pos = end;
      }
    }
    line_start = line_end + 1;
  }
  return raw;
}

double parse_double(const std::string& key, const KeyValue& kv) {
  const char* begin = kv.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + kv.value.size())
    throw SpecParseError("malformed number for key '" + key + "'", kv.line,
                         kv.col);
  return v;
}

int parse_int(const std::string& key, const KeyValue& kv) {
  const char* begin = kv.value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + kv.value.size())
    throw ValidationError("key '" + key + "' needs an integer; got '" +
                          kv.value + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& key,
                                      const KeyValue& kv) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= kv.value.size()) {
    std::size_t stop = kv.value.find(',', start);
    if (stop == std::string::npos) stop = kv.value.size();
    KeyValue one{kv.value.substr(start, stop - start), kv.line,
                 kv.col + static_cast<int>(start)};
    out.push_back(parse_double(key, one));
    start = stop + 1;
  }
  return out;
}

const std::set<std::string> kFamilyKeys = {
    "family", "n", "nu", "k", "r", "rho", "t", "amplitude", "frequency"};
const std::set<std::string> kExprKeys = {"n", "nu", "lo", "hi"};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SurfaceSpec parse_surface_spec(const std::string& text) {
  RawSpec raw = tokenize(text);

  for (const auto& [key, kv] : raw.keys)
    if (!kFamilyKeys.count(key) && !kExprKeys.count(key))
      throw ValidationError("unknown key '" + key + "'");

  const bool has_family = raw.keys.count("family") != 0;
  if (has_family && raw.has_expr_block)
    throw ValidationError("key 'family' conflicts with the expr: block");
  if (!has_family && !raw.has_expr_block)
    throw ValidationError("one of family= or an expr: block is required");

  SurfaceSpec spec;
  spec.is_family = has_family;

  if (has_family) {
    FamilySpec& f = spec.family;
    try {
      f.family = family_from_name(raw.keys.at("family").value);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("key 'family': ") + e.what());
    }
    for (const auto& [key, kv] : raw.keys) {
      if (key == "family") continue;
      if (!kFamilyKeys.count(key))
        throw ValidationError("key '" + key +
                              "' applies only to expression charts");
      if (key == "n")
        f.n = parse_int(key, kv);
      else if (key == "k")
        f.k = parse_int(key, kv);
      else if (key == "nu")
        f.nu = parse_double(key, kv);
      else if (key == "r")
        f.r = parse_double(key, kv);
      else if (key == "rho")
        f.rho = parse_double(key, kv);
      else if (key == "t")
        f.t = parse_double(key, kv);
      else if (key == "amplitude")
        f.amplitude = parse_double(key, kv);
      else if (key == "frequency")
        f.frequency = parse_double(key, kv);
    }
    if (!raw.keys.count("n")) throw ValidationError("key 'n' is required");
    return spec;
  }

  ExprChartSpec& e = spec.expr;
  for (const auto& [key, kv] : raw.keys)
    if (!kExprKeys.count(key))
      throw ValidationError("key '" + key +
                            "' applies only to family charts");
  if (!raw.keys.count("n"))
    throw ValidationError("key 'n' is required for expression charts");
  if (!raw.keys.count("nu"))
    throw ValidationError("key 'nu' is required for expression charts");
  e.n = parse_int("n", raw.keys.at("n"));
  e.nu = parse_double("nu", raw.keys.at("nu"));
  e.lo = raw.keys.count("lo") ? parse_double_list("lo", raw.keys.at("lo"))
                              : std::vector<double>{0.35};
  e.hi = raw.keys.count("hi") ? parse_double_list("hi", raw.keys.at("hi"))
                              : std::vector<double>{1.25};
  if (e.n < 1) throw ValidationError("key 'n' must be at least 1");

  const int m = e.n + (e.nu == 0.0 ? 1 : 2);
  for (const auto& [index, assign] : raw.assigns)
    if (index < 1 || index > m)
      throw ValidationError(
          "expr: block defines f" + std::to_string(index) +
          " but the embedding dimension is " + std::to_string(m));
  for (int i = 1; i <= m; ++i)
    if (!raw.assigns.count(i))
      throw ValidationError("expr: block is missing f" + std::to_string(i) +
                            " (needs f1..f" + std::to_string(m) + ")");
  int max_var = 0;
  for (auto& [index, assign] : raw.assigns) {
    max_var = std::max(max_var, assign.expr.max_var());
    e.components.push_back(std::move(assign.expr));
  }
  if (max_var != e.n)
    throw ValidationError(
        "expr: block references parameters up to u" +
        std::to_string(max_var) + " but n=" + std::to_string(e.n));

  for (const char* key : {"lo", "hi"}) {
    const std::vector<double>& v = key[0] == 'l' ? e.lo : e.hi;
    if (v.size() != 1 && v.size() != static_cast<std::size_t>(e.n))
      throw ValidationError("key '" + std::string(key) + "' needs 1 or n=" +
                            std::to_string(e.n) + " values");
  }
  const std::size_t axes = static_cast<std::size_t>(e.n);
  for (std::size_t i = 0; i < axes; ++i) {
    const double lo = e.lo[e.lo.size() == 1 ? 0 : i];
    const double hi = e.hi[e.hi.size() == 1 ? 0 : i];
    if (!(lo < hi))
      throw ValidationError("key 'lo' must be strictly below 'hi'");
  }
  return spec;
}

std::string surface_spec_text(const SurfaceSpec& spec) {
  std::string out;
  if (spec.is_family) {
    const FamilySpec& f = spec.family;
    out += std::string("family=") + family_name(f.family) + "\n";
    out += "n=" + std::to_string(f.n) + "\n";
    out += "nu=" + fmt17(f.nu) + "\n";
    switch (f.family) {
      case Family::clifford_product:
        out += "k=" + std::to_string(f.k) + "\n";
        out += "r=" + fmt17(f.r) + "\n";
        break;
      case Family::geodesic_sphere_S:
      case Family::geodesic_sphere_H:
        out += "rho=" + fmt17(f.rho) + "\n";
        break;
      case Family::equidistant:
        out += "t=" + fmt17(f.t) + "\n";
        break;
      case Family::graph_generic:
        out += "amplitude=" + fmt17(f.amplitude) + "\n";
        out += "frequency=" + fmt17(f.frequency) + "\n";
        break;
      case Family::horosphere:
      case Family::totally_geodesic:
        break;
    }
    return out;
  }
  const ExprChartSpec& e = spec.expr;
  out += "n=" + std::to_string(e.n) + "\n";
  out += "nu=" + fmt17(e.nu) + "\n";
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += fmt17(v[i]);
    }
    return s;
  };
  out += "lo=" + join(e.lo) + "\n";
  out += "hi=" + join(e.hi) + "\n";
  out += "expr:\n";
  for (std::size_t i = 0; i < e.components.size(); ++i)
    out += "f" + std::to_string(i + 1) + "=" + e.components[i].text() + "\n";
  return out;
}

BuiltChart build_surface(const SurfaceSpec& spec, bool smoke) {
  if (spec.is_family) return build(spec.family, smoke);

  const ExprChartSpec& e = spec.expr;
  if (e.n < (smoke ? 2 : 3))
    throw ValidationError(smoke
                              ? "n must be at least 2; got " +
                                    std::to_string(e.n)
                              : "n must be at least 3; got " +
                                    std::to_string(e.n));
  Box box;
  const std::size_t axes = static_cast<std::size_t>(e.n);
  for (std::size_t i = 0; i < axes; ++i) {
    box.lo.push_back(e.lo[e.lo.size() == 1 ? 0 : i]);
    box.hi.push_back(e.hi[e.hi.size() == 1 ? 0 : i]);
  }
  auto components = std::make_shared<std::vector<Expr>>(e.components);
  auto eval = [components](const Vec& u) {
    Vec out(components->size());
    for (std::size_t i = 0; i < components->size(); ++i) {
      out[i] = (*components)[i].eval(u);
      if (!std::isfinite(out[i]))
        throw InvalidChartError("expression f" + std::to_string(i + 1) +
                                " produced a non-finite value");
    }
    return out;
  };
  ImmersionChart chart(e.n, AmbientModel::make(e.nu, e.n), std::move(box),
                       std::move(eval),
                       "expr(n=" + std::to_string(e.n) + ",nu=" +
                           fmt17(e.nu) + ")");
  ExpectedOutcome expected;
  expected.note = e.n < 3
                      ? "below the classification dimension; expectation "
                        "withheld"
                      : "user expression; no closed-form expectation";
  return {std::move(chart), std::move(expected)};
}

}  // namespace holosurf
