#include "holosurf/report.hpp"

#include <cmath>
#include <cstdio>

namespace holosurf {

namespace {

void write_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write_value(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, item] : v.items()) {
        out += inner;
        write_string(key, out);
        out += ": ";
        write_value(item, indent + 1, out);
        if (++i < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += inner;
        write_value(v[i], indent + 1, out);
        if (i + 1 < v.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::string:
      write_string(v.get<std::string>(), out);
      return;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%lld",
                    static_cast<long long>(v.get<std::int64_t>()));
      out += buf;
      return;
    }
    case Json::value_t::number_unsigned: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%llu",
                    static_cast<unsigned long long>(v.get<std::uint64_t>()));
      out += buf;
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d))
        throw ContractViolation("report fields must be finite");
      char buf[40];
      // Negative zero would reparse as the integer 0 and change bytes.
      std::snprintf(buf, sizeof buf, "%.17g", d == 0.0 ? 0.0 : d);
      out += buf;
      return;
    }
    case Json::value_t::null:
      out += "null";
      return;
    default:
      throw ContractViolation("unsupported JSON value type in report");
  }
}

void describe_verdict(const Json& v, std::string& out) {
  out += v.value("kind", std::string("?"));
  if (v.contains("k") && v["k"].get<int>() > 0)
    out += " (k=" + std::to_string(v["k"].get<int>()) + ")";
}

}  // namespace

std::string canonical_json(const Json& value) {
  std::string out;
  write_value(value, 0, out);
  return out;
}

std::string render_text(const Json& report) {
  std::string out;
  char buf[128];
  out += "tool version " +
         report["aggregate"].value("tool_version", std::string("?")) + "\n";
  out += "surface:\n";
  {
    const std::string spec =
        report["config"]["surface_spec"].get<std::string>();
    std::size_t start = 0;
    while (start < spec.size()) {
      std::size_t stop = spec.find('\n', start);
      if (stop == std::string::npos) stop = spec.size();
      out += "  " + spec.substr(start, stop - start) + "\n";
      start = stop + 1;
    }
  }
  const Json& points = report["points"];
  for (const Json& p : points) {
    out += "point [";
    const Json& u = p["u"];
    for (std::size_t i = 0; i < u.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "",
                    u[i].get<double>());
      out += buf;
    }
    out += "]\n";
    if (p.contains("clusters")) {
      out += "  clusters:";
      for (const Json& c : p["clusters"]) {
        std::snprintf(buf, sizeof buf, " %.9g (x%d)", c["value"].get<double>(),
                      c["multiplicity"].get<int>());
        out += buf;
      }
      out += "\n";
      std::snprintf(buf, sizeof buf, "  algebra dim %d, verdict ",
                    p["algebra_dim"].get<int>());
      out += buf;
      describe_verdict(p["verdict"], out);
      out += "\n";
    }
    if (p.contains("residuals")) {
      for (const auto& [name, val] : p["residuals"].items()) {
        std::snprintf(buf, sizeof buf, "  %-18s %.6g (bound %.6g)\n",
                      name.c_str(), val.get<double>(),
                      p["bounds"][name].get<double>());
        out += buf;
      }
    }
  }
  const Json& agg = report["aggregate"];
  if (agg.contains("consensus")) {
    out += "consensus: ";
    describe_verdict(agg["consensus"], out);
    out += "\n";
    const std::string diag = agg["consensus"].value("diagnostic", "");
    if (!diag.empty()) out += "  " + diag + "\n";
  }
  if (agg.contains("split")) {
    const Json& s = agg["split"];
    std::snprintf(buf, sizeof buf,
                  "split case %s: Lambda %.9g, Theta %.9g, k %d\n",
                  s["case"].get<std::string>().c_str(),
                  s["Lambda"].get<double>(), s["Theta"].get<double>(),
                  s["k"].get<int>());
    out += buf;
    std::snprintf(buf, sizeof buf, "  factor curvatures %.9g, %.9g\n",
                  s["factor_curvatures"][0].get<double>(),
                  s["factor_curvatures"][1].get<double>());
    out += buf;
  }
  if (agg.contains("flatness")) {
    out += std::string("flatness: ") +
           (agg["flatness"]["flat"].get<bool>() ? "flat" : "not flat") + "\n";
    const std::string diag = agg["flatness"].value("diagnostic", "");
    if (!diag.empty()) out += "  " + diag + "\n";
  }
  if (agg.contains("residual_maxima") && !agg["residual_maxima"].empty()) {
    out += "residual maxima:\n";
    for (const auto& [name, val] : agg["residual_maxima"].items()) {
      std::snprintf(buf, sizeof buf, "  %-18s %.6g\n", name.c_str(),
                    val.get<double>());
      out += buf;
    }
  }
  if (agg.contains("within_tolerances"))
    out += std::string("within tolerances: ") +
           (agg["within_tolerances"].get<bool>() ? "yes" : "no") + "\n";
  return out;
}

}  // namespace holosurf
