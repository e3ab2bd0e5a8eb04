#pragma once

// File formats: JSON instances and application specs, one-column advice CSV,
// trace and sweep CSVs, and a small SVG line chart.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "olpack/applications.hpp"
#include "olpack/core.hpp"
#include "olpack/harness.hpp"
#include "olpack/offline.hpp"
#include "olpack/switching.hpp"

namespace olpack::io {

using nlohmann::json;

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

inline ConcavePiece piece_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("piece must be an object with a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear") return Linear{number(j, "weight")};
  if (kind == "log") return Log{number(j, "scale"), number(j, "stretch")};
  if (kind == "power") return Power{number(j, "scale"), number(j, "exponent")};
  if (kind == "capped") return CappedLinear{number(j, "weight"), number(j, "cap")};
  throw ConfigError("unknown piece kind '" + kind + "'");
}

inline json piece_to_json(const ConcavePiece& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Linear>) return {{"kind", "linear"}, {"weight", v.weight}};
        else if constexpr (std::is_same_v<T, Log>) return {{"kind", "log"}, {"scale", v.scale}, {"stretch", v.stretch}};
        else if constexpr (std::is_same_v<T, Power>)
          return {{"kind", "power"}, {"scale", v.scale}, {"exponent", v.exponent}};
        else return {{"kind", "capped"}, {"weight", v.weight}, {"cap", v.cap}};
      },
      p.variant());
}

/// Rows are 1-indexed in files.
inline PackingInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("instance must be a JSON object");
  if (!j.contains("m") || !j.at("m").is_number_integer() || j.at("m").get<long long>() < 1)
    throw ConfigError("'m' must be a positive integer");
  PackingInstance inst;
  inst.m = j.at("m").get<std::size_t>();
  if (!j.contains("b") || !j.at("b").is_array()) throw ConfigError("'b' must be an array");
  for (const auto& v : j.at("b")) {
    if (!v.is_number()) throw ConfigError("'b' entries must be numbers");
    inst.b.push_back(v.get<double>());
  }
  if (!j.contains("columns") || !j.at("columns").is_array()) throw ConfigError("'columns' must be an array");
  for (const auto& c : j.at("columns")) {
    Column col;
    if (!c.contains("coeffs") || !c.at("coeffs").is_array()) throw ConfigError("column needs a 'coeffs' array");
    for (const auto& e : c.at("coeffs")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
        throw ConfigError("coeffs entries must be [row, value] pairs");
      const auto row = e[0].get<long long>();
      if (row < 1) throw ConfigError("coeff rows are 1-indexed");
      col.coeffs.push_back({static_cast<std::size_t>(row - 1), e[1].get<double>()});
    }
    if (!c.contains("piece")) throw ConfigError("column needs a 'piece'");
    col.piece = piece_from_json(c.at("piece"));
    inst.columns.push_back(std::move(col));
  }
  return inst;
}

inline json instance_to_json(const PackingInstance& inst) {
  json cols = json::array();
  for (const auto& c : inst.columns) {
    json coeffs = json::array();
    for (const auto& e : c.coeffs) coeffs.push_back({e.row + 1, e.value});
    cols.push_back({{"coeffs", coeffs}, {"piece", piece_to_json(c.piece)}});
  }
  return {{"m", inst.m}, {"b", inst.b}, {"columns", cols}};
}

inline KnapsackSpec knapsack_from_json(const json& j) {
  KnapsackSpec spec;
  spec.capacity = number(j, "C");
  if (j.contains("box")) spec.include_box = j.at("box").get<bool>();
  for (const auto& it : j.at("items")) spec.items.push_back({number(it, "value"), number(it, "weight")});
  return spec;
}

inline ThroughputSpec throughput_from_json(const json& j) {
  ThroughputSpec spec;
  if (j.contains("directed")) spec.directed = j.at("directed").get<bool>();
  for (const auto& e : j.at("edges"))
    spec.edges.push_back({e.at("id").get<std::string>(), e.at("from").get<std::string>(),
                          e.at("to").get<std::string>(), number(e, "capacity")});
  for (const auto& r : j.at("requests")) {
    ThroughputRequest req;
    req.source = r.at("source").get<std::string>();
    req.target = r.at("target").get<std::string>();
    req.paths = r.at("paths").get<std::vector<std::vector<std::string>>>();
    spec.requests.push_back(std::move(req));
  }
  return spec;
}

inline OoicSpec ooic_from_json(const json& j) {
  OoicSpec spec;
  spec.inventory = number(j, "delta");
  if (j.contains("min_slope")) spec.min_slope = number(j, "min_slope");
  if (j.contains("max_slope")) spec.max_slope = number(j, "max_slope");
  for (const auto& p : j.at("pieces")) spec.revenue.push_back(piece_from_json(p));
  return spec;
}

inline std::string describe(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) out += "\n  " + v.code + ": " + v.message;
  return out;
}

/// Instance or application spec (selected by a top-level "type"), validated.
inline PackingInstance problem_from_json(const json& j) {
  PackingInstance inst;
  try {
    if (j.is_object() && j.contains("type")) {
      const auto type = j.at("type").get<std::string>();
      if (type == "knapsack") inst = build_knapsack(knapsack_from_json(j));
      else if (type == "throughput") inst = build_throughput(throughput_from_json(j));
      else if (type == "ooic") inst = build_ooic(ooic_from_json(j));
      else if (type == "instance") inst = instance_from_json(j);
      else throw ConfigError("unknown problem type '" + type + "'");
    } else {
      inst = instance_from_json(j);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed problem file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (auto vs = validate_instance(inst); !vs.empty()) throw ConfigError("invalid instance:" + describe(vs));
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

inline PackingInstance load_problem(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return problem_from_json(j);
}

/// One value per line; a non-numeric first line is treated as a header.
inline std::vector<double> advice_from_csv(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0') {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("advice CSV: bad value '" + line + "'");
    }
    first = false;
    out.push_back(v);
  }
  return out;
}

inline std::string advice_to_csv(std::span<const double> advice) {
  std::string out = "advice\n";
  for (double v : advice) out += fmt_double(v) + "\n";
  return out;
}

inline std::string trace_to_csv(const SolutionTrace& trace) {
  std::string out = "j,x_adv,x_sub,x_comb,used,beta,max_load_ratio\n";
  for (const auto& r : trace.rounds)
    out += std::to_string(r.j) + "," + fmt_double(r.advice) + "," + fmt_double(r.sub) + "," +
           fmt_double(r.combined) + "," + (r.used ? "1" : "0") + "," + fmt_double(r.beta) + "," +
           fmt_double(r.max_load_ratio) + "\n";
  return out;
}

/// key_name is "p" or "t".
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows, const std::string& key_name) {
  std::string out = key_name + ",arm,mean_ratio,stderr,trials\n";
  for (const auto& r : rows)
    out += fmt_double(r.key) + "," + r.arm + "," + fmt_double(r.mean) + "," + fmt_double(r.stderr_) + "," +
           std::to_string(r.trials) + "\n";
  return out;
}

struct SweepTable {
  std::string key_name;
  std::vector<SweepRow> rows;
};

inline SweepTable sweep_from_csv(const std::string& text) {
  SweepTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("sweep CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.substr(comma) != ",arm,mean_ratio,stderr,trials")
    throw ConfigError("sweep CSV header must be '<key>,arm,mean_ratio,stderr,trials'");
  table.key_name = line.substr(0, comma);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw ConfigError("sweep CSV: expected 5 fields in '" + line + "'");
    try {
      table.rows.push_back({std::stod(f[0]), f[1], std::stod(f[2]), std::stod(f[3]),
                            static_cast<std::size_t>(std::stoull(f[4]))});
    } catch (const std::exception&) {
      throw ConfigError("sweep CSV: bad number in '" + line + "'");
    }
  }
  return table;
}

inline std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Line chart of mean_ratio against the key, one polyline per arm.
inline std::string plot_svg(const SweepTable& table, const std::string& title) {
  const double W = 640, H = 420, L = 60, R = 170, T = 40, B = 50;
  std::vector<std::string> arms;
  for (const auto& r : table.rows)
    if (std::find(arms.begin(), arms.end(), r.arm) == arms.end()) arms.push_back(r.arm);

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!table.rows.empty()) {
    xmin = xmax = table.rows[0].key;
    ymax = 0;
    for (const auto& r : table.rows) {
      xmin = std::min(xmin, r.key);
      xmax = std::max(xmax, r.key);
      ymax = std::max(ymax, r.mean);
    }
    if (xmax == xmin) xmax = xmin + 1;
    ymax = std::max(1.0, ymax);
  }
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
    s << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"11\">" << fmt_double(std::round(xv * 100) / 100) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\""
      << " font-size=\"11\">" << fmt_double(std::round(yv * 100) / 100) << "</text>\n";
  }
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
    << " font-size=\"12\">" << xml_escape(table.key_name) << "</text>\n";
  s << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">mean ratio</text>\n";

  for (std::size_t a = 0; a < arms.size(); ++a) {
    const char* color = colors[a % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& r : table.rows) {
      if (r.arm != arms[a]) continue;
      s << (first ? "" : " ") << px(r.key) << "," << py(r.mean);
      first = false;
    }
    s << "\"/>\n";
    const double ly = T + 10 + 20.0 * static_cast<double>(a);
    s << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(arms[a]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

inline json offline_to_json(const OfflineResult& res) {
  json j = {{"status", to_string(res.status)}, {"opt_value", res.opt_value}, {"x_star", res.x_star},
            {"iterations", res.iterations}};
  if (res.status == SolveStatus::approximate || res.status == SolveStatus::not_converged) {
    j["tolerance"] = res.tolerance;
    j["gap"] = res.gap;
  }
  return j;
}

}  // namespace olpack::io
