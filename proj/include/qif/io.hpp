#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qif/bounds.hpp"
#include "qif/channel.hpp"
#include "qif/crowds.hpp"
#include "qif/dining.hpp"
#include "qif/measures.hpp"
#include "qif/refinement.hpp"

namespace qif {

using json = nlohmann::json;

/// Scalar analysis results print with 12 significant digits. Probability
/// matrices serialize at full precision so channels round-trip exactly.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// The same rounding applied to scalars embedded in JSON reports.
inline double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

// ---- labels ----------------------------------------------------------
// JSON encoding: atoms are strings, composites the nested arrays
// ["pair", a, b] and ["tag", a, 1|2].

inline json label_to_json(const Label& l) {
  switch (l.kind()) {
    case Label::Kind::atom: return l.text();
    case Label::Kind::pair: return json::array({"pair", label_to_json(l.left()), label_to_json(l.right())});
    case Label::Kind::tag: return json::array({"tag", label_to_json(l.inner()), l.branch()});
  }
  return nullptr;
}

inline Label label_from_json(const json& j) {
  if (j.is_string()) return Label::atom(j.get<std::string>());
  if (j.is_array() && j.size() == 3 && j[0].is_string()) {
    if (j[0] == "pair") return Label::pair(label_from_json(j[1]), label_from_json(j[2]));
    if (j[0] == "tag") return Label::tag(label_from_json(j[1]), j[2].get<int>());
  }
  raise(errc::parse_error, "bad label encoding: " + j.dump());
}

inline json labels_to_json(const std::vector<Label>& ls) {
  json arr = json::array();
  for (const Label& l : ls) arr.push_back(label_to_json(l));
  return arr;
}

inline std::vector<Label> labels_from_json(const json& j) {
  if (!j.is_array()) raise(errc::parse_error, "label list must be an array");
  std::vector<Label> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(label_from_json(e));
  return out;
}

// ---- channels, priors, gain functions --------------------------------

inline json channel_to_json(const Channel& c) {
  json rows = json::array();
  for (size_t x = 0; x < c.n_inputs(); ++x) {
    json row = json::array();
    for (size_t y = 0; y < c.n_outputs(); ++y) row.push_back(c.at(x, y));
    rows.push_back(std::move(row));
  }
  return json{{"inputs", labels_to_json(c.inputs())},
              {"outputs", labels_to_json(c.outputs())},
              {"rows", std::move(rows)}};
}

inline Channel channel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("inputs") || !j.contains("outputs") || !j.contains("rows"))
    raise(errc::parse_error, "channel JSON needs inputs, outputs and rows");
  auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return Channel::from_rows(labels_from_json(j.at("inputs")), labels_from_json(j.at("outputs")), rows);
}

inline json prior_to_json(const Prior& p) {
  return json{{"support", labels_to_json(p.support())}, {"probs", p.probs()}};
}

inline Prior prior_from_json(const json& j) {
  if (!j.is_object() || !j.contains("support") || !j.contains("probs"))
    raise(errc::parse_error, "prior JSON needs support and probs");
  return Prior(labels_from_json(j.at("support")), j.at("probs").get<std::vector<double>>());
}

inline json gain_to_json(const GainFunction& g) {
  json rows = json::array();
  for (size_t w = 0; w < g.n_actions(); ++w) {
    json row = json::array();
    for (size_t x = 0; x < g.inputs().size(); ++x) row.push_back(g.at(w, x));
    rows.push_back(std::move(row));
  }
  return json{{"actions", labels_to_json(g.actions())},
              {"inputs", labels_to_json(g.inputs())},
              {"rows", std::move(rows)}};
}

inline GainFunction gain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("actions") || !j.contains("inputs") || !j.contains("rows"))
    raise(errc::parse_error, "gain JSON needs actions, inputs and rows");
  return GainFunction::from_rows(labels_from_json(j.at("actions")), labels_from_json(j.at("inputs")),
                                 j.at("rows").get<std::vector<std::vector<double>>>());
}

// ---- CSV --------------------------------------------------------------
// Channel CSV: header row is the output labels with cell 0 blank, then one
// row per input: its label followed by the probabilities.

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string channel_to_csv(const Channel& c) {
  std::ostringstream out;
  for (size_t y = 0; y < c.n_outputs(); ++y) out << ',' << detail::csv_quote(c.outputs()[y].str());
  out << '\n';
  for (size_t x = 0; x < c.n_inputs(); ++x) {
    out << detail::csv_quote(c.inputs()[x].str());
    for (size_t y = 0; y < c.n_outputs(); ++y) out << ',' << detail::full_precision(c.at(x, y));
    out << '\n';
  }
  return out.str();
}

inline Channel channel_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) raise(errc::parse_error, "empty channel CSV");
  auto header = detail::csv_split(line);
  if (header.size() < 2 || !header[0].empty())
    raise(errc::parse_error, "channel CSV header must start with a blank cell");
  std::vector<Label> outputs;
  for (size_t j = 1; j < header.size(); ++j) outputs.push_back(Label::parse(header[j]));
  std::vector<Label> inputs;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = detail::csv_split(line);
    if (cells.size() != header.size())
      raise(errc::parse_error, "channel CSV row has " + std::to_string(cells.size()) + " cells");
    inputs.push_back(Label::parse(cells[0]));
    std::vector<double> row;
    for (size_t j = 1; j < cells.size(); ++j) row.push_back(std::stod(cells[j]));
    rows.push_back(std::move(row));
  }
  return Channel::from_rows(std::move(inputs), std::move(outputs), rows);
}

/// Plain numeric CSV (no labels), e.g. a Crowds transition matrix.
inline Matrix matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = detail::csv_split(line);
    std::vector<double> row;
    for (const auto& cell : cells)
      if (!cell.empty()) row.push_back(std::stod(cell));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(errc::parse_error, "empty matrix CSV");
  Matrix m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols) raise(errc::parse_error, "ragged matrix CSV");
    for (size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

// ---- reports ----------------------------------------------------------

inline json leakage_to_json(const LeakageReport& r) {
  json j{{"prior", round12(r.prior_vulnerability)},
         {"posterior", round12(r.posterior_vulnerability)},
         {"additive", round12(r.additive)}};
  j["multiplicative"] = r.multiplicative ? json(round12(*r.multiplicative)) : json(nullptr);
  return j;
}

inline std::string leakage_to_csv(const LeakageReport& r) {
  std::string mult = r.multiplicative ? fmt12(*r.multiplicative) : std::string(errc_name(errc::zero_prior_vulnerability));
  return "prior,posterior,mult,add\n" + fmt12(r.prior_vulnerability) + "," +
         fmt12(r.posterior_vulnerability) + "," + mult + "," + fmt12(r.additive) + "\n";
}

inline json interval_to_json(const BoundInterval& b) {
  json j{{"lower", round12(b.lower)}, {"upper", round12(b.upper)}};
  j["exact"] = b.exact ? json(round12(*b.exact)) : json(nullptr);
  return j;
}

inline std::string interval_to_csv(const BoundInterval& b) {
  return "lower,upper,exact\n" + fmt12(b.lower) + "," + fmt12(b.upper) + "," +
         (b.exact ? fmt12(*b.exact) : "") + "\n";
}

inline json verdict_to_json(const RefinementVerdict& v) {
  json j{{"refined", v.refined}};
  j["witness"] = v.witness ? channel_to_json(*v.witness) : json(nullptr);
  if (v.witness) j["residual"] = v.residual;
  j["certificate"] = v.certificate
                         ? json{{"prior", prior_to_json(v.certificate->first)},
                                {"gain", gain_to_json(v.certificate->second)}}
                         : json(nullptr);
  return j;
}

inline json crowds_bounds_to_json(const CrowdsBounds& b) {
  json t = json::array();
  for (double v : b.t) t.push_back(round12(v));
  return json{{"m", b.m},
              {"t", std::move(t)},
              {"lower", round12(b.lower)},
              {"upper", round12(b.upper)},
              {"gap_bound", round12(b.gap_bound)}};
}

inline std::string crowds_bounds_to_csv(const CrowdsBounds& b) {
  return "m,t2m,lower,upper,gap_bound\n" + std::to_string(b.m) + "," + fmt12(b.t[2 * b.m]) + "," +
         fmt12(b.lower) + "," + fmt12(b.upper) + "," + fmt12(b.gap_bound) + "\n";
}

inline json sweep_to_json(const std::vector<CapacityPoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts)
    arr.push_back(json{{"topology", topology_name(p.topology)},
                       {"n", p.n},
                       {"bias", round12(p.bias)},
                       {"mult_capacity", round12(p.mult_capacity)},
                       {"add_capacity", round12(p.add_capacity)}});
  return arr;
}

inline std::string sweep_to_csv(const std::vector<CapacityPoint>& pts) {
  std::string out = "topology,n,bias,mult_capacity,add_capacity\n";
  for (const auto& p : pts)
    out += std::string(topology_name(p.topology)) + "," + std::to_string(p.n) + "," + fmt12(p.bias) +
           "," + fmt12(p.mult_capacity) + "," + fmt12(p.add_capacity) + "\n";
  return out;
}

// ---- files ------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::parse_error, "cannot write " + path);
  out << content;
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Loads a channel from .json or .csv by extension.
inline Channel load_channel(const std::string& path) {
  std::string text = read_file(path);
  if (has_suffix(path, ".csv")) return channel_from_csv(text);
  return channel_from_json(json::parse(text));
}

/// "uniform" (over the given labels) or a prior JSON file.
inline Prior load_prior(const std::string& source, const std::vector<Label>& domain) {
  if (source == "uniform") return Prior::uniform(domain);
  return prior_from_json(json::parse(read_file(source)));
}

/// "id" (identity gain over the given labels) or a gain JSON file.
inline GainFunction load_gain(const std::string& source, const std::vector<Label>& domain) {
  if (source == "id") return identity_gain(domain);
  return gain_from_json(json::parse(read_file(source)));
}

}  // namespace qif
