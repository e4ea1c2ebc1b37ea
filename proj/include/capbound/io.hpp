// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "capbound/channel.hpp"
#include "capbound/symmetry.hpp"

namespace capbound::io {

using nlohmann::json;

// Matrix literal: nested arrays of [re, im] pairs, row-major.
inline json matrix_to_json(const cmat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline cmat matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "matrix literal: expected non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  cmat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    require(row.is_array() && row.size() == cols, "matrix literal: ragged rows");
    for (size_t c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      require(e.is_array() && e.size() == 2, "matrix literal: entry is not a [re, im] pair");
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

inline Channel named_channel(const std::string& name, double p) {
  if (name == "amplitude_damping") return amplitude_damping(p);
  if (name == "depolarizing_qubit") return depolarizing_qubit(p);
  if (name == "dephasing_z") return dephasing_z(p);
  if (name == "mix_ad_depol") return mix_ad_depol(p);
  if (name == "ad_after_dephasing") return ad_after_dephasing(p);
  if (name == "identity") return identity_channel(2);
  throw std::invalid_argument("unknown named channel '" + name + "'");
}

inline bool named_channel_exists(const std::string& name) {
  for (const char* n : {"amplitude_damping", "depolarizing_qubit", "dephasing_z",
                        "mix_ad_depol", "ad_after_dephasing", "identity"})
    if (name == n) return true;
  return false;
}

// Channel-spec JSON: either {"named": ..., "p": ...} or
// {"dim_in": ..., "dim_out": ..., "kraus": [matrix literals]}.
inline Channel channel_from_json(const json& j) {
  if (j.contains("named"))
    return named_channel(j.at("named").get<std::string>(),
                         j.value("p", 0.0));
  require(j.contains("dim_in") && j.contains("dim_out") && j.contains("kraus"),
          "channel spec: need dim_in/dim_out/kraus or named/p");
  int din = j.at("dim_in").get<int>();
  int dout = j.at("dim_out").get<int>();
  std::vector<cmat> ks;
  for (const auto& k : j.at("kraus")) ks.push_back(matrix_from_json(k));
  return Channel(din, dout, std::move(ks));
}

inline json channel_to_json(const Channel& ch) {
  json j;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  json ks = json::array();
  for (const auto& k : ch.kraus) ks.push_back(matrix_to_json(k));
  j["kraus"] = std::move(ks);
  return j;
}

inline Channel load_channel(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open channel file '" + path + "'");
  json j;
  in >> j;
  return channel_from_json(j);
}

// Group representation file: {"name": ..., "elements": [{"u": m, "v": m}, ...]}
inline GroupRep group_rep_from_json(const json& j) {
  std::vector<std::pair<cmat, cmat>> elems;
  for (const auto& e : j.at("elements"))
    elems.emplace_back(matrix_from_json(e.at("u")), matrix_from_json(e.at("v")));
  return GroupRep(std::move(elems), j.value("name", "custom"));
}

inline json group_rep_to_json(const GroupRep& g) {
  json j;
  j["name"] = g.name;
  json elems = json::array();
  for (const auto& [u, v] : g.elements)
    elems.push_back(json{{"u", matrix_to_json(u)}, {"v", matrix_to_json(v)}});
  j["elements"] = std::move(elems);
  return j;
}

inline GroupRep load_group_rep(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open group rep file '" + path + "'");
  json j;
  in >> j;
  return group_rep_from_json(j);
}

// 12 significant digits, the CSV contract
inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
      os << '\n';
    }
    return os.str();
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open output file '" + path + "'");
    out << to_string();
  }

  int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("csv: no column '" + name + "'");
  }
};

}  // namespace capbound::io
