// Copyright 2026 The MAE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Payoff table files.
//
// JSON:
//   {"players": K, "strategy_counts": [n1, ..., nK],
//    "payoffs": [P1, ..., PK], "m_max": x}
// where Pk is a K-deep nested array indexed [s1][s2]...[sK].
//
// CSV (two-player only): one file per player. The first line names the
// columns (player 2's strategies); each following line holds one player 1
// strategy, optionally led by a non-numeric row label. Both files use the
// same orientation, rows = player 1.
//
// Floats are written with 17 significant digits, so save/load round-trips
// finite doubles bit-exactly.

#ifndef MAE_GAME_IO_HPP_
#define MAE_GAME_IO_HPP_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mae/errors.hpp"
#include "mae/game.hpp"

namespace mae {

inline std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace internal {

inline void WriteNested(std::ostringstream& out, const GameShape& shape,
                        const std::vector<double>& flat, int depth,
                        std::size_t offset, std::size_t stride) {
  const int n = shape.num_strategies(depth);
  const std::size_t inner = stride / n;
  out << "[";
  for (int i = 0; i < n; ++i) {
    if (i) out << ", ";
    if (depth + 1 == shape.num_players()) {
      out << FormatDouble(flat[offset + i]);
    } else {
      WriteNested(out, shape, flat, depth + 1, offset + i * inner, inner);
    }
  }
  out << "]";
}

inline void ReadNested(const nlohmann::json& node, const GameShape& shape,
                       int depth, std::vector<double>& flat) {
  if (!node.is_array() ||
      static_cast<int>(node.size()) != shape.num_strategies(depth)) {
    throw InputError("payoff array shape does not match strategy_counts");
  }
  for (const auto& child : node) {
    if (depth + 1 == shape.num_players()) {
      if (!child.is_number()) throw InputError("payoff entries must be numbers");
      flat.push_back(child.get<double>());
    } else {
      ReadNested(child, shape, depth + 1, flat);
    }
  }
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

inline std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

inline bool ParseNumber(const std::string& text, double* value) {
  if (text.empty()) return false;
  char* end = nullptr;
  *value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

inline std::vector<std::vector<double>> ReadCsvMatrix(const std::string& path,
                                                      std::vector<std::string>* header) {
  std::istringstream in(ReadFile(path));
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty CSV file");
  *header = SplitCsvLine(line);
  if (header->empty()) throw InputError(path + ": empty strategy list");
  std::vector<std::vector<double>> rows;
  // A fully numeric first line is data; strategies are then named by index.
  std::vector<double> first;
  for (const auto& f : *header) {
    double v;
    if (!ParseNumber(f, &v)) break;
    first.push_back(v);
  }
  if (first.size() == header->size()) {
    for (std::size_t i = 0; i < header->size(); ++i) (*header)[i] = std::to_string(i);
    rows.push_back(std::move(first));
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    double probe;
    if (fields.size() == header->size() + 1 && !ParseNumber(fields[0], &probe)) {
      fields.erase(fields.begin());
    }
    if (fields.size() != header->size()) {
      throw InputError(path + ": row width does not match header");
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      double v;
      if (!ParseNumber(f, &v)) throw InputError(path + ": malformed number '" + f + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": empty strategy list");
  return rows;
}

}  // namespace internal

inline std::string GameToJson(const PayoffTensor& game) {
  const GameShape& shape = game.shape();
  std::ostringstream out;
  out << "{\"players\": " << shape.num_players() << ", \"strategy_counts\": [";
  for (int k = 0; k < shape.num_players(); ++k) {
    out << (k ? ", " : "") << shape.num_strategies(k);
  }
  out << "], \"payoffs\": [";
  for (int k = 0; k < shape.num_players(); ++k) {
    if (k) out << ", ";
    internal::WriteNested(out, shape, game.player_payoffs(k), 0, 0,
                          shape.num_profiles());
  }
  out << "], \"m_max\": " << FormatDouble(game.m_max()) << "}\n";
  return out.str();
}

inline PayoffTensor GameFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed game JSON: ") + e.what());
  }
  try {
    const auto counts = doc.at("strategy_counts").get<std::vector<int>>();
    MAE_REQUIRE(!counts.empty(), "empty strategy list");
    const int players = doc.value("players", static_cast<int>(counts.size()));
    MAE_REQUIRE(players == static_cast<int>(counts.size()),
                "players does not match strategy_counts");
    GameShape shape(counts);
    const auto& payoffs = doc.at("payoffs");
    MAE_REQUIRE(payoffs.is_array() && static_cast<int>(payoffs.size()) == players,
                "need one payoff tensor per player");
    std::vector<std::vector<double>> flat(players);
    for (int k = 0; k < players; ++k) {
      internal::ReadNested(payoffs[k], shape, 0, flat[k]);
    }
    const double m_max = doc.value("m_max", 0.0);
    return PayoffTensor(shape, std::move(flat), m_max);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed game JSON: ") + e.what());
  }
}

inline PayoffTensor LoadGameJson(const std::string& path) {
  return GameFromJson(internal::ReadFile(path));
}

inline void SaveGameJson(const PayoffTensor& game, const std::string& path) {
  internal::WriteFile(path, GameToJson(game));
}

inline PayoffTensor LoadGameCsv(const std::string& player1_path,
                                const std::string& player2_path,
                                double m_max = 0.0) {
  std::vector<std::string> h1, h2;
  const auto m1 = internal::ReadCsvMatrix(player1_path, &h1);
  const auto m2 = internal::ReadCsvMatrix(player2_path, &h2);
  MAE_REQUIRE(m1.size() == m2.size() && h1.size() == h2.size(),
              "player CSV tables differ in shape");
  return PayoffTensor::TwoPlayer(m1, m2, m_max);
}

inline void SaveGameCsv(const PayoffTensor& game, const std::string& player1_path,
                        const std::string& player2_path) {
  MAE_REQUIRE(game.num_players() == 2, "CSV tables hold two-player games only");
  const GameShape& shape = game.shape();
  for (int k = 0; k < 2; ++k) {
    std::ostringstream out;
    for (int j = 0; j < shape.num_strategies(1); ++j) {
      out << (j ? "," : "") << "s" << j;
    }
    out << "\n";
    for (int i = 0; i < shape.num_strategies(0); ++i) {
      for (int j = 0; j < shape.num_strategies(1); ++j) {
        out << (j ? "," : "") << FormatDouble(game(k, shape.Index({i, j})));
      }
      out << "\n";
    }
    internal::WriteFile(k == 0 ? player1_path : player2_path, out.str());
  }
}

// Dispatches on the path: "a.json" loads JSON, "p1.csv,p2.csv" loads CSV.
inline PayoffTensor LoadTable(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma != std::string::npos) {
    return LoadGameCsv(spec.substr(0, comma), spec.substr(comma + 1));
  }
  return LoadGameJson(spec);
}

}  // namespace mae

#endif  // MAE_GAME_IO_HPP_
