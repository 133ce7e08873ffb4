#pragma once

#include "olg/geometry.hpp"
#include "olg/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace olg {

using ActionProfile = std::vector<int>;  // one action index per player
using PayoffVector = std::vector<Rat>;   // one exact payoff per player

/// Finite n-player stage game in normal form, payoffs in exact rationals.
/// The payoff tensor is stored flat in mixed-radix order, player 1 outermost.
struct StageGame {
  int num_players = 0;
  std::vector<std::vector<std::string>> actions;  // labels, per player
  std::vector<PayoffVector> payoffs;              // flat profile index -> u(a)

  int profile_count() const {
    int c = 1;
    for (const auto& a : actions) c *= static_cast<int>(a.size());
    return c;
  }

  int profile_index(const ActionProfile& a) const {
    if (static_cast<int>(a.size()) != num_players)
      throw ValidationError("action profile has wrong length");
    int idx = 0;
    for (int i = 0; i < num_players; ++i) {
      int radix = static_cast<int>(actions[i].size());
      if (a[i] < 0 || a[i] >= radix)
        throw ValidationError("action index out of bounds for player " + std::to_string(i + 1));
      idx = idx * radix + a[i];
    }
    return idx;
  }

  ActionProfile profile_from_index(int idx) const {
    ActionProfile a(num_players);
    for (int i = num_players - 1; i >= 0; --i) {
      int radix = static_cast<int>(actions[i].size());
      a[i] = idx % radix;
      idx /= radix;
    }
    return a;
  }

  const PayoffVector& payoff(const ActionProfile& a) const {
    return payoffs[profile_index(a)];
  }

  std::string profile_label(const ActionProfile& a, const std::string& sep = "") const {
    std::string out;
    for (int i = 0; i < num_players; ++i) {
      if (i > 0) out += sep;
      out += actions[i][a[i]];
    }
    return out;
  }

  /// Looks up a profile by its per-player action labels.
  ActionProfile profile_by_labels(const std::vector<std::string>& labels) const {
    if (static_cast<int>(labels.size()) != num_players)
      throw ValidationError("label list has wrong length");
    ActionProfile a(num_players);
    for (int i = 0; i < num_players; ++i) {
      const auto& acts = actions[i];
      auto it = std::find(acts.begin(), acts.end(), labels[i]);
      if (it == acts.end())
        throw ValidationError("unknown action label '" + labels[i] + "' for player " +
                              std::to_string(i + 1));
      a[i] = static_cast<int>(it - acts.begin());
    }
    return a;
  }

  void validate() const {
    if (num_players < 2) throw ValidationError("a game needs at least 2 players");
    if (static_cast<int>(actions.size()) != num_players)
      throw ValidationError("action-set list length must equal the player count");
    for (int i = 0; i < num_players; ++i) {
      if (actions[i].empty())
        throw ValidationError("player " + std::to_string(i + 1) + " has no actions");
      std::set<std::string> seen(actions[i].begin(), actions[i].end());
      if (seen.size() != actions[i].size())
        throw ValidationError("duplicate action label for player " + std::to_string(i + 1));
    }
    if (static_cast<int>(payoffs.size()) != profile_count())
      throw ValidationError("payoff tensor shape mismatch");
    for (const auto& u : payoffs)
      if (static_cast<int>(u.size()) != num_players)
        throw ValidationError("payoff vector dimension mismatch");
  }
};

namespace detail {

inline Rat rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(BigInt(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Rat(BigInt(j.get<std::uint64_t>()));
  if (j.is_number_float()) return rat_from_double(j.get<double>());
  throw ParseError("expected a rational (string or number)");
}

inline void flatten_payoffs(const StageGame& g, const nlohmann::json& node, int player,
                            std::vector<PayoffVector>& out) {
  if (player == g.num_players) {
    if (!node.is_array() || static_cast<int>(node.size()) != g.num_players)
      throw ParseError("payoff leaf must be an array of " + std::to_string(g.num_players) +
                       " rationals");
    PayoffVector u;
    u.reserve(g.num_players);
    for (const auto& x : node) u.push_back(rational_from_json(x));
    out.push_back(std::move(u));
    return;
  }
  const std::size_t want = g.actions[player].size();
  if (!node.is_array() || node.size() != want)
    throw ParseError("payoff tensor shape mismatch at depth " + std::to_string(player + 1));
  for (const auto& child : node) flatten_payoffs(g, child, player + 1, out);
}

}  // namespace detail

/// Parses the JSON game format:
/// {"players": n, "actions": [["C","D"],...], "payoffs": nested depth-n array}.
inline StageGame parse_game(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed game document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("players") || !doc.contains("actions") ||
      !doc.contains("payoffs"))
    throw ParseError("game document needs 'players', 'actions' and 'payoffs'");

  StageGame g;
  if (!doc["players"].is_number_integer())
    throw ParseError("'players' must be an integer");
  g.num_players = doc["players"].get<int>();
  if (g.num_players < 2) throw ValidationError("a game needs at least 2 players");
  if (!doc["actions"].is_array())
    throw ParseError("'actions' must be an array of label lists");
  for (const auto& list : doc["actions"]) {
    if (!list.is_array()) throw ParseError("each action set must be an array of labels");
    std::vector<std::string> labels;
    for (const auto& l : list) {
      if (!l.is_string()) throw ParseError("action labels must be strings");
      labels.push_back(l.get<std::string>());
    }
    g.actions.push_back(std::move(labels));
  }
  if (static_cast<int>(g.actions.size()) != g.num_players)
    throw ValidationError("action-set list length must equal the player count");
  for (const auto& a : g.actions)
    if (a.empty()) throw ValidationError("empty action set");
  detail::flatten_payoffs(g, doc["payoffs"], 0, g.payoffs);
  g.validate();
  return g;
}

inline nlohmann::json serialize_game(const StageGame& g) {
  nlohmann::json doc;
  doc["players"] = g.num_players;
  doc["actions"] = g.actions;
  // rebuild the nested tensor from the flat storage
  int cursor = 0;
  std::function<nlohmann::json(int)> rec = [&](int player) {
    nlohmann::json arr = nlohmann::json::array();
    if (player == g.num_players) {
      for (const Rat& x : g.payoffs[cursor]) arr.push_back(rat_to_string(x));
      ++cursor;
      return arr;
    }
    for (std::size_t k = 0; k < g.actions[player].size(); ++k) arr.push_back(rec(player + 1));
    return arr;
  };
  doc["payoffs"] = rec(0);
  return doc;
}

/// V = co{u(a) : a in A}.
inline Polytope one_shot_hull(const StageGame& g) {
  return Polytope::from_points(g.num_players, {g.payoffs.begin(), g.payoffs.end()});
}

/// F* = prod_i [min_a u_i(a), max_a u_i(a)], as its corner vertices.
inline Polytope payoff_cube(const StageGame& g) {
  const int n = g.num_players;
  std::vector<Rat> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = hi[i] = g.payoffs[0][i];
    for (const auto& u : g.payoffs) {
      lo[i] = std::min(lo[i], u[i]);
      hi[i] = std::max(hi[i], u[i]);
    }
  }
  std::vector<Point> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = (mask >> i & 1) ? hi[i] : lo[i];
    corners.push_back(std::move(p));
  }
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  Polytope poly;
  poly.dimension = n;
  poly.vertices = std::move(corners);  // cube corners are extreme by construction
  return poly;
}

/// True iff V and F* coincide as sets.
inline bool cube_coincides(const StageGame& g) {
  return hull_equal(one_shot_hull(g), payoff_cube(g));
}

}  // namespace olg
