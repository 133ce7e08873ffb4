// olg: feasible payoff sets of OLG repeated games from the command line.

#include "olg/analysis.hpp"
#include "olg/feasible.hpp"
#include "olg/game.hpp"
#include "olg/oracle.hpp"
#include "olg/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitParse = 3;
constexpr int kExitCap = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return buf.str();
}

// temp file + rename, so a crash never leaves a half-written output
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw IoError("write failure on '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

olg::StageGame load_game(const std::string& path) {
  return olg::parse_game(read_file(path));
}

std::vector<olg::Rat> parse_rational_list(const std::string& csv) {
  std::vector<olg::Rat> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(olg::parse_rational(item));
  if (out.empty()) throw olg::ParseError("empty rational list");
  return out;
}

nlohmann::json point_json(const olg::Point& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const olg::Rat& x : p) arr.push_back(olg::rat_to_string(x));
  return arr;
}

nlohmann::json payoff_seq_json(const olg::PayoffSequence& u) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : u) arr.push_back(point_json(v));
  return arr;
}

std::string profile_csv_label(const olg::StageGame& g, const olg::ActionProfile& a) {
  bool all_single = true;
  for (int i = 0; i < g.num_players; ++i)
    all_single = all_single && g.actions[i][a[i]].size() == 1;
  return g.profile_label(a, all_single ? "" : "|");
}

int run_compute(const std::string& game_path, const std::string& delta_str, int t,
                const std::string& out_path) {
  olg::StageGame g = load_game(game_path);
  olg::DiscountSpec spec = olg::effective_discount(olg::parse_rational(delta_str), t);
  auto rows = olg::feasible_set_with_generators(g, spec.Delta);
  std::ostringstream csv;
  for (const auto& row : rows) {
    for (const olg::Rat& x : row.vertex) csv << olg::rat_to_string(x) << ",";
    for (int k = 0; k < g.num_players; ++k) {
      csv << profile_csv_label(g, row.generator[k]);
      csv << (k + 1 < g.num_players ? "," : "");
    }
    csv << "\n";
  }
  emit(out_path, csv.str());
  return kExitOk;
}

int run_sweep(const std::string& game_path, const std::string& deltas_str,
              const std::string& out_path) {
  olg::StageGame g = load_game(game_path);
  std::vector<olg::Rat> deltas = parse_rational_list(deltas_str);
  if (deltas.size() < 2) throw olg::ValidationError("sweep needs at least 2 deltas");
  olg::MonotonicityReport report = olg::monotonicity_sweep(g, deltas);
  nlohmann::json doc;
  doc["deltas"] = nlohmann::json::array();
  for (const olg::Rat& d : report.deltas) doc["deltas"].push_back(olg::rat_to_string(d));
  doc["pairs"] = nlohmann::json::array();
  for (const auto& v : report.verdicts) {
    nlohmann::json pair;
    pair["small_delta"] = olg::rat_to_string(v.small_delta);
    pair["large_delta"] = olg::rat_to_string(v.large_delta);
    pair["contains"] = v.contains;
    pair["strict"] = v.strict;
    if (v.witness) pair["witness"] = point_json(*v.witness);
    doc["pairs"].push_back(std::move(pair));
  }
  emit(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int run_verify(const std::string& game_path, const std::string& delta_str, int t, long trials,
               std::uint64_t seed) {
  olg::StageGame g = load_game(game_path);
  olg::DiscountSpec spec = olg::effective_discount(olg::parse_rational(delta_str), t);
  const int n = g.num_players;
  nlohmann::json checks = nlohmann::json::array();
  bool all_ok = true;

  auto record = [&](const std::string& name, const std::string& status,
                    const std::string& detail = "") {
    nlohmann::json c;
    c["name"] = name;
    c["status"] = status;
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(std::move(c));
    if (status == "fail") all_ok = false;
  };
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const olg::CapExceededError& e) {
      record(name, "cap_exceeded", e.what());
    }
  };

  guarded("theorem1_equivalence", [&] {
    bool ok = olg::theorem1_equivalence(g, spec);
    record("theorem1_equivalence", ok ? "pass" : "fail");
  });

  guarded("lemma1_at_optima", [&] {
    auto dirs = olg::direction_family(n);
    bool ok = true;
    for (int k = 1; k <= 8 && ok; ++k) {
      olg::Rat d(k, 8);
      for (const auto& lambda : dirs) {
        auto rec = olg::max_welfare(g, d, lambda);
        if (d < 1) {
          // every optimizer must front-load below Delta = 1
          for (const auto& useq : rec.optimizer_payoff_seqs)
            for (const auto& verdict : olg::lemma1_check(useq, d, lambda))
              ok = ok && verdict.holds;
        } else {
          // at Delta = 1 order is irrelevant; some optimizer must front-load
          bool any = false;
          for (const auto& useq : rec.optimizer_payoff_seqs) {
            bool holds = true;
            for (const auto& verdict : olg::lemma1_check(useq, d, lambda))
              holds = holds && verdict.holds;
            any = any || holds;
          }
          ok = ok && any;
        }
        if (!ok) break;
      }
    }
    record("lemma1_at_optima", ok ? "pass" : "fail");
  });

  guarded("derivative_sign_at_optima", [&] {
    auto dirs = olg::direction_family(n);
    bool ok = true;
    for (int k = 1; k <= 7 && ok; ++k) {
      olg::Rat d(k, 8);
      for (const auto& lambda : dirs) {
        auto rec = olg::max_welfare(g, d, lambda);
        for (const auto& s : rec.optimizers)
          ok = ok && olg::welfare_derivative(g, s, d, lambda) <= 0;
        if (!ok) break;
      }
    }
    record("derivative_sign_at_optima", ok ? "pass" : "fail");
  });

  guarded("pm_reconstruction_identity", [&] {
    olg::SplitMix64 rng(seed);
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      std::vector<olg::Rat> w(n);
      for (auto& x : w)
        x = olg::Rat(static_cast<long>(rng.below(41)) - 20, 1 + static_cast<long>(rng.below(6)));
      olg::Rat d(1 + static_cast<long>(rng.below(9)), 10);
      ok = olg::pm_decomposition(w, d).reconstruction == olg::derivative_numerator(w, d);
    }
    record("pm_reconstruction_identity", ok ? "pass" : "fail");
  });

  guarded("prd_expected_identity", [&] {
    olg::SplitMix64 rng(seed ^ 0x5eedULL);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      auto seq = olg::random_lifetime_sequence(g, spec, rng);
      auto expected = olg::prd_expected_payoff(g, olg::prd_lottery(g, seq, spec), spec);
      ok = expected == olg::oracle::lifetime_payoff_direct(g, seq, spec);
    }
    record("prd_expected_identity", ok ? "pass" : "fail");
  });

  if (trials > 0) {
    guarded("monte_carlo_consistency", [&] {
      olg::SplitMix64 rng(seed ^ 0xac1dULL);
      auto seq = olg::random_lifetime_sequence(g, spec, rng);
      auto lot = olg::prd_lottery(g, seq, spec);
      auto expected = olg::prd_expected_payoff(g, lot, spec);
      auto sim = olg::prd_simulate(g, lot, spec, seed, trials);
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        double gap = std::abs(olg::rat_to_double(sim.mean[i] - expected[i]));
        if (sim.std_error[i] == 0)
          ok = ok && sim.mean[i] == expected[i];
        else
          ok = ok && gap <= 4 * sim.std_error[i];
      }
      record("monte_carlo_consistency", ok ? "pass" : "fail");
    });
  }

  nlohmann::json doc;
  doc["game"] = game_path;
  doc["delta"] = delta_str;
  doc["T"] = t;
  doc["checks"] = checks;
  doc["ok"] = all_ok;
  std::cout << doc.dump(2) << "\n";
  return all_ok ? kExitOk : kExitCheckFailure;
}

int run_breakpoints(const std::string& game_path, const std::string& lambda_str,
                    const std::string& out_path) {
  olg::StageGame g = load_game(game_path);
  olg::Direction lambda(parse_rational_list(lambda_str));
  olg::BreakpointReport report = olg::breakpoints(g, lambda);
  nlohmann::json doc;
  doc["lambda"] = nlohmann::json::array();
  for (const olg::Rat& x : lambda.weights) doc["lambda"].push_back(olg::rat_to_string(x));
  doc["exact_mode"] = report.exact_mode;
  doc["pieces"] = nlohmann::json::array();
  for (const auto& piece : report.pieces) {
    nlohmann::json p;
    p["lo"] = olg::rat_to_string(piece.lo);
    p["hi"] = olg::rat_to_string(piece.hi);
    p["optimal_payoff_sequences"] = nlohmann::json::array();
    for (const auto& u : piece.optimal)
      p["optimal_payoff_sequences"].push_back(payoff_seq_json(u));
    doc["pieces"].push_back(std::move(p));
  }
  doc["breakpoints"] = nlohmann::json::array();
  for (const auto& bp : report.breakpoints) {
    nlohmann::json b;
    b["exact"] = bp.exact;
    if (bp.exact) {
      b["value"] = olg::rat_to_string(bp.value);
      b["optimal_at"] = nlohmann::json::array();
      for (const auto& u : bp.optimal_at) b["optimal_at"].push_back(payoff_seq_json(u));
    } else {
      b["lo"] = olg::rat_to_string(bp.lo);
      b["hi"] = olg::rat_to_string(bp.hi);
    }
    doc["breakpoints"].push_back(std::move(b));
  }
  emit(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int run_limits(const std::string& game_path, const std::string& end_str,
               const std::string& out_path) {
  olg::StageGame g = load_game(game_path);
  olg::LimitEnd end;
  if (end_str == "zero") end = olg::LimitEnd::toward_zero;
  else if (end_str == "one") end = olg::LimitEnd::toward_one;
  else throw olg::ValidationError("--end must be 'zero' or 'one'");
  olg::Polytope poly = olg::limit_set(g, end);
  nlohmann::json doc;
  doc["end"] = end_str;
  doc["vertices"] = nlohmann::json::array();
  for (const olg::Point& v : poly.vertices) doc["vertices"].push_back(point_json(v));
  emit(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int run_plot(const std::string& game_path, const std::string& deltas_str,
             const std::string& out_path) {
  olg::StageGame g = load_game(game_path);
  std::vector<olg::Rat> deltas = parse_rational_list(deltas_str);
  for (const olg::Rat& d : deltas) olg::check_effective_discount(d);
  emit(out_path, olg::plot_feasible_sets(g, deltas));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible payoff sets of OLG repeated games"};
  app.require_subcommand(1);

  std::string game_path, delta_str, deltas_str, lambda_str, end_str, out_path;
  int t = 1;
  long trials = 0;
  std::uint64_t seed = 1;

  auto* compute = app.add_subcommand("compute", "Vertices of the feasible set with generators");
  compute->add_option("--game", game_path)->required();
  compute->add_option("--delta", delta_str)->required();
  compute->add_option("--T", t)->required();
  compute->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep", "Monotonicity across a discount grid");
  sweep->add_option("--game", game_path)->required();
  sweep->add_option("--deltas", deltas_str)->required();
  sweep->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--game", game_path)->required();
  verify->add_option("--delta", delta_str)->required();
  verify->add_option("--T", t)->required();
  verify->add_option("--trials", trials);
  verify->add_option("--seed", seed);

  auto* bkpt = app.add_subcommand("breakpoints", "Optimizer switch points for a direction");
  bkpt->add_option("--game", game_path)->required();
  bkpt->add_option("--lambda", lambda_str)->required();
  bkpt->add_option("--out", out_path);

  auto* limits = app.add_subcommand("limits", "Limit feasible set toward zero or one");
  limits->add_option("--game", game_path)->required();
  limits->add_option("--end", end_str)->required();
  limits->add_option("--out", out_path);

  auto* plot = app.add_subcommand("plot", "SVG rendering of feasible sets");
  plot->add_option("--game", game_path)->required();
  plot->add_option("--deltas", deltas_str)->required();
  plot->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (compute->parsed()) return run_compute(game_path, delta_str, t, out_path);
    if (sweep->parsed()) return run_sweep(game_path, deltas_str, out_path);
    if (verify->parsed()) return run_verify(game_path, delta_str, t, trials, seed);
    if (bkpt->parsed()) return run_breakpoints(game_path, lambda_str, out_path);
    if (limits->parsed()) return run_limits(game_path, end_str, out_path);
    if (plot->parsed()) return run_plot(game_path, deltas_str, out_path);
  } catch (const olg::CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const olg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const olg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
