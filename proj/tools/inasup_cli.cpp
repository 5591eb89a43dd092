#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "inasup/engine.hpp"
#include "inasup/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace inasup;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational parse_epsilon(const std::string& text) {
  if (text.find('.') != std::string::npos) {
    std::string hint;
    const auto dot = text.find('.');
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    try {
      Rational q(Integer(digits.empty() ? "0" : digits, 10),
                 Integer("1" + std::string(text.size() - dot - 1, '0'), 10));
      q.canonicalize();
      hint = " (use " + to_string(q) + ")";
    } catch (...) {
    }
    throw UsageError("epsilon must be an exact fraction p/q, not a decimal" + hint);
  }
  Rational eps;
  try {
    eps = parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad epsilon: ") + e.what());
  }
  if (sgn(eps) < 0 || eps >= Rational(1, 2)) throw UsageError("epsilon must lie in [0, 1/2)");
  return eps;
}

void apply_threads(int threads) {
  if (const char* env = std::getenv("INASUP_THREADS")) threads = std::atoi(env);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

struct OutFile {
  explicit OutFile(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& get() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

std::vector<double> draw_point(UniformSource& rng, int dim) {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = rng.next();
  return x;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<std::size_t>(std::stod(item)));
  if (out.empty()) throw UsageError("empty list: " + text);
  return out;
}

struct Grid {
  double lo = 0.3, hi = 0.45;
  std::size_t n = 100;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || g.n == 0)
    throw UsageError("--eps-grid expects lo:hi:n");
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant asymmetric unions of polytopes for coupled expanding maps"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads for simulation (0 = all cores)");

  int dim = 2;
  std::string eps_text = "11/25";
  std::string out_path;
  std::uint64_t seed = 1;

  auto* atoms_cmd = app.add_subcommand("atoms", "Enumerate the atomic partition");
  atoms_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 8));
  bool count_only = false;
  atoms_cmd->add_flag("--count-only", count_only);
  atoms_cmd->add_option("--out", out_path);

  auto* lambda_cmd = app.add_subcommand("lambda", "Report multiplier set cardinalities");
  lambda_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 8));

  std::string t_text = "100000";
  std::size_t n0 = 1000;
  auto* sim_cmd = app.add_subcommand("simulate", "Float orbit with atom word");
  sim_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 64));
  sim_cmd->add_option("--eps", eps_text)->required();
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--T", t_text, "Recorded iterates");
  sim_cmd->add_option("--n0", n0, "Discarded iterates");
  sim_cmd->add_option("--out", out_path);

  std::string grid_text = "0.3:0.48:100";
  std::size_t ics = 100;
  OnsetRule onset_rule;
  auto* scan_cmd = app.add_subcommand("opscan", "Order parameter scan over epsilon");
  scan_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 256));
  scan_cmd->add_option("--eps-grid", grid_text);
  scan_cmd->add_option("--ics", ics, "Initial conditions per epsilon");
  scan_cmd->add_option("--T", t_text, "Comma-separated checkpoints");
  scan_cmd->add_option("--seed", seed);
  scan_cmd->add_option("--out", out_path);
  std::string maxop_path;
  scan_cmd->add_option("--maxop-out", maxop_path, "Per-epsilon maximum order parameter table");
  scan_cmd->add_option("--noise-mult", onset_rule.noise_multiplier,
                       "Onset threshold as a multiple of the smallest-epsilon noise");
  scan_cmd->add_option("--min-frac", onset_rule.min_fraction,
                       "Fraction of initial conditions that must exceed the threshold");

  std::size_t cyl_len = 5;
  std::size_t count = 24;
  double min_op = 0.0;
  auto* seed_cmd = app.add_subcommand("seedwords", "Cylinder words from a float trajectory");
  seed_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 6));
  seed_cmd->add_option("--eps", eps_text)->required();
  seed_cmd->add_option("--cyl-len", cyl_len)->check(CLI::PositiveNumber);
  seed_cmd->add_option("--count", count);
  seed_cmd->add_option("--seed", seed);
  seed_cmd->add_option("--T", t_text);
  seed_cmd->add_option("--min-op", min_op, "Required order parameter of the trajectory");
  seed_cmd->add_option("--out", out_path);

  std::string word_text;
  std::size_t max_card = 10'000'000;
  std::string semi = "off";
  auto* build_cmd = app.add_subcommand("build", "Construct and verify a certificate");
  build_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 6));
  build_cmd->add_option("--eps", eps_text)->required();
  build_cmd->add_option("--word", word_text)->required();
  build_cmd->add_option("--max-card", max_card);
  build_cmd->add_option("--semi-opt", semi)->check(CLI::IsMember({"on", "off"}));
  build_cmd->add_option("--out", out_path);

  std::string cert_path;
  auto* verify_cmd = app.add_subcommand("verify", "Check a certificate with the full optimizer");
  verify_cmd->add_option("certificate", cert_path)->required();

  auto* report_cmd = app.add_subcommand("report", "Success ratio over seed words from one trajectory");
  report_cmd->add_option("--dim", dim)->required()->check(CLI::Range(1, 6));
  report_cmd->add_option("--eps", eps_text)->required();
  report_cmd->add_option("--cyl-len", cyl_len)->check(CLI::PositiveNumber);
  report_cmd->add_option("--count", count);
  report_cmd->add_option("--seed", seed);
  report_cmd->add_option("--T", t_text);
  report_cmd->add_option("--min-op", min_op);
  report_cmd->add_option("--max-card", max_card);
  report_cmd->add_option("--semi-opt", semi)->check(CLI::IsMember({"on", "off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  apply_threads(threads);

  try {
    if (*atoms_cmd) {
      const AtomTable table(MapParams(dim, 0));
      OutFile out(out_path);
      if (!count_only) table.dump(out.get());
      std::cout << "count=" << table.size() << '\n';
      return kExitOk;
    }

    if (*lambda_cmd) {
      const auto& fam = standard_family(dim);
      bool uniform = true;
      for (std::size_t r = 0; r < fam.row_count(); ++r) {
        const auto [i, j] = index_at(r);
        std::cout << "(" << i << "," << j << ") " << fam.candidates(r).size() << ' '
                  << fam.semi().candidates(r).size() << '\n';
        uniform = uniform && fam.candidates(r).size() == fam.candidates(0).size();
      }
      std::cout << "D=" << dim << " lambda=" << fam.candidates(0).size()
                << " semi=" << fam.semi().candidates(0).size()
                << " uniform=" << (uniform ? "yes" : "no")
                << " integral=" << (fam.all_integral() ? "yes" : "no") << '\n';
      return kExitOk;
    }

    if (*sim_cmd) {
      const double eps = parse_epsilon(eps_text).get_d();
      const std::size_t n1 = parse_size_list(t_text).back();
      std::optional<AtomTable> table;
      std::optional<AtomLocator> locator;
      if (dim <= 6) {
        table.emplace(MapParams(dim, parse_epsilon(eps_text)));
        locator.emplace(*table);
      }
      const FloatMap map(dim, eps);
      UniformSource rng(seed);
      const auto x0 = draw_point(rng, dim);
      const auto orbit = simulate_orbit(map, locator ? &*locator : nullptr, x0, n0, n1, seed);
      OutFile out(out_path);
      write_orbit_csv(out.get(), orbit);
      std::fprintf(stderr, "op=%.17g\n", order_parameter(orbit, n1).value);
      return kExitOk;
    }

    if (*scan_cmd) {
      const Grid grid = parse_grid(grid_text);
      OpScanConfig config;
      config.dim = dim;
      config.epsilons = epsilon_grid(grid.lo, grid.hi, grid.n);
      config.initial_conditions = ics;
      config.checkpoints = parse_size_list(t_text);
      std::sort(config.checkpoints.begin(), config.checkpoints.end());
      config.seed = seed;
      const auto rows = op_scan(config);
      OutFile out(out_path);
      write_op_scan_csv(out.get(), rows);
      if (!maxop_path.empty()) {
        OutFile table(maxop_path);
        table.get() << "epsilon,max_op,max_op_times_dim\n";
        char buf[128];
        for (const auto& r : max_order_parameter(rows, dim)) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.epsilon, r.max_op, r.max_op_times_dim);
          table.get() << buf;
        }
      }
      const auto onset = detect_onset(rows, onset_rule);
      if (onset.found)
        std::fprintf(stderr, "onset=%.6f noise=%.3g threshold=%.3g\n", onset.epsilon,
                     onset.noise_level, onset.threshold);
      else
        std::fprintf(stderr, "onset=none noise=%.3g\n", onset.noise_level);
      return kExitOk;
    }

    if (*seed_cmd || *report_cmd) {
      const Rational eps = parse_epsilon(eps_text);
      const Workspace ws(MapParams(dim, eps));
      const std::size_t n1 = parse_size_list(t_text).back();
      const auto orbit =
          seeding_orbit(ws.atoms(), eps.get_d(), seed, 1000, n1, min_op);
      const auto words = seed_words(ws, orbit.word, orbit.lifts, cyl_len, count);
      if (*seed_cmd) {
        OutFile out(out_path);
        for (const auto& w : words) out.get() << format_word(w) << '\n';
        return kExitOk;
      }
      BuildOptions options;
      options.max_cardinality = max_card;
      options.semi_optimize = semi == "on";
      std::size_t ok = 0;
      std::vector<std::size_t> cards;
      std::vector<double> times;
      for (const auto& w : words) {
        const auto rep = build_inasup(ws, w, options);
        const bool good = rep.outcome == Outcome::Success && rep.verified.value_or(false);
        std::cout << format_word(w) << ' ' << to_string(rep.outcome) << ' '
                  << rep.final_cardinality << ' ' << rep.cpu_seconds << '\n';
        if (good) {
          ++ok;
          cards.push_back(rep.final_cardinality);
          times.push_back(rep.cpu_seconds);
        }
      }
      auto median = [](auto v) {
        using T = typename decltype(v)::value_type;
        std::sort(v.begin(), v.end());
        return v.empty() ? T{} : v[v.size() / 2];
      };
      std::cout << "D=" << dim << " eps=" << to_string(eps) << " len=" << cyl_len
                << " ratio=" << ok << '/' << words.size() << " card_median=" << median(cards)
                << " card_max=" << (cards.empty() ? 0 : *std::max_element(cards.begin(), cards.end()))
                << " cpu_median=" << median(times)
                << " cpu_max=" << (times.empty() ? 0.0 : *std::max_element(times.begin(), times.end()))
                << '\n';
      return kExitOk;
    }

    if (*build_cmd) {
      const Rational eps = parse_epsilon(eps_text);
      const Workspace ws(MapParams(dim, eps));
      CylinderWord word;
      try {
        word = parse_word(word_text);
      } catch (const std::exception& e) {
        throw UsageError(std::string("bad word: ") + e.what());
      }
      BuildOptions options;
      options.max_cardinality = max_card;
      options.semi_optimize = semi == "on";
      const auto wall0 = std::chrono::steady_clock::now();
      const auto rep = build_inasup(ws, word, options);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
      std::printf("D=%d eps=%s word=%s outcome=%s cardinality=%zu steps=%zu cpu=%.3fs wall=%.3fs",
                  dim, to_string(eps).c_str(), format_word(word).c_str(), to_string(rep.outcome),
                  rep.final_cardinality, rep.steps, rep.cpu_seconds, wall);
      if (rep.verified) std::printf(" verified=%s", *rep.verified ? "yes" : "no");
      std::printf("\n");
      if (rep.outcome == Outcome::BudgetExceeded) return kExitBudget;
      if (rep.outcome != Outcome::Success || !rep.verified.value_or(true)) return kExitFail;
      if (!out_path.empty()) {
        OutFile out(out_path);
        write_certificate(out.get(), *rep.certificate);
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      std::ifstream in(cert_path);
      if (!in) {
        std::cerr << "cannot open " << cert_path << '\n';
        return kExitFail;
      }
      Certificate cert;
      try {
        cert = read_certificate(in);
      } catch (const std::exception& e) {
        std::cerr << "malformed certificate: " << e.what() << '\n';
        return kExitFail;
      }
      const auto rep = verify_certificate(cert);
      std::cout << (rep.ok() ? "verified" : "NOT verified") << " count=" << cert.polytopes.size();
      if (!rep.detail.empty()) std::cout << " (" << rep.detail << ')';
      std::cout << '\n';
      return rep.ok() ? kExitOk : kExitFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
