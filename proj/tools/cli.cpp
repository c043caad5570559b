#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "nck/decomp.hpp"
#include "nck/factor.hpp"
#include "nck/ineq.hpp"
#include "nck/io.hpp"
#include "nck/parallel.hpp"
#include "nck/schurhorn.hpp"

#ifndef NCK_VERSION
#define NCK_VERSION "unknown"
#endif

namespace nck::cli {

namespace {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

using Config = std::vector<std::pair<std::string, std::string>>;

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

Json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
          return v;
        } else {
          return v;
        }
      },
      c);
}

Json meta_json(const std::string& command, const Config& config) {
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  return {{"tool", "nck"}, {"version", NCK_VERSION}, {"command", command}, {"config", cfg}};
}

std::string render(const Table& table, const std::string& command, const Config& config,
                   const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json r = Json::object();
      for (std::size_t k = 0; k < row.size(); ++k) r[table.columns[k]] = cell_json(row[k]);
      rows.push_back(std::move(r));
    }
    os << Json{{"meta", meta_json(command, config)}, {"rows", std::move(rows)}}.dump(2) << "\n";
    return os.str();
  }
  os << "# nck " << NCK_VERSION << " " << command << "\n#";
  for (const auto& [k, v] : config) os << " " << k << "=" << v;
  os << "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k]);
    os << "\n";
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

GModel parse_model(const std::string& spec, std::uint64_t seed) {
  if (spec == "rademacher") return GModel::rademacher();
  const std::string prefix = "haar:";
  if (spec.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const long d = std::stol(spec.substr(prefix.size()), &used);
      if (used == spec.size() - prefix.size() && d >= 1) return GModel::haar(d, seed);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::InvalidArgument, "model must be rademacher or haar:D, got " + spec);
}

double parse_real(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidArgument, "not a number: " + s);
}

std::string show(double v) { return format_number(v); }

OpSequence random_sequence(Index d, std::size_t n, std::mt19937_64& rng) {
  OpSequence x(d, {});
  for (std::size_t i = 0; i < n; ++i) x.items.push_back(gaussian_matrix(d, d, rng));
  return x;
}

struct Common {
  std::string format = "csv";
  std::string out = "-";
  int threads = 0;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncommutative Khintchine experiments: K-functionals, optimal row/column "
               "decompositions, factorizations, Schur-Horn counterexamples"};
  app.name("nck");
  app.set_version_flag("--version", NCK_VERSION);
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", common.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (overrides NCK_THREADS)");

  std::function<int()> action;
  std::string command;

  // kfunc
  std::string k_input;
  std::string k_p = "1";
  std::string k_q = "inf";
  double k_tmin = 0.01;
  double k_tmax = 100.0;
  int k_count = 41;
  auto* kfunc = app.add_subcommand("kfunc", "K-functional of a matrix or profile on a t-grid");
  kfunc->add_option("--input", k_input, "Matrix or profile JSON")->required();
  kfunc->add_option("--p", k_p, "Lower exponent")->capture_default_str();
  kfunc->add_option("--q", k_q, "Upper exponent (inf allowed)")->capture_default_str();
  kfunc->add_option("--t-min", k_tmin)->capture_default_str();
  kfunc->add_option("--t-max", k_tmax)->capture_default_str();
  kfunc->add_option("--count", k_count)->capture_default_str();
  kfunc->callback([&] {
    command = "kfunc";
    action = [&] {
      const Json j = read_json_file(k_input);
      const Profile f = j.contains("steps") ? profile_from_json(j) : profile_of(matrix_from_json(j));
      const double p = parse_real(k_p);
      const double q = parse_real(k_q);
      if (!(k_tmin > 0.0) || !(k_tmax >= k_tmin) || k_count < 1) {
        throw Error(ErrorKind::InvalidArgument, "need 0 < t-min <= t-max and count >= 1");
      }
      const bool exact = p == 1.0 && std::isinf(q);
      Table t{{"t", "K", "method"}, {}};
      for (double s : log_grid(k_tmin, k_tmax, k_count)) {
        t.rows.push_back({s, exact ? k_exact_1_inf(f, s) : k_proxy(f, p, q, s),
                          std::string(exact ? "exact" : "holmstedt_proxy")});
      }
      const Config cfg{{"input", k_input}, {"p", show(p)}, {"q", show(q)}, {"t_min", show(k_tmin)},
                       {"t_max", show(k_tmax)}, {"count", std::to_string(k_count)}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return 0;
    };
  });

  // gnorm
  std::string g_input;
  std::string g_model = "rademacher";
  std::string g_p = "2";
  std::uint64_t g_seed = 1;
  auto* gnorm = app.add_subcommand("gnorm", "Norms of Gx against the row and column norms");
  gnorm->add_option("--input", g_input, "OpSequence JSON")->required();
  gnorm->add_option("--model", g_model, "rademacher or haar:D")->capture_default_str();
  gnorm->add_option("--p", g_p, "Exponent (inf allowed)")->capture_default_str();
  gnorm->add_option("--seed", g_seed, "Seed for haar:D")->capture_default_str();
  gnorm->callback([&] {
    command = "gnorm";
    action = [&] {
      const OpSequence x = sequence_from_json(read_json_file(g_input));
      const GModel model = parse_model(g_model, g_seed);
      const double p = parse_real(g_p);
      const Profile g = g_profile(x, model);
      const Profile r = profile_of(row_stack(x));
      const Profile c = profile_of(col_stack(x));
      Table t{{"model", "surrogate", "p", "g_norm", "r_norm", "c_norm", "g_weak", "r_weak", "c_weak"},
              {}};
      t.rows.push_back({model.label(), model.is_surrogate(), p, lp_norm(g, p), lp_norm(r, p),
                        lp_norm(c, p), weak_lp(g, p), weak_lp(r, p), weak_lp(c, p)});
      const Config cfg{{"input", g_input}, {"model", model.label()}, {"p", show(p)},
                       {"seed", std::to_string(g_seed)}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return 0;
    };
  });

  // decompose
  std::string d_input;
  SolverOptions d_opts;
  auto* decompose = app.add_subcommand("decompose", "Optimal L_1 row + column decomposition");
  decompose->add_option("--input", d_input, "OpSequence JSON")->required();
  decompose->add_option("--tol", d_opts.tol)->capture_default_str();
  decompose->add_option("--max-iter", d_opts.max_iter)->capture_default_str();
  decompose->add_option("--size-cap", d_opts.size_cap)->capture_default_str();
  decompose->callback([&] {
    command = "decompose";
    action = [&] {
      const OpSequence x = sequence_from_json(read_json_file(d_input));
      const DecompositionResult r = m1_solve(x, d_opts);
      const Config cfg{{"input", d_input}, {"tol", show(d_opts.tol)},
                       {"max_iter", std::to_string(d_opts.max_iter)},
                       {"size_cap", std::to_string(d_opts.size_cap)}};
      if (common.format == "json") {
        Json j{{"meta", meta_json(command, cfg)},
               {"primal", r.primal},
               {"dual_bound", r.dual_bound},
               {"gap", r.gap},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"constraint_residual", r.constraint_residual},
               {"y", to_json(r.y)},
               {"z", to_json(r.z)},
               {"certificate", to_json(r.certificate)}};
        emit(j.dump(2) + "\n", common.out, out);
      } else {
        Table t{{"primal", "dual_bound", "gap", "iterations", "converged", "constraint_residual"}, {}};
        t.rows.push_back({r.primal, r.dual_bound, r.gap, static_cast<long long>(r.iterations),
                          r.converged, r.constraint_residual});
        emit(render(t, command, cfg, common.format), common.out, out);
      }
      if (!r.converged) {
        err << Json{{"error", "NoConvergence"},
                    {"message", "max_iter reached"},
                    {"gap", r.gap},
                    {"iterations", r.iterations}}
                   .dump()
            << "\n";
        return 2;
      }
      return 0;
    };
  });

  // factorize
  std::string f_input;
  bool f_selfadjoint = false;
  double f_rank_tol = 1e-8;
  SolverOptions f_opts;
  f_opts.tol = 1e-12;
  f_opts.max_iter = 50000;
  auto* factorize = app.add_subcommand("factorize", "Factorization x = alpha u + u beta");
  factorize->add_option("--input", f_input, "OpSequence JSON")->required();
  factorize->add_flag("--selfadjoint", f_selfadjoint, "Symmetrize the decomposition first");
  factorize->add_option("--rank-tol", f_rank_tol)->capture_default_str();
  factorize->add_option("--tol", f_opts.tol)->capture_default_str();
  factorize->add_option("--max-iter", f_opts.max_iter)->capture_default_str();
  factorize->callback([&] {
    command = "factorize";
    action = [&] {
      const OpSequence x = sequence_from_json(read_json_file(f_input));
      DecompositionResult r = m1_solve(x, f_opts);
      if (f_selfadjoint) r = symmetrize(x, r);
      const FactorizationResult fac = extract_factorization(x, r, f_rank_tol);
      const Config cfg{{"input", f_input}, {"selfadjoint", f_selfadjoint ? "true" : "false"},
                       {"rank_tol", show(f_rank_tol)}, {"tol", show(f_opts.tol)},
                       {"max_iter", std::to_string(f_opts.max_iter)}};
      const std::vector<std::string> cols{"r_factor", "r_consistency", "r_row", "r_col", "r_y",
                                          "r_z", "scale", "primal", "gap", "iterations"};
      const std::vector<Cell> vals{fac.r_factor, fac.r_consistency, fac.r_row, fac.r_col,
                                   fac.r_y, fac.r_z, fac.scale, r.primal, r.gap,
                                   static_cast<long long>(r.iterations)};
      if (common.format == "json") {
        Json j{{"meta", meta_json(command, cfg)}, {"alpha", to_json(fac.alpha)},
               {"beta", to_json(fac.beta)},       {"u", to_json(fac.u)},
               {"dual_bound", r.dual_bound},      {"converged", r.converged}};
        for (std::size_t k = 0; k < cols.size(); ++k) j[cols[k]] = cell_json(vals[k]);
        emit(j.dump(2) + "\n", common.out, out);
      } else {
        emit(render(Table{cols, {vals}}, command, cfg, common.format), common.out, out);
      }
      return 0;
    };
  });

  // counterexample
  int c_family = 1;
  int c_n = 16;
  std::vector<int> c_sweep;
  Index c_verify_cap = kVerifyCap;
  auto* counter = app.add_subcommand("counterexample", "Schur-Horn L_{2,inf} separation families");
  counter->add_option("--family", c_family)->check(CLI::IsMember({1, 2}))->capture_default_str();
  counter->add_option("--n", c_n, "Single N")->capture_default_str();
  counter->add_option("--sweep", c_sweep, "Comma-separated list of N")->delimiter(',');
  counter->add_option("--verify-cap", c_verify_cap)->capture_default_str();
  counter->callback([&] {
    command = "counterexample";
    action = [&] {
      std::vector<int> ns = c_sweep.empty() ? std::vector<int>{c_n} : c_sweep;
      std::vector<CounterexampleReport> reps(ns.size());
      parallel_for(ns.size(), [&](std::size_t k) {
        reps[k] = c_family == 1 ? family1(ns[k], c_verify_cap) : family2(ns[k], c_verify_cap);
      });
      Table t{{"N", "family", "size", "g_weak2", "r_weak2", "c_weak2", "ratio", "g_closed",
               "r_closed", "diag_error", "spectrum_error", "verified"},
              {}};
      for (const CounterexampleReport& r : reps) {
        t.rows.push_back({static_cast<long long>(r.N), static_cast<long long>(r.family),
                          static_cast<long long>(r.size), r.g_weak2, r.r_weak2, r.c_weak2, r.ratio,
                          r.g_closed, r.r_closed, r.diag_error, r.spectrum_error, r.verified});
      }
      std::string list;
      for (int n : ns) list += (list.empty() ? "" : ";") + std::to_string(n);
      const Config cfg{{"family", std::to_string(c_family)}, {"n", list},
                       {"verify_cap", std::to_string(c_verify_cap)}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return 0;
    };
  });

  // ineq-suite
  int i_trials = 200;
  std::uint64_t i_seed = 7;
  double i_tol = 1e-8;
  auto* ineq = app.add_subcommand("ineq-suite", "Randomized witnesses for the PSD inequalities");
  ineq->add_option("--trials", i_trials)->capture_default_str();
  ineq->add_option("--seed", i_seed)->capture_default_str();
  ineq->add_option("--tol", i_tol)->capture_default_str();
  ineq->callback([&] {
    command = "ineq-suite";
    action = [&] {
      const IneqSuiteReport rep = ineq_suite(i_trials, i_seed, i_tol);
      Table t{{"item", "trial", "dim", "parameter", "violation", "contraction_excess",
               "isometry_defect", "ok"},
              {}};
      for (const IneqTrial& tr : rep.trials) {
        t.rows.push_back({tr.item, static_cast<long long>(tr.trial), static_cast<long long>(tr.dim),
                          tr.parameter, tr.report.violation, tr.report.contraction_excess,
                          tr.report.isometry_defect, tr.report.ok(i_tol)});
      }
      const Config cfg{{"trials", std::to_string(i_trials)}, {"seed", std::to_string(i_seed)},
                       {"tol", show(i_tol)}, {"failures", std::to_string(rep.failures)},
                       {"sharpness_gap", show(rep.sharpness_gap)}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return rep.failures == 0 ? 0 : 2;
    };
  });

  // khintchine-weak1
  std::string w_input;
  int w_random = 0;
  std::uint64_t w_seed = 11;
  Index w_max_dim = 4;
  int w_max_n = 6;
  SolverOptions w_opts;
  auto* weak = app.add_subcommand("khintchine-weak1", "Weak-L_1 Khintchine ratio via m_1");
  weak->add_option("--input", w_input, "OpSequence JSON");
  weak->add_option("--random", w_random, "Number of seeded random instances");
  weak->add_option("--seed", w_seed)->capture_default_str();
  weak->add_option("--max-dim", w_max_dim)->capture_default_str();
  weak->add_option("--max-n", w_max_n)->capture_default_str();
  weak->add_option("--tol", w_opts.tol)->capture_default_str();
  weak->add_option("--max-iter", w_opts.max_iter)->capture_default_str();
  weak->callback([&] {
    command = "khintchine-weak1";
    action = [&] {
      std::vector<OpSequence> xs;
      if (!w_input.empty()) xs.push_back(sequence_from_json(read_json_file(w_input)));
      if (w_max_dim < 1 || w_max_n < 1) throw Error(ErrorKind::InvalidArgument, "max-dim, max-n >= 1");
      std::mt19937_64 rng(w_seed);
      for (int k = 0; k < w_random; ++k) {
        const Index d = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(w_max_dim));
        const std::size_t n = 1 + rng() % static_cast<std::uint64_t>(w_max_n);
        xs.push_back(random_sequence(d, n, rng));
      }
      if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "give --input or --random");
      std::vector<WeakKhintchineReport> reps(xs.size());
      parallel_for(xs.size(), [&](std::size_t k) { reps[k] = weak_l1_khintchine(xs[k], w_opts); });
      Table t{{"instance", "dim", "N", "g_weak1", "r_weak1", "c_weak1", "decomposition_value",
               "ratio", "m1", "gap"},
              {}};
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const WeakKhintchineReport& r = reps[k];
        t.rows.push_back({static_cast<long long>(k), static_cast<long long>(xs[k].dim),
                          static_cast<long long>(xs[k].size()), r.g_weak1, r.r_weak1, r.c_weak1,
                          r.decomposition_value, r.ratio, r.m1, r.gap});
      }
      const Config cfg{{"input", w_input.empty() ? "-" : w_input}, {"random", std::to_string(w_random)},
                       {"seed", std::to_string(w_seed)}, {"max_dim", std::to_string(w_max_dim)},
                       {"max_n", std::to_string(w_max_n)}, {"tol", show(w_opts.tol)},
                       {"max_iter", std::to_string(w_opts.max_iter)}, {"model", "rademacher"}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return 0;
    };
  });

  // power-suite
  std::uint64_t p_seed = 3;
  int p_trials = 40;
  auto* power = app.add_subcommand("power-suite", "Power theorem ratios over random profiles");
  power->add_option("--seed", p_seed)->capture_default_str();
  power->add_option("--trials", p_trials)->capture_default_str();
  power->callback([&] {
    command = "power-suite";
    action = [&] {
      const PowerSuiteReport rep = power_theorem_suite(p_seed, p_trials);
      Table t{{"profile", "p", "q", "alpha", "min_ratio", "max_ratio", "c_p_alpha",
               "within_envelope", "within_constant"},
              {}};
      for (const PowerRow& r : rep.rows) {
        t.rows.push_back({static_cast<long long>(r.profile), r.p, r.q, r.alpha, r.min_ratio,
                          r.max_ratio, r.c_p_alpha, r.within_envelope, r.within_constant});
      }
      const Config cfg{{"seed", std::to_string(p_seed)}, {"trials", std::to_string(p_trials)},
                       {"unit_deviation", show(rep.unit_deviation)}};
      emit(render(t, command, cfg, common.format), common.out, out);
      return rep.all_within_envelope ? 0 : 2;
    };
  });

  if (args.empty()) {
    out << app.help();
    return 1;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << NCK_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return 1;
  }
  if (common.threads > 0) setenv("NCK_THREADS", std::to_string(common.threads).c_str(), 1);
  try {
    return action();
  } catch (const Error& e) {
    err << Json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return e.is_validation() ? 1 : 2;
  }
}

}  // namespace nck::cli
