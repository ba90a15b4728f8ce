#pragma once

// Command-line front end. Every subcommand writes one JSON report (or CSV for
// `reproduce`) to stdout or --output and returns
//   0  check passed / extreme / found
//   1  check failed / not extreme / not found
//   2  input error, unknown subcommand
//
// Defaults < config file named by $POSMAPS_CONFIG < command-line flags.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "posmaps/posmaps.hpp"

namespace posmaps {

inline constexpr const char* kConfigEnv = "POSMAPS_CONFIG";

struct RunConfig {
  double tol = 1e-9;
  int restarts = 64;
  int samples = 200;
  std::uint64_t seed = 0;
  std::string output;

  void validate() const {
    if (!(tol > 0) || !std::isfinite(tol)) throw InputError("config: tol must be > 0");
    if (restarts < 1) throw InputError("config: restarts must be >= 1");
    if (samples < 1) throw InputError("config: samples must be >= 1");
  }
};

inline json to_json(const RunConfig& c) {
  return {{"tol", c.tol}, {"restarts", c.restarts}, {"samples", c.samples}, {"seed", c.seed}};
}

inline RunConfig config_from_json(const json& j, RunConfig base = {}) {
  if (!j.is_object()) throw FormatError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "config." + key;
    if (key == "tol") {
      base.tol = io::number(value, where);
    } else if (key == "restarts" || key == "samples") {
      if (!value.is_number_integer()) throw FormatError(where + ": expected an integer");
      (key == "restarts" ? base.restarts : base.samples) = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<long long>() < 0)) {
        throw FormatError(where + ": expected a non-negative integer");
      }
      base.seed = value.get<std::uint64_t>();
    } else if (key == "output") {
      if (!value.is_string()) throw FormatError(where + ": expected a string");
      base.output = value.get<std::string>();
    } else {
      throw FormatError(where + ": unknown key");
    }
  }
  return base;
}

/// Config from the file named by $POSMAPS_CONFIG, or defaults when unset.
inline RunConfig config_from_environment() {
  const char* path = std::getenv(kConfigEnv);
  if (!path || !*path) return {};
  return config_from_json(read_json_file(path));
}

/// 2x2 superoperator -> Bloch-ball affine map r -> A r + b.
inline AffineBallMap to_bloch_affine(const SuperOpMatrix& s) {
  if (s.dim() != 2) throw InputError("to_bloch_affine: qubit maps only");
  return AffineBallMap(s.matrix().bottomRightCorner(3, 3), s.matrix().col(0).tail(3));
}

namespace cli {

/// An input operator file with its derived representations.
struct LoadedMap {
  SuperOpMatrix superop;
  PsdReport choi;
  std::optional<KrausChannel> kraus;  ///< present iff completely positive
  std::string kind;
};

inline LoadedMap load_map(const std::string& path, double tol) {
  const OperatorFile f = parse_channel_file(path);
  LoadedMap m;
  ChoiMatrix c;
  if (auto* k = std::get_if<KrausChannel>(&f)) {
    m.kind = "channel";
    m.kraus = *k;
    m.superop = superop_matrix(*k);
    c = choi_of(*k);
  } else if (auto* cm = std::get_if<ChoiMatrix>(&f)) {
    m.kind = "choi";
    c = *cm;
    m.superop = superop_matrix(ChoiMap(c));
  } else {
    m.kind = "superop";
    m.superop = std::get<SuperOpMatrix>(f);
    c = choi_of_map(m.superop);
  }
  m.choi = psd_report(c.op(), tol);
  if (!m.kraus && m.choi.is_psd) m.kraus = kraus_from_choi(c, tol);
  return m;
}

/// Calls f with the Kraus form when available, else with the superoperator.
template <class F>
auto with_map(const LoadedMap& m, F&& f) {
  if (m.kraus) return f(*m.kraus);
  return f(m.superop);
}

inline const KrausChannel& require_kraus(const LoadedMap& m, const std::string& command) {
  if (!m.kraus) {
    throw InputError(command + ": requires a completely positive map, min Choi eigenvalue " +
                     std::to_string(m.choi.min_eigenvalue));
  }
  return *m.kraus;
}

struct Outcome {
  json result;
  bool pass;
};

inline std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Fibonacci lattice on the unit sphere.
inline std::vector<RealVector> sphere_lattice(int count) {
  std::vector<RealVector> pts;
  const double golden = std::acos(-1.0) * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    RealVector p(3);
    p << r * std::cos(golden * i), r * std::sin(golden * i), z;
    pts.push_back(p);
  }
  return pts;
}

inline std::string reproduce_csv(const std::string& what, double alpha, int grid, const AffineBallMap* ellipsoid,
                                 int samples) {
  std::ostringstream os;
  if (what == "ellipsoid") {
    os << "x,y,z,x',y',z'\n";
    for (const auto& p : sphere_lattice(samples)) {
      const RealVector q = (*ellipsoid)(p);
      os << csv_number(p[0]) << ',' << csv_number(p[1]) << ',' << csv_number(p[2]) << ',' << csv_number(q[0]) << ','
         << csv_number(q[1]) << ',' << csv_number(q[2]) << '\n';
    }
    return os.str();
  }
  if (grid < 2) throw InputError("reproduce: grid must be >= 2");
  const double lo = -1.0 + planar::kEndpointMargin, hi = 1.0 - planar::kEndpointMargin;
  if (what == "fg") os << "x,f,g,f_minus_" << csv_number(alpha) << "g\n";
  else if (what == "fpp") os << "x,fpp\n";
  else if (what == "fmg") os << "x,f_minus_" << csv_number(alpha) << "g\n";
  else throw InputError("reproduce: expected fg, fpp, fmg or ellipsoid, got '" + what + "'");
  for (int i = 0; i < grid; ++i) {
    const double x = lo + (hi - lo) * i / (grid - 1);
    os << csv_number(x);
    if (what == "fg") os << ',' << csv_number(planar::f(x)) << ',' << csv_number(planar::g(x)) << ','
                         << csv_number(planar::f(x) - alpha * planar::g(x));
    else if (what == "fpp") os << ',' << csv_number(planar::f_second(x));
    else os << ',' << csv_number(planar::f(x) - alpha * planar::g(x));
    os << '\n';
  }
  return os.str();
}

inline Outcome qubit_outcome(int family, double u, double v, const RunConfig& cfg) {
  const PauliDiagonalMap m = qubit_family(family, u, v);
  const QubitChannel q = to_channel(m, cfg.tol);
  const AffineBallMap phi = to_bloch_affine(m);
  const MaxNorm mx = max_norm_on_sphere(phi);
  json r = {{"case", family},
            {"u", u},
            {"v", v},
            {"lambda", {m.lambda1, m.lambda2, m.lambda3}},
            {"t", m.t},
            {"superop", to_json(q.superop)},
            {"completely_positive", q.completely_positive},
            {"min_choi_eigenvalue", q.min_choi_eigenvalue},
            {"max_norm", mx.max},
            {"ball_positive", mx.max <= 1.0 + cfg.tol}};
  if (mx.max <= 1.0 + cfg.tol) r["contacts"] = to_json(contact_points(phi, cfg.tol, cfg.samples, cfg.seed));
  r["preserves_transition_probs"] =
      preserves_transition_probs(q.superop, cfg.samples, cfg.seed, cfg.tol).preserves;
  bool extreme = false;
  if (q.kraus) {
    r["kraus"] = to_json(*q.kraus);
    const ExtremalityReport e = choi_extremality(*q.kraus, ExtremalityMode::TracePreserving, cfg.tol);
    r["extremality"] = to_json(e);
    extreme = e.extreme;
  }
  return {r, q.completely_positive && extreme};
}

/// Searches random qubit channels for a fix-extreme map that is not Wigner.
/// Asserts nothing; reports what was found.
inline Outcome probe_outcome(int channels, int max_kraus, const RunConfig& cfg) {
  int certified = 0, certified_wigner = 0;
  json candidates = json::array();
  for (int i = 0; i < channels; ++i) {
    Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
    const int s = 1 + i % max_kraus;
    const KrausChannel ch = random_channel(2, s, rng);
    const FixExtremeCertificate c = fix_extreme_certificate(ch, cfg.restarts, splitmix64(cfg.seed + i), cfg.tol);
    if (!c.certified) continue;
    ++certified;
    if (classify_wigner(ch, cfg.tol, cfg.samples, cfg.seed).branch != WignerBranch::NotWigner) {
      ++certified_wigner;
    } else {
      candidates.push_back({{"index", i}, {"kraus_count", s}, {"channel", to_json(ch)}});
    }
  }
  return {{{"channels", channels},
           {"max_kraus", max_kraus},
           {"fix_extreme", certified},
           {"fix_extreme_wigner", certified_wigner},
           {"fix_extreme_not_wigner", candidates}},
          true};
}

}  // namespace cli

/// Runs one invocation; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = config_from_environment();
  } catch (const std::exception& e) {
    err << "error: " << kConfigEnv << ": " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Positive and completely positive maps on quantum state spaces", "posmaps"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "numerical tolerance");
  app.add_option("--restarts", cfg.restarts, "multistart restarts for pure-image searches");
  app.add_option("--samples", cfg.samples, "sample count for sampled checks");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("-o,--output", cfg.output, "write the report here instead of stdout");

  std::string file, mode = "tp", what, map_file;
  bool want_cp = false, want_tp = false, want_unital = false, want_positive = false;
  int family = 1, grid = 10000, probe_channels = 20, probe_kraus = 3;
  double u = 0.0, v = 0.0, alpha = 1.0;

  std::string command;
  std::function<cli::Outcome()> action;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };
  auto file_arg = [&](CLI::App* s) { s->add_option("file", file, "channel, choi or superop JSON file")->required(); };

  CLI::App* s_choi = sub("choi", "Choi matrix and complete-positivity report");
  file_arg(s_choi);
  CLI::App* s_kraus = sub("kraus", "Kraus operators from the Choi matrix");
  file_arg(s_kraus);
  CLI::App* s_check = sub("check", "complete positivity, trace preservation, unitality");
  file_arg(s_check);
  s_check->add_flag("--cp", want_cp);
  s_check->add_flag("--tp", want_tp);
  s_check->add_flag("--unital", want_unital);
  s_check->add_flag("--positive-sample", want_positive, "sampled necessary check for positivity");
  CLI::App* s_ext = sub("extremal", "extremality of a completely positive map");
  file_arg(s_ext);
  s_ext->add_option("--mode", mode, "unital | tp | bistochastic | cone")->capture_default_str();
  CLI::App* s_t5 = sub("theorem5", "invertible extreme channel conditions");
  file_arg(s_t5);
  CLI::App* s_wig = sub("wigner", "Wigner map classification");
  file_arg(s_wig);
  CLI::App* s_pure = sub("pure-image", "pure states with pure images");
  file_arg(s_pure);
  CLI::App* s_fix = sub("fix-extreme", "fix-extreme certificate");
  file_arg(s_fix);
  CLI::App* s_qubit = sub("qubit", "Pauli-diagonal qubit families");
  s_qubit->add_option("--case", family, "1, 2 or 3")->required();
  s_qubit->add_option("--u", u)->required();
  s_qubit->add_option("--v", v);
  CLI::App* s_ball = sub("ball", "contact points of an affine map of the unit ball");
  s_ball->add_option("--map", map_file, "affine_ball JSON file")->required();
  CLI::App* s_plane = sub("plane", "planar convex body check");
  s_plane->add_option("--alpha", alpha)->capture_default_str();
  s_plane->add_option("--grid", grid)->capture_default_str();
  CLI::App* s_rep = sub("reproduce", "CSV data: fg, fpp, fmg, ellipsoid");
  s_rep->add_option("what", what)->required()->check(CLI::IsMember({"fg", "fpp", "fmg", "ellipsoid"}));
  s_rep->add_option("--alpha", alpha, "g coefficient (default 1.01)");
  s_rep->add_option("--grid", grid, "grid points (default 1000)");
  s_rep->add_option("--case", family);
  s_rep->add_option("--u", u);
  s_rep->add_option("--v", v);
  CLI::App* s_probe = sub("probe", "search random qubit channels for fix-extreme non-Wigner maps");
  s_probe->add_option("--channels", probe_channels)->capture_default_str();
  s_probe->add_option("--max-kraus", probe_kraus)->capture_default_str();

  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--tol" || a == "--restarts" || a == "--samples" || a == "--seed" || a == "-o" || a == "--output") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "error: unknown subcommand '" << a << "'\n\n" << app.help();
      return 2;
    }
    break;
  }

  std::vector<const char*> argv{"posmaps"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  auto emit = [&](const std::string& text) {
    if (cfg.output.empty()) {
      out << text;
      return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw InputError("cannot write " + cfg.output);
    f << text;
  };

  try {
    cfg.validate();
    if (command == "reproduce") {
      std::unique_ptr<AffineBallMap> ell;
      if (what == "ellipsoid") ell = std::make_unique<AffineBallMap>(to_bloch_affine(qubit_family(family, u, v)));
      const bool alpha_given = s_rep->count("--alpha") > 0;
      const bool grid_given = s_rep->count("--grid") > 0;
      emit(cli::reproduce_csv(what, alpha_given ? alpha : 1.01, grid_given ? grid : 1000, ell.get(), cfg.samples));
      return 0;
    }

    cli::Outcome o;
    json input = file.empty() ? json(nullptr) : json(file);
    if (command == "choi" || command == "kraus" || command == "check" || command == "extremal" ||
        command == "theorem5" || command == "wigner" || command == "pure-image" || command == "fix-extreme") {
      const cli::LoadedMap m = cli::load_map(file, cfg.tol);
      json choi_rep = {{"completely_positive", m.choi.is_psd},
                       {"min_eigenvalue", m.choi.min_eigenvalue},
                       {"numeric_rank", m.choi.numeric_rank}};
      if (command == "choi") {
        o = {{{"input_type", m.kind}, {"choi", to_json(choi_of_map(m.superop))}, {"report", choi_rep}}, true};
      } else if (command == "kraus") {
        json r = {{"input_type", m.kind}, {"report", choi_rep}};
        if (m.kraus) r["channel"] = to_json(*m.kraus);
        o = {r, m.kraus.has_value()};
      } else if (command == "check") {
        if (!want_cp && !want_tp && !want_unital && !want_positive) want_cp = want_tp = want_unital = true;
        json r = {{"input_type", m.kind}};
        bool pass = true;
        const TpUnitalReport tu = tp_unital_report(m.superop, cfg.tol);
        if (want_cp) {
          r["cp"] = choi_rep;
          pass = pass && m.choi.is_psd;
        }
        if (want_tp) {
          r["tp"] = {{"trace_preserving", tu.trace_preserving}, {"residual", tu.tp_residual}};
          pass = pass && tu.trace_preserving;
        }
        if (want_unital) {
          r["unital"] = {{"unital", tu.unital}, {"residual", tu.unital_residual}};
          pass = pass && tu.unital;
        }
        if (want_positive) {
          const int n = m.superop.dim();
          double worst = std::numeric_limits<double>::infinity();
          for (int i = 0; i < cfg.samples; ++i) {
            Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
            const PureState p(random_unit_vector(n, rng));
            worst = std::min(worst, psd_report(apply(m.superop, p.op()), cfg.tol).min_eigenvalue);
          }
          const bool ok = worst >= -cfg.tol;
          r["positive_sample"] = {{"passed", ok},
                                  {"samples", cfg.samples},
                                  {"min_image_eigenvalue", worst},
                                  {"note", "sampled necessary check: a pass does not prove positivity"}};
          if (n == 2 && tu.trace_preserving) {
            const double mx = max_norm_on_sphere(to_bloch_affine(m.superop)).max;
            r["positive_sample"]["bloch_max_norm"] = mx;
            r["positive_sample"]["qubit_positive"] = mx <= 1.0 + cfg.tol;
          }
          pass = pass && ok;
        }
        o = {r, pass};
      } else if (command == "extremal") {
        const ExtremalityReport e = choi_extremality(cli::require_kraus(m, command), parse_mode(mode), cfg.tol);
        o = {to_json(e), e.extreme};
      } else if (command == "theorem5") {
        const Theorem5Report t = invertible_extreme_report(cli::require_kraus(m, command), cfg.restarts, cfg.seed, cfg.tol);
        o = {to_json(t), t.cond_a_inverse_cp && t.cond_b_single_invertible_kraus && t.cond_de_rank_one_images};
      } else if (command == "wigner") {
        const WignerClassification w =
            cli::with_map(m, [&](const auto& map) { return classify_wigner(map, cfg.tol, cfg.samples, cfg.seed); });
        o = {to_json(w), w.branch != WignerBranch::NotWigner};
      } else if (command == "pure-image") {
        const PureImageResult p =
            cli::with_map(m, [&](const auto& map) { return find_pure_images(map, cfg.restarts, cfg.seed); });
        o = {to_json(p), !p.witnesses.empty()};
      } else {
        const FixExtremeCertificate c = cli::with_map(
            m, [&](const auto& map) { return fix_extreme_certificate(map, cfg.restarts, cfg.seed, cfg.tol); });
        o = {to_json(c), c.certified};
      }
    } else if (command == "qubit") {
      o = cli::qubit_outcome(family, u, v, cfg);
    } else if (command == "ball") {
      input = map_file;
      const AffineBallMap phi = ball_map_from_json(read_json_file(map_file));
      const MaxNorm mx = max_norm_on_sphere(phi);
      if (mx.max > 1.0 + cfg.tol) {
        o = {{{"ball_positive", false}, {"max_norm", mx.max}}, false};
      } else {
        const BallExtremalityReport b = ball_extremality_report(phi, cfg.tol, cfg.samples, cfg.seed);
        o = {{{"ball_positive", true},
              {"max_norm", mx.max},
              {"fix_extreme", b.fix_extreme},
              {"consistent_with_orthogonality", b.consistent_with_theorem3},
              {"contacts", to_json(b.contacts)}},
             b.fix_extreme};
      }
    } else if (command == "plane") {
      const PlanarReport p = planar_example_check(alpha, grid);
      o = {to_json(p), p.f_concave && p.f_ge_alpha_g_everywhere && p.t_swaps_endpoints};
      o.result["alpha"] = alpha;
      o.result["grid"] = grid;
    } else {
      if (probe_channels < 1 || probe_kraus < 1) throw InputError("probe: --channels and --max-kraus must be >= 1");
      o = cli::probe_outcome(probe_channels, probe_kraus, cfg);
    }

    json report = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"command", command},
                   {"input", input},
                   {"config", to_json(cfg)},
                   {"seed", cfg.seed},
                   {"status", o.pass ? "pass" : "fail"},
                   {"result", o.result}};
    emit(report.dump(2) + "\n");
    return o.pass ? 0 : 1;
  } catch (const ModeError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotCompletelyPositive& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotBallPositive& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace posmaps
