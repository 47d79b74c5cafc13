#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "xalign/report.hpp"

using namespace xalign;

namespace {

std::vector<long long> parse_ints(const std::string& s, std::size_t expect,
                                  const char* what) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw UsageError(std::string(what) + ": expected a comma-separated integer list, got '" +
                       s + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expect) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(expect) +
                     " comma-separated values, got " + std::to_string(out.size()));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": expected a comma-separated number list, got '" +
                       s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

AntennaConfig parse_antennas(const std::string& s) {
  auto v = parse_ints(s, 4, "--antennas");
  for (long long x : v) {
    if (x < 0 || x > 1'000'000) throw UsageError("--antennas: counts out of range");
  }
  AntennaConfig cfg{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                    static_cast<int>(v[3])};
  cfg.validate();
  return cfg;
}

IntTuple parse_dof(const std::string& s) {
  auto v = parse_ints(s, 4, "--dof");
  IntTuple d;
  for (int i = 0; i < 4; ++i) {
    if (v[i] < 0 || v[i] > 1'000'000) throw UsageError("--dof: stream counts must be >= 0");
    d.d[static_cast<std::size_t>(i)] = static_cast<int>(v[i]);
  }
  return d;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw UsageError("cannot open output path: " + out_path);
  f << text;
}

// Decouples the construction's random draws from the channel draws that use
// the user-facing seed directly.
RngSeed plan_seed(RngSeed seed) { return RngSeed{seed.value ^ 0x9e3779b97f4a7c15ull}; }

Json checks_json(const CognitiveChecks& c) {
  return Json{
      {"rank_checks", Json{{"passed", c.passed}, {"total", c.total}}},
      {"rx1", Json{{"desired_rank", c.rx1_desired_rank},
                   {"desired_expected", c.rx1_desired_expected},
                   {"interference_rank", c.rx1_interference_rank},
                   {"interference_expected", c.rx1_interference_expected}}},
      {"rx2", Json{{"desired_rank", c.rx2_desired_rank},
                   {"desired_expected", c.rx2_desired_expected},
                   {"interference_rank", c.rx2_interference_rank},
                   {"interference_expected", c.rx2_interference_expected}}},
      {"residual", round12(c.residual)},
      {"ok", c.ok()}};
}

struct Options {
  std::string antennas;
  std::string dof;
  int m = 0;
  std::string scheme;
  std::string ic_case;
  std::uint64_t seed = 1;
  std::string snr = "40,50,60";
  double tol = kRankTol;
  std::string baseline = "aligned";
  std::string format = "json";
  std::string out_path;
  int sweep_max = 4;
  int jobs = 1;
};

IcCase parse_ic_case(const std::string& s) {
  if (s == "both-tx") return IcCase::both_tx;
  if (s == "both-rx") return IcCase::both_rx;
  if (s == "tx-and-rx") return IcCase::tx_and_rx;
  throw UsageError("--case: expected both-tx, both-rx, or tx-and-rx");
}

// Everything cmd_construct and cmd_simulate share: channels matched to the
// scheme's extension, the plan, and the echo of the inputs that shaped them.
struct Construction {
  ChannelSet channels;  // extension matches the plan
  CognitivePlan plan;
  Json input;
  Json body;  // construct-report body
};

Construction build_scheme(const Options& opt) {
  if (opt.scheme.empty()) throw UsageError("--scheme is required");
  const RngSeed seed{opt.seed};
  Construction c;
  c.input["scheme"] = opt.scheme;
  c.input["seed"] = opt.seed;
  c.input["tol"] = round12(opt.tol);

  auto square_config = [&]() {
    if (opt.m < 1) throw UsageError("--m: antenna count must be >= 1");
    return AntennaConfig{opt.m, opt.m, opt.m, opt.m};
  };

  if (opt.scheme == "theorem3") {
    if (opt.antennas.empty() || opt.dof.empty())
      throw UsageError("theorem3 scheme needs --antennas and --dof");
    const AntennaConfig cfg = parse_antennas(opt.antennas);
    const IntTuple d = parse_dof(opt.dof);
    c.input["antennas"] = Json{cfg.m1, cfg.m2, cfg.n1, cfg.n2};
    c.input["dof"] = Json{d.d[0], d.d[1], d.d[2], d.d[3]};
    c.channels = random_channel_set(cfg, seed);
    BeamformingPlan plan = construct_zero_forcing_plan(c.channels, d, plan_seed(seed));
    c.body["plan"] = plan_to_json(plan);
    c.body["interference_dims"] =
        Json{{"rx1", count_interference_dims(cfg, d, 1).dims},
             {"rx2", count_interference_dims(cfg, d, 2).dims}};
    c.body["diagnostics"] = diagnostics_to_json(diagnose(c.channels, plan, opt.tol));
    c.plan = CognitivePlan{std::move(plan), {}, {}};
    return c;
  }
  if (opt.scheme == "theorem5") {
    const AntennaConfig cfg = square_config();
    c.input["m"] = opt.m;
    const ChannelSet base = random_channel_set(cfg, seed);
    BeamformingPlan plan = construct_three_symbol_plan(base, plan_seed(seed));
    c.channels = extend(base, 3);
    c.body["plan"] = plan_to_json(plan);
    c.body["interference_dims"] =
        Json{{"rx1", count_interference_dims(cfg, plan.counts, 1).dims},
             {"rx2", count_interference_dims(cfg, plan.counts, 2).dims}};
    c.body["diagnostics"] = diagnostics_to_json(diagnose(c.channels, plan, opt.tol));
    c.plan = CognitivePlan{std::move(plan), {}, {}};
    return c;
  }
  if (opt.scheme == "time-varying") {
    if (opt.m != 0 && opt.m != 1)
      throw UsageError("time-varying scheme is single-antenna; omit --m or pass --m 1");
    c.input["m"] = 1;
    c.channels = per_slot_channel_set(seed, 3);
    BeamformingPlan plan = construct_time_varying_plan(c.channels);
    c.body["plan"] = plan_to_json(plan);
    const AntennaConfig cfg{1, 1, 1, 1};
    c.body["interference_dims"] =
        Json{{"rx1", count_interference_dims(cfg, plan.counts, 1).dims},
             {"rx2", count_interference_dims(cfg, plan.counts, 2).dims}};
    c.body["diagnostics"] = diagnostics_to_json(diagnose(c.channels, plan, opt.tol));
    c.plan = CognitivePlan{std::move(plan), {}, {}};
    return c;
  }
  if (opt.scheme == "cognitive-tx" || opt.scheme == "cognitive-rx" ||
      opt.scheme == "cognitive-ic") {
    const AntennaConfig cfg = square_config();
    c.input["m"] = opt.m;
    const ChannelSet base = random_channel_set(cfg, seed);
    if (opt.scheme == "cognitive-tx") {
      c.plan = cognitive_tx_plan(base, plan_seed(seed));
    } else if (opt.scheme == "cognitive-rx") {
      c.plan = cognitive_rx_plan(base, plan_seed(seed));
    } else {
      if (opt.ic_case.empty())
        throw UsageError("cognitive-ic needs --case {both-tx|both-rx|tx-and-rx}");
      c.input["case"] = opt.ic_case;
      c.plan = cognitive_interference_plan(base, parse_ic_case(opt.ic_case), plan_seed(seed));
    }
    c.channels = c.plan.plan.extension == 1 ? base : extend(base, c.plan.plan.extension);
    c.body["cognitive"] = cognitive_to_json(c.plan);
    c.body["checks"] = checks_json(verify_cognitive_plan(base, c.plan));
    return c;
  }
  throw UsageError("--scheme: expected theorem3, theorem5, time-varying, cognitive-tx, "
                   "cognitive-rx, or cognitive-ic");
}

int run(const CLI::App& app, Options& opt, const CLI::App* region, const CLI::App* construct,
        const CLI::App* simulate, const CLI::App* sweep) {
  (void)app;
  if (region->parsed()) {
    if (opt.format != "json") throw UsageError("region supports only --format json");
    const AntennaConfig cfg = parse_antennas(opt.antennas);
    Json input{{"antennas", Json{cfg.m1, cfg.m2, cfg.n1, cfg.n2}}};
    emit(dump_json(make_report("region", input, region_to_json(cfg))), opt.out_path);
    return 0;
  }
  if (construct->parsed()) {
    if (opt.format != "json") throw UsageError("construct supports only --format json");
    Construction c = build_scheme(opt);
    emit(dump_json(make_report("construct", c.input, std::move(c.body))), opt.out_path);
    return 0;
  }
  if (simulate->parsed()) {
    if (opt.format != "json" && opt.format != "csv")
      throw UsageError("--format: expected json or csv");
    if (opt.baseline != "aligned" && opt.baseline != "misaligned")
      throw UsageError("--baseline: expected aligned or misaligned");

    SnrSweep snr{parse_doubles(opt.snr, "--snr")};
    snr.validate();

    Construction c = build_scheme(opt);
    Json snr_json = Json::array();
    for (double v : snr.db) snr_json.push_back(round12(v));
    c.input["snr"] = std::move(snr_json);
    c.input["baseline"] = opt.baseline;
    if (opt.baseline == "misaligned") {
      if (opt.scheme != "theorem3")
        throw UsageError("--baseline misaligned applies to the theorem3 scheme only");
      const IntTuple d = parse_dof(opt.dof);
      BeamformingPlan plan =
          construct_misaligned_plan(c.channels, d, plan_seed(RngSeed{opt.seed}));
      c.plan = CognitivePlan{std::move(plan), {}, {}};
      c.body["diagnostics"] =
          diagnostics_to_json(diagnose(c.channels, c.plan.plan, opt.tol));
    }

    const RateCurve curve = rate_curve(c.channels, c.plan, snr, opt.tol);
    if (opt.format == "csv") {
      emit(curve_to_csv(curve), opt.out_path);
      return 0;
    }
    const SlopeEstimate slope = estimate_dof(c.channels, c.plan, snr, opt.tol);
    c.body["curve"] = curve_to_json(curve);
    c.body["slope"] = slope_to_json(slope);
    emit(dump_json(make_report("simulate", c.input, std::move(c.body))), opt.out_path);
    return 0;
  }
  if (sweep->parsed()) {
    if (opt.format != "json") throw UsageError("sweep supports only --format json");
    if (opt.sweep_max > 8) throw UsageError("--max: sweep grid bounds are limited to 8");
    if (opt.jobs < 1) throw UsageError("--jobs must be >= 1");
    Json input{{"max", opt.sweep_max}, {"jobs", opt.jobs}};
    Json body;
    if (opt.sweep_max < 1) {
      body = sweep_to_json({});
    } else {
      body = sweep_to_json(sweep_grid(1, opt.sweep_max, opt.jobs));
    }
    emit(dump_json(make_report("sweep", input, std::move(body))), opt.out_path);
    return 0;
  }
  throw UsageError("expected a subcommand: region, construct, simulate, or sweep");
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Degrees-of-freedom regions, interference-alignment constructions, and "
               "rate simulations for the two-user MIMO X channel"};
  app.require_subcommand(0, 1);

  CLI::App* region = app.add_subcommand("region", "Outer-bound inequalities, vertices, and totals");
  region->add_option("--antennas", opt.antennas, "m1,m2,n1,n2")->required();

  CLI::App* construct = app.add_subcommand("construct", "Build a beamforming scheme");
  CLI::App* simulate = app.add_subcommand("simulate", "Rate curve and DoF slope of a scheme");
  for (CLI::App* sub : {construct, simulate}) {
    sub->add_option("--scheme", opt.scheme,
                    "theorem3|theorem5|time-varying|cognitive-tx|cognitive-rx|cognitive-ic")
        ->required();
    sub->add_option("--antennas", opt.antennas, "m1,m2,n1,n2 (theorem3)");
    sub->add_option("--dof", opt.dof, "d11,d12,d21,d22 (theorem3)");
    sub->add_option("--m", opt.m, "antennas per node (square schemes)");
    sub->add_option("--case", opt.ic_case, "both-tx|both-rx|tx-and-rx (cognitive-ic)");
    sub->add_option("--seed", opt.seed, "RNG seed (default 1)");
    sub->add_option("--tol", opt.tol, "rank tolerance");
  }
  simulate->add_option("--snr", opt.snr, "dB list (default 40,50,60)");
  simulate->add_option("--baseline", opt.baseline, "aligned|misaligned");

  CLI::App* sweep = app.add_subcommand("sweep", "Region self-checks over an antenna grid");
  sweep->add_option("--max", opt.sweep_max, "grid upper bound per antenna count (default 4)");
  sweep->add_option("--jobs", opt.jobs, "worker threads (default 1)");

  for (CLI::App* sub : {region, construct, simulate, sweep}) {
    sub->add_option("--out", opt.out_path, "write the report to this path instead of stdout");
    sub->add_option("--format", opt.format, "json|csv (csv: simulate only)");
  }

  try {
    app.parse(argc, argv);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help() << std::flush;
      return 2;
    }
    return run(app, opt, region, construct, simulate, sweep);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
