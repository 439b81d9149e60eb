// Command-line front end: experiment dispatch with deterministic outputs.
// Every sim-* run emits a curve CSV plus a JSON run record carrying all the
// parameters needed to reproduce it. CSV bytes depend only on the flags, not
// on the worker count.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqppm/decoder.hpp"
#include "seqppm/montecarlo.hpp"
#include "seqppm/report.hpp"
#include "seqppm/theory.hpp"
#include "seqppm/unitcost.hpp"

namespace {

using json = nlohmann::json;
using namespace seqppm;

constexpr std::uint64_t kDefaultSeed = 20250101;  // fixed, never time-derived

// Reals may be written as ln2 multiples: "ln2", "4ln2", "2.5ln2".
double parse_real(const std::string& text) {
  std::string s = text;
  double factor = 1.0;
  if (s.size() >= 3 && s.compare(s.size() - 3, 3, "ln2") == 0) {
    factor = theory::kLn2;
    s = s.substr(0, s.size() - 3);
    if (s.empty()) return factor;
  }
  double value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw CLI::ValidationError("cannot parse real number '" + text + "'");
  return value * factor;
}

// "2:10" -> 2..10 inclusive; "1,2,5" -> listed values.
std::vector<int> parse_delays(const std::string& text) {
  std::vector<int> delays;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    int lo = std::stoi(text.substr(0, colon));
    int hi = std::stoi(text.substr(colon + 1));
    if (hi < lo) throw CLI::ValidationError("delay range is empty: " + text);
    for (int d = lo; d <= hi; ++d) delays.push_back(d);
  } else {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) delays.push_back(std::stoi(item));
  }
  if (delays.empty()) throw CLI::ValidationError("no delays in '" + text + "'");
  return delays;
}

// "lo:hi:count" -> count evenly spaced points, endpoints included.
std::vector<double> parse_grid(const std::string& text) {
  auto c1 = text.find(':');
  auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("grid must be lo:hi:count, got '" + text + "'");
  double lo = parse_real(text.substr(0, c1));
  double hi = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
  int count = std::stoi(text.substr(c2 + 1));
  if (count < 1) throw CLI::ValidationError("grid count must be >= 1");
  std::vector<double> grid;
  for (int i = 0; i < count; ++i)
    grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return grid;
}

struct OutputPaths {
  std::string csv;     // empty -> stdout
  std::string record;  // empty -> none
};

OutputPaths resolve_outputs(const std::string& out_flag, const std::string& record_flag,
                            const std::string& subcommand) {
  OutputPaths paths;
  paths.csv = out_flag;
  if (paths.csv.empty()) {
    if (const char* dir = std::getenv("SEQPPM_OUT_DIR"))
      paths.csv = std::string(dir) + "/" + subcommand + ".csv";
  }
  paths.record = record_flag;
  if (paths.record.empty() && !paths.csv.empty()) paths.record = paths.csv + ".json";
  return paths;
}

void emit_curve(const montecarlo::ErrorCurve& curve, const OutputPaths& paths) {
  if (paths.csv.empty()) {
    report::write_curve_csv(std::cout, curve);
  } else {
    std::ofstream out(paths.csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + paths.csv);
    report::write_curve_csv(out, curve);
  }
}

void emit_record(json record, const OutputPaths& paths, double wall_seconds) {
  record["wall_time_s"] = wall_seconds;
  if (paths.record.empty()) return;
  std::ofstream out(paths.record);
  if (!out) throw std::runtime_error("cannot open " + paths.record);
  out << record.dump(2) << '\n';
}

void attach_fit(json& record, const montecarlo::ErrorCurve& curve) {
  try {
    auto fit = montecarlo::fit_exponent(curve);
    record["fit"] = {{"slope_nats_per_bit", fit.slope},
                     {"intercept_nats", fit.intercept},
                     {"stderr", fit.stderr_slope},
                     {"points_used", fit.points_used}};
  } catch (const std::runtime_error&) {
    record["fit"] = nullptr;  // not enough usable points
  }
}

struct SimFlags {
  std::string eb_text;
  std::string rate_fraction_text;
  std::string delays_text = "0:8";
  std::uint64_t trials = 10000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  std::string out;
  std::string record;

  void add_to(CLI::App* cmd, bool with_delays = true) {
    auto* eb = cmd->add_option("--eb", eb_text, "E_b/N0 (accepts ln2 multiples)");
    auto* rf = cmd->add_option("--rate-fraction", rate_fraction_text,
                               "rate fraction R/C_inf (accepts ln2 multiples)");
    eb->excludes(rf);
    rf->excludes(eb);
    if (with_delays)
      cmd->add_option("--delays", delays_text, "delay grid: lo:hi or comma list");
    cmd->add_option("--trials", trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", seed, "base seed (default fixed, never time-derived)");
    cmd->add_option("--workers", workers, "trial-parallel worker threads")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--out", out, "curve CSV path (default stdout or $SEQPPM_OUT_DIR)");
    cmd->add_option("--record", record, "JSON run record path (default <out>.json)");
  }

  theory::ChannelSpec spec() const {
    if (eb_text.empty() == rate_fraction_text.empty())
      throw CLI::ValidationError("exactly one of --eb / --rate-fraction is required");
    double eb = eb_text.empty() ? theory::eb_from_rate_fraction(parse_real(rate_fraction_text))
                                : parse_real(eb_text);
    theory::ChannelSpec spec{eb, {}, {}};
    spec.validate();
    return spec;
  }

  json base_record(const std::string& subcommand) const {
    return {{"subcommand", subcommand},
            {"eb", spec().eb},
            {"rate_fraction", theory::rate_fraction_from_eb(spec().eb)},
            {"trials", trials},
            {"seed", seed},
            {"workers", workers}};
  }
};

int run_theory(const std::string& eb_grid, const std::string& rate_grid, double c_inf,
               const std::string& out_path) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    out = &file;
  }
  if (!eb_grid.empty()) {
    *out << "eb,rate_fraction,exponent_nats_per_bit\n";
    for (double eb : parse_grid(eb_grid))
      *out << report::format_double(eb) << ','
           << report::format_double(theory::rate_fraction_from_eb(eb)) << ','
           << report::format_double(theory::exponent_eb(eb).value) << '\n';
  } else if (!rate_grid.empty()) {
    *out << "rate,c_inf,exponent_nats_per_time,converse_nats_per_time\n";
    for (double r : parse_grid(rate_grid)) {
      double conv = (r > 0.0 && r < c_inf)
                        ? theory::converse_exponent(r, c_inf).value
                        : theory::exponent_rate(r, c_inf).value;
      *out << report::format_double(r) << ',' << report::format_double(c_inf) << ','
           << report::format_double(theory::exponent_rate(r, c_inf).value) << ','
           << report::format_double(conv) << '\n';
    }
  } else {
    throw CLI::ValidationError("theory: one of --eb-grid / --rate-grid is required");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential semi-orthogonal anytime code: simulation and analysis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags take precedence)");

  // theory
  std::string eb_grid, rate_grid, theory_out;
  double c_inf = 1.0;
  auto* theory_cmd = app.add_subcommand("theory", "closed-form exponent tables");
  theory_cmd->add_option("--eb-grid", eb_grid, "eb grid lo:hi:count (ln2 literals ok)");
  theory_cmd->add_option("--rate-grid", rate_grid, "rate grid lo:hi:count");
  theory_cmd->add_option("--c-inf", c_inf, "capacity for the rate-domain table");
  theory_cmd->add_option("--out", theory_out, "output path (default stdout)");

  // sim-genie
  SimFlags genie;
  auto* genie_cmd = app.add_subcommand("sim-genie", "genie-aided suffix error curve");
  genie.add_to(genie_cmd);

  // sim-anytime
  SimFlags anytime;
  int bit_index = 1;
  auto* anytime_cmd = app.add_subcommand("sim-anytime", "full anytime decoding error curve");
  anytime.add_to(anytime_cmd);
  anytime_cmd->add_option("--bit", bit_index, "bit position to track (1-based)")
      ->check(CLI::Range(1, decoder::kMaxAnytimeHorizon));

  // sim-block
  SimFlags block;
  std::uint64_t messages = 2;
  auto* block_cmd = app.add_subcommand("sim-block", "M-ary orthogonal block baseline");
  block.add_to(block_cmd, /*with_delays=*/false);
  block_cmd->add_option("--messages", messages, "message count M");

  // sim-feedback
  SimFlags feedback;
  int stream_length = 12;
  auto* feedback_cmd =
      app.add_subcommand("sim-feedback", "tentative-decision bandwidth-usage histogram");
  feedback.add_to(feedback_cmd, /*with_delays=*/false);
  feedback_cmd->add_option("--length", stream_length, "stream length in bit-slots")
      ->check(CLI::Range(1, decoder::kMaxAnytimeHorizon));

  // sim-cost
  std::string dmc_path, cost_delays = "0:8", cost_out, cost_record;
  std::string eb_cost_text;
  int burst_bits = 1;
  std::uint64_t cost_trials = 10000, cost_seed = kDefaultSeed;
  int cost_workers = 1;
  auto* cost_cmd = app.add_subcommand("sim-cost", "DMC capacity-per-unit-cost curve");
  cost_cmd->add_option("--dmc", dmc_path, "DMC spec file")->required();
  cost_cmd->add_option("--eb-cost", eb_cost_text, "cost budget per bit")->required();
  cost_cmd->add_option("--burst", burst_bits, "bits per burst (L)")->check(CLI::Range(1, 8));
  cost_cmd->add_option("--delays", cost_delays, "delay grid in bits");
  cost_cmd->add_option("--trials", cost_trials, "trials per point");
  cost_cmd->add_option("--seed", cost_seed, "base seed");
  cost_cmd->add_option("--workers", cost_workers, "worker threads")->check(CLI::Range(1, 256));
  cost_cmd->add_option("--out", cost_out, "curve CSV path");
  cost_cmd->add_option("--record", cost_record, "JSON run record path");

  // fit
  std::string fit_path;
  auto* fit_cmd = app.add_subcommand("fit", "re-fit a stored curve CSV");
  fit_cmd->add_option("csv", fit_path, "curve CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
    };

    if (theory_cmd->parsed()) return run_theory(eb_grid, rate_grid, c_inf, theory_out);

    if (genie_cmd->parsed()) {
      auto paths = resolve_outputs(genie.out, genie.record, "sim-genie");
      auto curve = montecarlo::run_genie_curve(genie.spec(), parse_delays(genie.delays_text),
                                               genie.trials, genie.seed,
                                               {genie.workers, 1.0});
      emit_curve(curve, paths);
      json record = genie.base_record("sim-genie");
      record["delays"] = genie.delays_text;
      attach_fit(record, curve);
      emit_record(record, paths, elapsed());
      return 0;
    }

    if (anytime_cmd->parsed()) {
      auto paths = resolve_outputs(anytime.out, anytime.record, "sim-anytime");
      auto curve = montecarlo::run_anytime_curve(anytime.spec(), bit_index,
                                                 parse_delays(anytime.delays_text),
                                                 anytime.trials, anytime.seed,
                                                 {anytime.workers, 1.0});
      emit_curve(curve, paths);
      json record = anytime.base_record("sim-anytime");
      record["delays"] = anytime.delays_text;
      record["bit"] = bit_index;
      attach_fit(record, curve);
      emit_record(record, paths, elapsed());
      return 0;
    }

    if (block_cmd->parsed()) {
      auto paths = resolve_outputs(block.out, block.record, "sim-block");
      double p = montecarlo::run_block_baseline(messages, block.spec(), block.trials,
                                                block.seed, {block.workers, 1.0});
      std::uint64_t errors = static_cast<std::uint64_t>(
          p * static_cast<double>(block.trials) + 0.5);
      montecarlo::ErrorCurve curve;
      curve.points.push_back(montecarlo::make_point(0, block.trials, errors));
      emit_curve(curve, paths);
      json record = block.base_record("sim-block");
      record["messages"] = messages;
      record["p_hat"] = p;
      record["exact_block_error"] = theory::exact_block_error(messages, block.spec().eb);
      emit_record(record, paths, elapsed());
      return 0;
    }

    if (feedback_cmd->parsed()) {
      auto paths = resolve_outputs(feedback.out, feedback.record, "sim-feedback");
      auto result = montecarlo::run_feedback_bandwidth(feedback.spec(), stream_length,
                                                       feedback.trials, feedback.seed,
                                                       {feedback.workers, 1.0});
      // CSV reuses the curve schema with d = age.
      montecarlo::ErrorCurve curve;
      for (std::size_t a = 0; a < result.age_histogram.size(); ++a)
        curve.points.push_back(montecarlo::make_point(
            static_cast<int>(a), result.observations, result.age_histogram[a]));
      emit_curve(curve, paths);
      json record = feedback.base_record("sim-feedback");
      record["length"] = stream_length;
      record["tail_slope"] = result.tail_slope;
      record["tail_slope_valid"] = result.tail_slope_valid;
      record["empirical_log2p_per_log2f"] = result.empirical_log2p_per_log2f;
      record["candidate_slope_shallow"] = result.candidate_slope_shallow;
      record["candidate_slope_steep"] = result.candidate_slope_steep;
      emit_record(record, paths, elapsed());
      return 0;
    }

    if (cost_cmd->parsed()) {
      auto paths = resolve_outputs(cost_out, cost_record, "sim-cost");
      auto dmc = channel::load_dmc_file(dmc_path);
      double eb_cost = parse_real(eb_cost_text);
      auto curve = unitcost::run_cost_curve(dmc, eb_cost, burst_bits,
                                            parse_delays(cost_delays), cost_trials,
                                            cost_seed, {cost_workers, 1.0});
      emit_curve(curve, paths);
      json record = {{"subcommand", "sim-cost"},
                     {"dmc", dmc_path},
                     {"eb_cost", eb_cost},
                     {"cost_per_delay_unit", eb_cost},
                     {"burst", burst_bits},
                     {"delays", cost_delays},
                     {"trials", cost_trials},
                     {"seed", cost_seed},
                     {"workers", cost_workers},
                     {"capacity_per_unit_cost", unitcost::capacity_per_unit_cost(dmc)}};
      attach_fit(record, curve);
      emit_record(record, paths, elapsed());
      return 0;
    }

    if (fit_cmd->parsed()) {
      std::ifstream in(fit_path);
      if (!in) throw std::runtime_error("cannot open " + fit_path);
      auto curve = report::read_curve_csv(in);
      auto fit = montecarlo::fit_exponent(curve);
      std::cout << "slope_nats_per_bit=" << report::format_double(fit.slope)
                << " intercept_nats=" << report::format_double(fit.intercept)
                << " stderr=" << report::format_double(fit.stderr_slope)
                << " points_used=" << fit.points_used << '\n';
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::length_error& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
