#include "seqppm/unitcost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqppm/rng.hpp"

namespace seqppm::unitcost {

namespace {

constexpr int kMaxTreeDepth = 24;  // bits of burst-tree depth per window

// Per-(input, output) log-likelihood ratios against the free symbol.
std::vector<std::vector<double>> llr_table(const channel::DmcSpec& dmc) {
  std::vector<std::vector<double>> llr(dmc.num_inputs,
                                       std::vector<double>(dmc.num_outputs));
  const auto& p0 = dmc.transition[dmc.zero_cost_input];
  for (std::size_t x = 0; x < dmc.num_inputs; ++x)
    for (std::size_t y = 0; y < dmc.num_outputs; ++y)
      llr[x][y] = std::log(dmc.transition[x][y]) - std::log(p0[y]);
  return llr;
}

}  // namespace

double divergence_from_free(const channel::DmcSpec& dmc, std::size_t x) {
  if (x >= dmc.num_inputs) throw std::domain_error("divergence_from_free: bad input");
  const auto& px = dmc.transition[x];
  const auto& p0 = dmc.transition[dmc.zero_cost_input];
  double d = 0.0;
  for (std::size_t y = 0; y < dmc.num_outputs; ++y) {
    if (px[y] == 0.0) continue;
    if (p0[y] == 0.0)
      throw std::runtime_error(
          "divergence_from_free: infinite divergence (free symbol never emits an "
          "output this input can)");
    d += px[y] * std::log(px[y] / p0[y]);
  }
  return d;
}

double capacity_per_unit_cost(const channel::DmcSpec& dmc) {
  dmc.validate();
  double best = -1.0;
  for (std::size_t x = 0; x < dmc.num_inputs; ++x) {
    if (dmc.cost[x] <= 0.0) continue;
    double ratio = divergence_from_free(dmc, x) / dmc.cost[x];
    best = std::max(best, ratio);
  }
  if (best < 0.0)
    throw std::domain_error("capacity_per_unit_cost: no input with positive cost");
  return best;
}

BurstPlan plan_burst(const channel::DmcSpec& dmc, int bits_per_burst, double eb_cost) {
  dmc.validate();
  if (bits_per_burst < 1) throw std::domain_error("plan_burst: L must be >= 1");
  if (!(eb_cost > 0.0)) throw std::domain_error("plan_burst: eb_cost must be positive");

  // Costly inputs ordered by divergence per cost, index as tie-break.
  struct Candidate {
    std::size_t x;
    double cost;
    double div;
  };
  std::vector<Candidate> cands;
  for (std::size_t x = 0; x < dmc.num_inputs; ++x)
    if (dmc.cost[x] > 0.0) cands.push_back({x, dmc.cost[x], divergence_from_free(dmc, x)});
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.div / a.cost > b.div / b.cost;
  });

  BurstPlan plan;
  plan.bits_per_burst = bits_per_burst;
  double budget = bits_per_burst * eb_cost;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& c : cands) {
      if (c.cost <= budget - plan.total_cost) {
        plan.symbols.push_back(c.x);
        plan.total_cost += c.cost;
        plan.total_divergence += c.div;
        progress = true;
        break;
      }
    }
  }
  if (plan.symbols.empty())
    throw std::runtime_error("plan_burst: budget below the cheapest costly input");
  return plan;
}

void CostBudget::spend(double amount) {
  if (amount < 0.0) throw std::domain_error("CostBudget: negative spend");
  double next = spent + amount;
  if (next > eb_cost * static_cast<double>(bits_received) + 1e-9)
    throw std::runtime_error("CostBudget: spend exceeds eb_cost * bits_received");
  spent = next;
}

BurstEncoder::BurstEncoder(const channel::DmcSpec& dmc, int bits_per_burst, double eb_cost)
    : dmc_(dmc),
      bits_per_burst_(bits_per_burst),
      budget_{eb_cost, 0, 0.0},
      plan_(plan_burst(dmc, bits_per_burst, eb_cost)) {}

std::optional<BurstPlan> BurstEncoder::push_bit(int bit) {
  if (bit != 0 && bit != 1) throw std::domain_error("BurstEncoder: bit must be 0 or 1");
  budget_.receive_bit();
  if (++buffered_ < bits_per_burst_) return std::nullopt;
  buffered_ = 0;
  budget_.spend(plan_.total_cost);
  return plan_;
}

montecarlo::ErrorCurve run_cost_curve(const channel::DmcSpec& dmc, double eb_cost,
                                      int bits_per_burst, const std::vector<int>& delays,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const montecarlo::RunOptions& opt) {
  dmc.validate();
  if (delays.empty()) throw std::domain_error("run_cost_curve: empty delay list");
  const int L = bits_per_burst;
  const BurstPlan plan = plan_burst(dmc, L, eb_cost);
  const auto llr = llr_table(dmc);
  const std::size_t x0 = dmc.zero_cost_input;

  // Window sizes in bursts per delay point: the decoded burst plus the
  // intervening ones, delays rounded up to whole bursts.
  std::vector<int> window_bursts(delays.size());
  int max_bursts = 0;
  for (std::size_t j = 0; j < delays.size(); ++j) {
    if (delays[j] < 0) throw std::domain_error("run_cost_curve: negative delay");
    window_bursts[j] = (delays[j] + L - 1) / L + 1;
    max_bursts = std::max(max_bursts, window_bursts[j]);
  }
  if (L * max_bursts > kMaxTreeDepth)
    throw std::length_error("run_cost_curve: burst window above tree-depth cap");

  struct State {
    std::vector<std::uint64_t> errors;
  };
  auto state = montecarlo::run_trials<State>(
      trials, opt.workers,
      [&](std::uint64_t trial, State& s) {
        if (s.errors.empty()) s.errors.assign(delays.size(), 0);
        auto bits = channel::random_bits(seed, trial, L * max_bursts);
        // True active sub-slot per burst depth.
        std::vector<std::uint64_t> true_sub(max_bursts);
        std::uint64_t m = 0;
        for (int j = 0; j < max_bursts; ++j) {
          for (int b = 0; b < L; ++b) m = (m << 1) | bits[j * L + b];
          true_sub[j] = m;
        }

        // LLR of one burst node: sub-slot `sub` at burst depth `burst`
        // (1-based). Observations are addressed draws; the true sub-slot's
        // positions carry the plan symbols, everything else the free symbol.
        auto node_metric = [&](int burst, std::uint64_t sub) {
          double total = 0.0;
          for (std::size_t p = 0; p < plan.symbols.size(); ++p) {
            std::size_t x_sent =
                (sub == true_sub[burst - 1]) ? plan.symbols[p] : x0;
            std::uint64_t addr[] = {trial, static_cast<std::uint64_t>(burst), sub,
                                    static_cast<std::uint64_t>(p)};
            std::size_t y = channel::dmc_sample(dmc, seed, addr, x_sent);
            total += llr[plan.symbols[p]][y];
          }
          return total;
        };

        auto subtree_best = [&](auto&& self, int burst, std::uint64_t sub,
                                int last) -> double {
          double z = node_metric(burst, sub);
          if (burst == last) return z;
          double best = -std::numeric_limits<double>::infinity();
          for (std::uint64_t c = 0; c < (std::uint64_t{1} << L); ++c)
            best = std::max(best, self(self, burst + 1, (sub << L) | c, last));
          return z + best;
        };

        for (std::size_t j = 0; j < delays.size(); ++j) {
          int last = window_bursts[j];
          double correct = subtree_best(subtree_best, 1, true_sub[0], last);
          double wrong = -std::numeric_limits<double>::infinity();
          for (std::uint64_t f = 0; f < (std::uint64_t{1} << L); ++f)
            if (f != true_sub[0])
              wrong = std::max(wrong, subtree_best(subtree_best, 1, f, last));
          if (wrong >= correct) ++s.errors[j];  // ties count as errors
        }
      },
      [](State& a, const State& b) {
        if (a.errors.empty()) a.errors.assign(b.errors.size(), 0);
        for (std::size_t i = 0; i < b.errors.size(); ++i) a.errors[i] += b.errors[i];
      });

  montecarlo::ErrorCurve curve;
  for (std::size_t j = 0; j < delays.size(); ++j)
    curve.points.push_back(montecarlo::make_point(delays[j], trials, state.errors[j]));
  return curve;
}

}  // namespace seqppm::unitcost
