#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqppm/dmc.hpp"
#include "seqppm/montecarlo.hpp"

// Sequential capacity-per-unit-cost scheme: repeated PPM over a DMC with a
// free symbol. Bits are buffered into bursts of L; each burst activates one
// sub-slot of the burst tree and fills it with a planned multiset of costly
// inputs, every other position carrying the zero-cost input. Decoding is ML
// over log-likelihood-ratio path metrics.

namespace seqppm::unitcost {

// KL divergence D(P(.|x) || P(.|x0)) in nats. Throws std::runtime_error when
// the divergence is infinite (P(y|x0) = 0 with P(y|x) > 0).
double divergence_from_free(const channel::DmcSpec& dmc, std::size_t x);

// max over costly inputs of D(P_x || P_x0) / cost[x], nats per cost unit.
double capacity_per_unit_cost(const channel::DmcSpec& dmc);

struct BurstPlan {
  int bits_per_burst = 0;
  std::vector<std::size_t> symbols;  // channel inputs used in the active sub-slot
  double total_cost = 0.0;
  double total_divergence = 0.0;  // nats
};

// Greedy-by-divergence-per-cost multiset with total cost <= L * eb_cost;
// ties break by input index. Throws std::runtime_error when no costly input
// is affordable.
BurstPlan plan_burst(const channel::DmcSpec& dmc, int bits_per_burst, double eb_cost);

// Running encoder-side cost account. spend() enforces the causality budget
// spent <= eb_cost * bits_received.
struct CostBudget {
  double eb_cost = 0.0;
  std::uint64_t bits_received = 0;
  double spent = 0.0;

  void receive_bit() { ++bits_received; }
  void spend(double amount);
};

// Streaming burst encoder: buffers bits, emits a BurstPlan every L bits while
// keeping the CostBudget invariant.
class BurstEncoder {
 public:
  BurstEncoder(const channel::DmcSpec& dmc, int bits_per_burst, double eb_cost);

  // Feed one bit; returns the emitted plan when a burst completes.
  std::optional<BurstPlan> push_bit(int bit);

  const CostBudget& budget() const { return budget_; }

 private:
  const channel::DmcSpec& dmc_;
  int bits_per_burst_;
  int buffered_ = 0;
  CostBudget budget_;
  BurstPlan plan_;  // the same plan is reused for every burst
};

// Genie-style suffix error curve over the burst tree. Delays are in bits and
// are rounded up to whole bursts; the intervening cost of a point is
// delay * eb_cost.
montecarlo::ErrorCurve run_cost_curve(const channel::DmcSpec& dmc, double eb_cost,
                                      int bits_per_burst, const std::vector<int>& delays,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const montecarlo::RunOptions& opt = {});

}  // namespace seqppm::unitcost
