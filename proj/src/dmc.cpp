#include "seqppm/dmc.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "seqppm/rng.hpp"

namespace seqppm::channel {

void DmcSpec::validate() const {
  if (num_inputs == 0 || num_outputs == 0)
    throw std::domain_error("DmcSpec: empty alphabet");
  if (cost.size() != num_inputs || transition.size() != num_inputs)
    throw std::domain_error("DmcSpec: row count mismatch");
  for (std::size_t x = 0; x < num_inputs; ++x) {
    if (cost[x] < 0.0) throw std::domain_error("DmcSpec: negative cost");
    if (transition[x].size() != num_outputs)
      throw std::domain_error("DmcSpec: transition row length mismatch");
    double sum = 0.0;
    for (double p : transition[x]) {
      if (p < 0.0 || p > 1.0) throw std::domain_error("DmcSpec: probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::domain_error("DmcSpec: transition row does not sum to 1");
  }
  if (zero_cost_input >= num_inputs || cost[zero_cost_input] != 0.0)
    throw std::domain_error("DmcSpec: designated zero-cost input must have cost 0");
}

DmcSpec load_dmc(std::istream& in) {
  DmcSpec spec;
  if (!(in >> spec.num_inputs >> spec.num_outputs))
    throw std::domain_error("DmcSpec: missing alphabet sizes");
  spec.cost.resize(spec.num_inputs);
  for (auto& c : spec.cost)
    if (!(in >> c)) throw std::domain_error("DmcSpec: truncated cost row");
  spec.transition.assign(spec.num_inputs, std::vector<double>(spec.num_outputs));
  for (auto& row : spec.transition)
    for (auto& p : row)
      if (!(in >> p)) throw std::domain_error("DmcSpec: truncated transition matrix");
  // The first zero-cost input is the designated free symbol.
  std::size_t x0 = spec.num_inputs;
  for (std::size_t x = 0; x < spec.num_inputs; ++x)
    if (spec.cost[x] == 0.0) {
      x0 = x;
      break;
    }
  if (x0 == spec.num_inputs) throw std::domain_error("DmcSpec: no zero-cost input");
  spec.zero_cost_input = x0;
  spec.validate();
  return spec;
}

DmcSpec load_dmc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("DmcSpec: cannot open " + path);
  return load_dmc(in);
}

std::size_t dmc_sample(const DmcSpec& spec, std::uint64_t seed,
                       std::span<const std::uint64_t> address, std::size_t x) {
  if (x >= spec.num_inputs) throw std::domain_error("dmc_sample: invalid input symbol");
  std::uint64_t h = rng::hash_words({rng::kDmcOutput, seed});
  for (std::uint64_t w : address) h = rng::hash_words({h, w});
  double u = rng::to_unit(h);
  const auto& row = spec.transition[x];
  double acc = 0.0;
  for (std::size_t y = 0; y + 1 < row.size(); ++y) {
    acc += row[y];
    if (u < acc) return y;
  }
  return row.size() - 1;
}

}  // namespace seqppm::channel
