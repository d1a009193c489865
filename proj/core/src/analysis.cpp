#include "qcons/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qcons/error.hpp"

namespace qcons {

namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ConfigError("bound does not fit in 64 bits");
  }
  return out;
}

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ConfigError("bound does not fit in 64 bits");
  }
  return out;
}

std::uint64_t pred(std::uint64_t n) { return n == 0 ? 0 : n - 1; }

}  // namespace

std::uint64_t convergence_bound(std::uint64_t n, std::uint64_t m) {
  return add(mul(n, n), mul(pred(n), mul(m, m)));
}

std::uint64_t transmission_bound(std::uint64_t n, std::uint64_t m) {
  return add(n, mul(pred(n), m));
}

std::uint64_t computation_bound(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree) {
  return add(1, mul(pred(n), add(add(m, 1), max_in_degree)));
}

ComplianceRecord check_bounds(std::size_t n, std::size_t m, std::size_t max_in_degree,
                              std::size_t converged_round, std::span<const NodeState> nodes) {
  ComplianceRecord record;
  record.convergence_bound = convergence_bound(n, m);
  record.transmission_bound = transmission_bound(n, m);
  record.computation_bound = computation_bound(n, m, max_in_degree);
  record.observed_rounds = converged_round;
  if (record.observed_rounds > record.convergence_bound) {
    record.flags.push_back("converged at round " + std::to_string(converged_round) +
                           " > bound " + std::to_string(record.convergence_bound));
  }
  for (const NodeState& node : nodes) {
    record.max_node_transmissions = std::max(record.max_node_transmissions, node.tx_count);
    record.max_node_computations = std::max(record.max_node_computations, node.comp_count);
    if (node.tx_count > record.transmission_bound) {
      record.flags.push_back("v" + std::to_string(node.id + 1) + " transmitted " +
                             std::to_string(node.tx_count) + " times > bound " +
                             std::to_string(record.transmission_bound));
    }
    if (node.comp_count > record.computation_bound) {
      record.flags.push_back("v" + std::to_string(node.id + 1) + " evaluated " +
                             std::to_string(node.comp_count) + " times > bound " +
                             std::to_string(record.computation_bound));
    }
  }
  return record;
}

void EnergyParams::validate() const {
  if (alpha3 < 0 || alpha4 < 0 || alpha11 < 0 || alpha2 < 0 || distance < 0) {
    throw ConfigError("energy constants and distance must be non-negative");
  }
  if (!(path_loss_exponent >= 1)) {
    throw ConfigError("path-loss exponent must be at least 1");
  }
}

std::uint64_t ceil_log2(std::uint64_t x) {
  if (x <= 1) {
    return 0;
  }
  return static_cast<std::uint64_t>(std::bit_width(x - 1));
}

std::uint64_t payload_bits(std::uint64_t n, std::uint64_t sum_abs_y) {
  return ceil_log2(n) + ceil_log2(sum_abs_y);
}

MemoryRequirement memory_requirement(std::uint64_t n, std::uint64_t in_degree,
                                     std::uint64_t sum_abs_y) {
  const std::uint64_t per_width = add(3, mul(2, in_degree));
  return {add(7, mul(4, in_degree)),
          add(2, add(mul(per_width, ceil_log2(n)), mul(per_width, ceil_log2(sum_abs_y))))};
}

double energy_sense(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree,
                    std::uint64_t bits, const EnergyParams& params) {
  return params.alpha3 * static_cast<double>(m + 1 + max_in_degree) *
         static_cast<double>(pred(n)) * static_cast<double>(bits);
}

double energy_comp(std::uint64_t n, std::uint64_t max_in_degree, std::uint64_t bits,
                   const EnergyParams& params) {
  const auto d = static_cast<double>(max_in_degree);
  return params.alpha4 * (1.0 + 2.0 * d * d) * static_cast<double>(pred(n)) *
         static_cast<double>(bits);
}

double energy_trans(std::uint64_t n, std::uint64_t m, std::uint64_t bits, const EnergyParams& params) {
  const double per_bit =
      params.alpha11 + params.alpha2 * std::pow(params.distance, params.path_loss_exponent);
  return static_cast<double>(pred(n)) * per_bit * static_cast<double>(m + 1) *
         static_cast<double>(bits);
}

ResourceReport energy_total(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree,
                            std::uint64_t sum_abs_y, const EnergyParams& params) {
  params.validate();
  ResourceReport r;
  r.convergence_bound = convergence_bound(n, m);
  r.tx_bound = transmission_bound(n, m);
  r.comp_bound = computation_bound(n, m, max_in_degree);
  const MemoryRequirement memory = memory_requirement(n, max_in_degree, sum_abs_y);
  r.memory_slots = memory.slots;
  r.memory_bits = memory.bits;
  r.bit_width = payload_bits(n, sum_abs_y);
  r.p_sense = energy_sense(n, m, max_in_degree, r.bit_width, params);
  r.p_comp = energy_comp(n, max_in_degree, r.bit_width, params);
  r.p_trans = energy_trans(n, m, r.bit_width, params);
  r.p_total = r.p_sense + r.p_comp + r.p_trans;
  return r;
}

std::uint64_t sum_abs(std::span<const Integer> values) {
  std::uint64_t total = 0;
  for (Integer v : values) {
    const std::uint64_t mag =
        v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
    if (__builtin_add_overflow(total, mag, &total)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return total;
}

ResourceReport energy_total(const Digraph& g, std::span<const Integer> initial_values,
                            const EnergyParams& params) {
  return energy_total(g.node_count(), g.edge_count(), g.max_in_degree(), sum_abs(initial_values),
                      params);
}

std::vector<ObservedEnergy> observed_energy(const RunReport& report, std::uint64_t bits,
                                            const EnergyParams& params) {
  const double width = static_cast<double>(bits);
  const double per_tx_bit =
      params.alpha11 + params.alpha2 * std::pow(params.distance, params.path_loss_exponent);
  std::vector<ObservedEnergy> out;
  out.reserve(report.traffic.size());
  for (std::size_t j = 0; j < report.traffic.size(); ++j) {
    const NodeTraffic& t = report.traffic[j];
    ObservedEnergy e;
    e.p_sense = params.alpha3 * static_cast<double>(t.states_received + t.masses_received) * width;
    e.p_comp = params.alpha4 * static_cast<double>(2 * t.states_received + t.mass_merges) * width;
    e.p_trans = per_tx_bit * static_cast<double>(report.final_nodes[j].tx_count) * width;
    e.p_total = e.p_sense + e.p_comp + e.p_trans;
    out.push_back(e);
  }
  return out;
}

ComplianceRecord compare_run(const RunReport& report, const Digraph& g, const EnergyParams& params) {
  params.validate();
  ComplianceRecord record = check_bounds(g.node_count(), g.edge_count(), g.max_in_degree(),
                                         report.converged_round, report.final_nodes);
  if (report.node_count != g.node_count() || report.edge_count != g.edge_count() ||
      report.final_nodes.size() != g.node_count()) {
    record.flags.emplace_back("report does not describe the given digraph");
  }
  return record;
}

}  // namespace qcons
