#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcons/bounds.hpp"
#include "qcons/digraph.hpp"
#include "qcons/engine.hpp"

namespace qcons {

/// Radio energy model constants, in nJ per bit. The defaults are the typical
/// values of the first-order radio model.
struct EnergyParams {
  double alpha3 = 50.0;   // sensing (receive)
  double alpha4 = 5.0;    // processing (stream aggregation)
  double alpha11 = 45.0;  // transmit electronics
  double alpha2 = 135.0;  // transmit amplifier
  double distance = 1.0;  // meters, same for every out-neighbor
  double path_loss_exponent = 2.0;

  /// Throws ConfigError on negative constants or an exponent below 1.
  void validate() const;
};

/// ceil(log2 x) with ceil(log2 0) = ceil(log2 1) = 0.
std::uint64_t ceil_log2(std::uint64_t x);

/// Bits per exchanged (y, z) pair: ceil(log2 n) + ceil(log2 sum|y|).
std::uint64_t payload_bits(std::uint64_t n, std::uint64_t sum_abs_y);

struct MemoryRequirement {
  std::uint64_t slots = 0;
  std::uint64_t bits = 0;

  friend bool operator==(const MemoryRequirement&, const MemoryRequirement&) = default;
};

/// Integer slots 7 + 4 d_in and the matching bit budget for one node.
MemoryRequirement memory_requirement(std::uint64_t n, std::uint64_t in_degree,
                                     std::uint64_t sum_abs_y);

double energy_sense(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree,
                    std::uint64_t bits, const EnergyParams& params);
double energy_comp(std::uint64_t n, std::uint64_t max_in_degree, std::uint64_t bits,
                   const EnergyParams& params);
double energy_trans(std::uint64_t n, std::uint64_t m, std::uint64_t bits, const EnergyParams& params);

/// Per-node worst-case resources. Memory is reported for a node with the
/// maximum in-degree.
struct ResourceReport {
  std::uint64_t convergence_bound = 0;
  std::uint64_t tx_bound = 0;
  std::uint64_t comp_bound = 0;
  std::uint64_t memory_slots = 0;
  std::uint64_t memory_bits = 0;
  std::uint64_t bit_width = 0;  // A
  double p_sense = 0.0;
  double p_comp = 0.0;
  double p_trans = 0.0;
  double p_total = 0.0;
};

ResourceReport energy_total(std::uint64_t n, std::uint64_t m, std::uint64_t max_in_degree,
                            std::uint64_t sum_abs_y, const EnergyParams& params);
ResourceReport energy_total(const Digraph& g, std::span<const Integer> initial_values,
                            const EnergyParams& params);

std::uint64_t sum_abs(std::span<const Integer> values);

/// Energy a node actually spent in a run, using the same per-bit constants:
/// every received pair is sensed, every emission is one transmission, and each
/// evaluation aggregates two streams per received state plus one per mass merge.
struct ObservedEnergy {
  double p_sense = 0.0;
  double p_comp = 0.0;
  double p_trans = 0.0;
  double p_total = 0.0;
};

std::vector<ObservedEnergy> observed_energy(const RunReport& report, std::uint64_t bits,
                                            const EnergyParams& params);

/// Re-derives the bounds for `g` and flags every observed quantity in the
/// report that exceeds them. Also flags a report that does not describe `g`.
ComplianceRecord compare_run(const RunReport& report, const Digraph& g, const EnergyParams& params);

}  // namespace qcons
