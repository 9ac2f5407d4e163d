#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ndof/modes.hpp"

namespace ndof {

struct ChannelProblem {
  std::vector<double> efficiencies;  // nu_n in [0, 1), any order
  double snr = 1.0;                  // gamma
};

struct WaterfillAllocation {
  std::vector<double> powers;  // same order as the problem's efficiencies
  double water_level = 0.0;
  double capacity_bits = 0.0;
  std::size_t active_count = 0;
};

// Maximizes sum log2(1 + gamma nu_n P_n) subject to sum P_n = 1, P_n >= 0.
WaterfillAllocation waterfill(const ChannelProblem& problem);

// Bits per channel use of an arbitrary allocation.
double capacity_bits(std::span<const double> efficiencies, double snr,
                     std::span<const double> powers);

struct CapacityRow {
  double snr;
  double capacity_bits;
  std::size_t active_count;
  double water_level;
  std::vector<double> powers;
};

std::vector<CapacityRow> capacity_vs_snr(std::span<const double> efficiencies,
                                         std::span<const double> snr_grid);

// Efficiencies from R0 I = nu (R0 + Rrho) I, sorted descending.
std::vector<double> channel_efficiencies(const ResistancePair& pair);

}  // namespace ndof
