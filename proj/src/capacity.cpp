#include "ndof/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ndof/error.hpp"

namespace ndof {

WaterfillAllocation waterfill(const ChannelProblem& problem) {
  const auto& nu = problem.efficiencies;
  const double snr = problem.snr;
  require(snr > 0.0 && std::isfinite(snr), ErrorCode::InvalidArgument, "SNR must be positive");
  for (double v : nu)
    require(v >= 0.0 && std::isfinite(v), ErrorCode::InvalidArgument,
            "efficiencies must be finite and non-negative");

  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nu[a] > nu[b]; });
  const auto usable = static_cast<std::size_t>(
      std::count_if(nu.begin(), nu.end(), [](double v) { return v > 0.0; }));
  require(usable > 0, ErrorCode::NoChannel, "waterfill: all efficiencies are zero");

  // Grow the active set from the strongest mode; the water level for K active
  // modes is mu_K = (1 + sum_{i<=K} 1/(gamma nu_i)) / K. Equal efficiencies are
  // activated together so ties always share power equally.
  double inv_sum = 0.0;
  std::size_t active = 0;
  double mu = 0.0;
  std::size_t k = 0;
  while (k < usable) {
    std::size_t group_end = k + 1;
    while (group_end < usable && nu[order[group_end]] == nu[order[k]]) ++group_end;
    double trial_sum = inv_sum;
    for (std::size_t i = k; i < group_end; ++i) trial_sum += 1.0 / (snr * nu[order[i]]);
    const double trial_mu = (1.0 + trial_sum) / static_cast<double>(group_end);
    if (active > 0 && trial_mu - 1.0 / (snr * nu[order[k]]) <= 0.0) break;
    inv_sum = trial_sum;
    mu = trial_mu;
    active = group_end;
    k = group_end;
  }

  WaterfillAllocation out;
  out.powers.assign(nu.size(), 0.0);
  out.water_level = mu;
  out.active_count = active;
  for (std::size_t i = 0; i < active; ++i)
    out.powers[order[i]] = mu - 1.0 / (snr * nu[order[i]]);
  out.capacity_bits = capacity_bits(nu, snr, out.powers);
  return out;
}

double capacity_bits(std::span<const double> efficiencies, double snr,
                     std::span<const double> powers) {
  require(efficiencies.size() == powers.size(), ErrorCode::DimensionMismatch,
          "one power level per efficiency");
  double c = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) c += std::log2(1.0 + snr * efficiencies[i] * powers[i]);
  return c;
}

std::vector<CapacityRow> capacity_vs_snr(std::span<const double> efficiencies,
                                         std::span<const double> snr_grid) {
  std::vector<CapacityRow> rows;
  rows.reserve(snr_grid.size());
  const std::vector<double> nu(efficiencies.begin(), efficiencies.end());
  for (std::size_t i = 0; i < snr_grid.size(); ++i) {
    require(snr_grid[i] > 0.0, ErrorCode::InvalidArgument, "SNR grid must be positive");
    if (i > 0)
      require(snr_grid[i] > snr_grid[i - 1], ErrorCode::InvalidArgument,
              "SNR grid must be ascending");
    auto w = waterfill({nu, snr_grid[i]});
    rows.push_back({snr_grid[i], w.capacity_bits, w.active_count, w.water_level,
                    std::move(w.powers)});
  }
  return rows;
}

std::vector<double> channel_efficiencies(const ResistancePair& pair) {
  pair.validate();
  const Eigen::MatrixXcd R = pair.R0 + pair.Rrho;
  Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (R + R.adjoint()));
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "R = R0 + Rrho is not positive definite");
  // H^H H = G^-H R0 G^-1 with R = G^H G.
  const auto L = llt.matrixL();
  Eigen::MatrixXcd C = L.solve(pair.R0);
  C = L.solve(C.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  std::vector<double> nu(static_cast<std::size_t>(C.rows()));
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    nu[static_cast<std::size_t>(i)] = std::clamp(es.eigenvalues()[C.rows() - 1 - i], 0.0, 1.0);
  return nu;
}

}  // namespace ndof
