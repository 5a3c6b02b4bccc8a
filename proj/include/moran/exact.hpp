#pragma once

#include <cstddef>
#include <vector>

#include "moran/dynamics.hpp"
#include "moran/graph.hpp"

namespace moran {

inline constexpr std::size_t kDefaultExactLimit = 14;

/// Which transition matrix the absorbing system is built from. Both give the
/// same absorption probabilities; Full keeps self-transitions explicitly.
enum class ChainKind { Jump, Full };

/// rho(u) = P(fixation | initial mutant set {u}), from an exact solve over
/// all 2^n configurations.
std::vector<double> fixation_vector(const WeightedGraph& g, double r, std::size_t limit = kDefaultExactLimit,
                                    ChainKind chain = ChainKind::Jump);

/// Absorption probability at V from every configuration, indexed by the
/// bitmask of mutants (entries 0 and 2^n - 1 are the boundary values).
std::vector<double> fixation_all_states(const WeightedGraph& g, double r, std::size_t limit = kDefaultExactLimit,
                                        ChainKind chain = ChainKind::Jump);

/// Average of rho under the initial distribution of `scheme`.
double scheme_average(const WeightedGraph& g, const std::vector<double>& rho, const InitScheme& scheme);
double fixation_under_scheme(const WeightedGraph& g, double r, const InitScheme& scheme,
                             std::size_t limit = kDefaultExactLimit);

/// (1 - 1/r) / (1 - r^-n); 1/n when |r - 1| < 1e-12.
double well_mixed_closed_form(std::size_t n, double r);

/// Walk on {0..k} stepping down/up with odds beta : 1, started at `start`:
/// probability of reaching k first, (1 - beta^start) / (1 - beta^k).
double biased_walk_absorption(std::size_t k, double beta, std::size_t start);

/// x / (x + y).
double three_state_bound(double x, double y);

/// Chain on {0..m, H, D}: i -> i+1 w.p. alpha, i -> H w.p. 1 - alpha,
/// H -> 0 w.p. 1 - q, H -> D w.p. q. Probability of reaching m from 0.
double mj_absorption(std::size_t m, double alpha, double q);

}  // namespace moran
