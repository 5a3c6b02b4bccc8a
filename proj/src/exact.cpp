#include "moran/exact.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {

constexpr std::size_t kDenseMaxN = 10;
constexpr double kResidualTol = 1e-12;
constexpr int kMaxSweeps = 5000;

// Row i reads diag[i] x_i - sum_j c_ij x_j = rhs[i].
struct System {
  std::vector<double> diag;
  std::vector<double> rhs;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> off;
};

void check_inputs(const WeightedGraph& g, double r, std::size_t limit) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("fitness r must be positive");
  if (g.n() > limit) {
    throw CapacityError("exact solver limit is n <= " + std::to_string(limit) + ", graph has n = " + std::to_string(g.n()));
  }
  if (g.n() > 30) throw CapacityError("exact solver cannot enumerate 2^n states for n > 30");
}

// Transient states are the masks 1 .. 2^n - 2, stored at index mask - 1.
System build_jump_system(const WeightedGraph& g, double r) {
  const std::size_t n = g.n();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  const double log2_r = std::log2(r);
  System sys;
  const std::size_t states = full - 1;
  sys.diag.assign(states, 0.0);
  sys.rhs.assign(states, 0.0);
  sys.off.assign(states, {});
  std::vector<std::pair<std::uint32_t, double>> moves;
  for (std::uint32_t s = 1; s < full; ++s) {
    moves.clear();
    double hi = kLog2Zero;
    for (VertexId v = 0; v < n; ++v) {
      const bool mutant_v = (s >> v) & 1u;
      Log2Accumulator acc;
      for (const Arc& a : g.in_arcs(v)) {
        if (a.vertex == v) continue;
        if (((s >> a.vertex) & 1u) != mutant_v) acc.add(a.log2_prob);
      }
      double l = acc.value();
      if (is_log2_zero(l)) continue;
      if (!mutant_v) l += log2_r;
      moves.emplace_back(s ^ (std::uint32_t{1} << v), l);
      hi = std::max(hi, l);
    }
    const std::size_t i = s - 1;
    for (const auto& [t, l] : moves) {
      const double rate = std::exp2(l - hi);
      sys.diag[i] += rate;
      if (t == full) {
        sys.rhs[i] += rate;
      } else if (t != 0) {
        sys.off[i].emplace_back(t - 1, rate);
      }
    }
  }
  return sys;
}

// The full chain: P(S -> S') summed over every (reproducer, target) pair,
// with the diagonal 1 - P(S -> S) taken from the explicit stay mass.
System build_full_system(const WeightedGraph& g, double r) {
  const std::size_t n = g.n();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  System sys;
  const std::size_t states = full - 1;
  sys.diag.assign(states, 0.0);
  sys.rhs.assign(states, 0.0);
  sys.off.assign(states, {});
  std::vector<double> change(n);
  for (std::uint32_t s = 1; s < full; ++s) {
    const int k = std::popcount(s);
    const double fitness = r * k + static_cast<double>(n) - k;
    double stay = 0.0;
    std::fill(change.begin(), change.end(), 0.0);
    for (VertexId u = 0; u < n; ++u) {
      const bool mu = (s >> u) & 1u;
      const double pick = (mu ? r : 1.0) / fitness;
      for (const Arc& a : g.out_arcs(u)) {
        if ((((s >> a.vertex) & 1u) != 0) == mu) {
          stay += pick * a.prob;
        } else {
          change[a.vertex] += pick * a.prob;
        }
      }
    }
    const std::size_t i = s - 1;
    sys.diag[i] = 1.0 - stay;
    for (VertexId v = 0; v < n; ++v) {
      if (change[v] == 0.0) continue;
      const std::uint32_t t = s ^ (std::uint32_t{1} << v);
      if (t == full) {
        sys.rhs[i] += change[v];
      } else if (t != 0) {
        sys.off[i].emplace_back(t - 1, change[v]);
      }
    }
  }
  return sys;
}

// Every transient state must reach an absorbing one, otherwise the system
// is singular.
void check_absorbable(const WeightedGraph& g) {
  const std::size_t n = g.n();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::vector<std::uint32_t>> preds(std::size_t{full} + 1);
  for (std::uint32_t s = 1; s < full; ++s) {
    for (VertexId u = 0; u < n; ++u) {
      const bool mu = (s >> u) & 1u;
      for (const Arc& a : g.out_arcs(u)) {
        if ((((s >> a.vertex) & 1u) != 0) != mu) preds[s ^ (std::uint32_t{1} << a.vertex)].push_back(s);
      }
    }
  }
  std::vector<char> ok(std::size_t{full} + 1, 0);
  std::vector<std::uint32_t> stack{0, full};
  ok[0] = ok[full] = 1;
  while (!stack.empty()) {
    const std::uint32_t t = stack.back();
    stack.pop_back();
    for (std::uint32_t s : preds[t]) {
      if (!ok[s]) {
        ok[s] = 1;
        stack.push_back(s);
      }
    }
  }
  for (std::uint32_t s = 1; s < full; ++s) {
    if (!ok[s]) {
      throw StructuralError("configuration " + std::to_string(s) +
                            " cannot reach fixation or extinction (graph not connected under positive weights)");
    }
  }
}

std::vector<double> solve_dense(const System& sys) {
  const Eigen::Index N = static_cast<Eigen::Index>(sys.diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    A(i, i) = sys.diag[i];
    for (const auto& [j, c] : sys.off[i]) A(i, j) -= c;
    b(i) = sys.rhs[i];
  }
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  return std::vector<double>(x.data(), x.data() + N);
}

std::vector<double> solve_sparse(const System& sys) {
  const Eigen::Index N = static_cast<Eigen::Index>(sys.diag.size());
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd b(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    trips.emplace_back(i, i, sys.diag[i]);
    for (const auto& [j, c] : sys.off[i]) trips.emplace_back(i, j, -c);
    b(i) = sys.rhs[i];
  }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw StructuralError("absorbing system is singular");
  const Eigen::VectorXd x = lu.solve(b);
  return std::vector<double>(x.data(), x.data() + N);
}

std::vector<double> solve_iterative(const System& sys) {
  const std::size_t N = sys.diag.size();
  std::vector<double> x(N, 0.0);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double acc = sys.rhs[i];
      for (const auto& [j, c] : sys.off[i]) acc += c * x[j];
      const double next = acc / sys.diag[i];
      worst = std::max(worst, std::abs(next - x[i]));
      x[i] = next;
    }
    if (worst <= kResidualTol) {
      double residual = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        double acc = sys.rhs[i];
        for (const auto& [j, c] : sys.off[i]) acc += c * x[j];
        residual = std::max(residual, std::abs(sys.diag[i] * x[i] - acc) / sys.diag[i]);
      }
      if (residual <= kResidualTol) return x;
    }
  }
  return solve_sparse(sys);
}

}  // namespace

std::vector<double> fixation_all_states(const WeightedGraph& g, double r, std::size_t limit, ChainKind chain) {
  check_inputs(g, r, limit);
  const std::size_t n = g.n();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<double> all(std::size_t{full} + 1, 0.0);
  all[full] = 1.0;
  if (n == 1) return all;
  const System sys = chain == ChainKind::Jump ? build_jump_system(g, r) : build_full_system(g, r);
  check_absorbable(g);
  const std::vector<double> x = n <= kDenseMaxN ? solve_dense(sys) : solve_iterative(sys);
  for (std::uint32_t s = 1; s < full; ++s) all[s] = std::clamp(x[s - 1], 0.0, 1.0);
  return all;
}

std::vector<double> fixation_vector(const WeightedGraph& g, double r, std::size_t limit, ChainKind chain) {
  const std::vector<double> all = fixation_all_states(g, r, limit, chain);
  std::vector<double> rho(g.n());
  for (std::size_t u = 0; u < g.n(); ++u) rho[u] = all[std::size_t{1} << u];
  return rho;
}

double scheme_average(const WeightedGraph& g, const std::vector<double>& rho, const InitScheme& scheme) {
  const std::vector<double> p = initial_distribution(g, scheme);
  double acc = 0.0;
  for (std::size_t u = 0; u < rho.size(); ++u) acc += p[u] * rho[u];
  return acc;
}

double fixation_under_scheme(const WeightedGraph& g, double r, const InitScheme& scheme, std::size_t limit) {
  return scheme_average(g, fixation_vector(g, r, limit), scheme);
}

double well_mixed_closed_form(std::size_t n, double r) {
  if (n == 0) throw InputError("population size must be positive");
  if (!(r > 0.0)) throw InputError("fitness r must be positive");
  const double nd = static_cast<double>(n);
  if (std::abs(r - 1.0) < 1e-12) return 1.0 / nd;
  const double lr = std::log(r);
  if (r > 1.0) return std::expm1(-lr) / std::expm1(-nd * lr);
  // Multiply through by r^n so nothing overflows for large n.
  return std::exp((nd - 1.0) * lr) * std::expm1(lr) / std::expm1(nd * lr);
}

double biased_walk_absorption(std::size_t k, double beta, std::size_t start) {
  if (k == 0) throw InputError("walk length must be at least 1");
  if (start > k) throw InputError("start outside {0..k}");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  const double s = static_cast<double>(start);
  const double kd = static_cast<double>(k);
  if (std::abs(beta - 1.0) < 1e-12) return s / kd;
  if (start == 0) return 0.0;
  if (start == k) return 1.0;
  const double lb = std::log(beta);
  if (beta < 1.0) return std::expm1(s * lb) / std::expm1(kd * lb);
  return std::exp((s - kd) * lb) * std::expm1(-s * lb) / std::expm1(-kd * lb);
}

double three_state_bound(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw InputError("three_state_bound needs x, y >= 0");
  if (x + y == 0.0) throw InputError("three_state_bound needs x + y > 0");
  return x / (x + y);
}

double mj_absorption(std::size_t m, double alpha, double q) {
  if (m == 0) throw InputError("m_j must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw InputError("q must be in (0,1)");
  // x_i = a_i + b_i x_H with a_m = 1, b_m = 0; a_i + b_i = 1 throughout.
  double a = 1.0;
  double b = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    a = alpha * a;
    b = alpha * b + (1.0 - alpha);
  }
  // x_0 = a + b (1 - q) x_0, with 1 - b (1 - q) rewritten as a + b q.
  return a / (a + b * q);
}

}  // namespace moran
