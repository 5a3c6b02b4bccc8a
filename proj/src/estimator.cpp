#include "moran/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "moran/errors.hpp"
#include "moran/rng.hpp"

namespace moran {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  if (successes > n) throw InputError("more successes than trials");
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double centre = (p + z2 / (2.0 * nd)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
  Interval iv{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  iv.lo = std::min(iv.lo, p);
  iv.hi = std::max(iv.hi, p);
  return iv;
}

FixationEstimate estimate_fixation(const WeightedGraph& g, double r, const InitScheme& scheme, std::uint64_t trials,
                                   std::uint64_t seed, const EstimateOptions& opt) {
  if (trials == 0) throw InputError("trials must be at least 1");
  const std::vector<double> p = initial_distribution(g, scheme);
  std::vector<double> cumulative(p.size());
  double acc = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u) cumulative[u] = acc += p[u];

  const Simulator prototype(g, r, opt.sim);
  std::vector<TrajectoryOutcome> outcomes(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    Simulator sim = prototype;
    try {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= trials) return;
        Rng rng(derive_seed(seed, i));
        const double x = rng.uniform() * cumulative.back();
        const std::size_t u = std::min<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin(), p.size() - 1);
        outcomes[i] = sim.run(Configuration::singleton(g.n(), static_cast<VertexId>(u)), rng);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(trials);
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 1024))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  FixationEstimate est;
  est.trials = trials;
  est.seed = seed;
  long double steps = 0.0L;
  for (const TrajectoryOutcome& o : outcomes) {
    if (o.result == Outcome::Fixed) ++est.fixations;
    if (o.result == Outcome::Timeout) ++est.timeouts;
    steps += static_cast<long double>(o.steps_jump_chain);
  }
  est.mean_jump_steps = static_cast<double>(steps / static_cast<long double>(trials));
  const std::uint64_t decided = trials - est.timeouts;
  est.point = decided == 0 ? 0.0 : static_cast<double>(est.fixations) / static_cast<double>(decided);
  est.wilson95 = wilson_interval(est.fixations, decided, kZ95);
  est.wilson99 = wilson_interval(est.fixations, decided, kZ99);
  est.unreliable = decided == 0 || static_cast<double>(est.timeouts) > kUnreliableTimeoutFraction * static_cast<double>(trials);
  return est;
}

std::vector<SweepRow> sweep(const std::vector<SweepSpec>& specs, std::uint64_t seed, const EstimateOptions& opt) {
  if (specs.empty()) throw InputError("sweep needs at least one spec");
  std::vector<SweepRow> rows;
  rows.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SweepSpec& spec = specs[i];
    SweepRow row;
    row.graph_id = spec.graph_id;
    row.r = spec.r;
    row.scheme = spec.scheme;
    row.trials = spec.trials;
    row.seed = seed + i;
    try {
      if (!spec.source) throw InputError("spec has no graph source");
      const WeightedGraph g = spec.source();
      row.n = g.n();
      row.estimate = estimate_fixation(g, spec.r, spec.scheme, spec.trials, row.seed, opt);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_header() {
  return "graph_id,n,r,scheme,trials,fixations,timeouts,point,w95_lo,w95_hi,w99_lo,w99_hi,seed,mean_jump_steps,status";
}

std::string csv_row(const SweepRow& row) {
  std::string s = csv_safe(row.graph_id) + "," + std::to_string(row.n) + "," + fmt_double(row.r) + "," + row.scheme.str() +
                  "," + std::to_string(row.trials) + ",";
  if (!row.estimate) {
    return s + ",,,,,,," + std::to_string(row.seed) + ",,error: " + csv_safe(row.error);
  }
  const FixationEstimate& e = *row.estimate;
  s += std::to_string(e.fixations) + "," + std::to_string(e.timeouts) + "," + fmt_double(e.point) + "," +
       fmt_double(e.wilson95.lo) + "," + fmt_double(e.wilson95.hi) + "," + fmt_double(e.wilson99.lo) + "," +
       fmt_double(e.wilson99.hi) + "," + std::to_string(e.seed) + "," + fmt_double(e.mean_jump_steps) + "," +
       (e.unreliable ? "unreliable" : "ok");
  return s;
}

}  // namespace moran
