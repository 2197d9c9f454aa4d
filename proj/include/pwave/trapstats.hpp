// Copyright 2026 The pwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PWAVE_TRAPSTATS_HPP
#define PWAVE_TRAPSTATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pwave/errors.hpp"
#include "pwave/rng.hpp"

// Combinatorial model of extrasynaptic traps on a dendrite.
//
// A dendrite is a line of n_source neurotransmitter-source positions, each
// assigned to one of n_neuron surrounding neurons (the source map). A trap
// is a contiguous window of n_trap positions; its density under a signal (a
// set of simultaneously active neurons) is the number of window positions
// whose assigned neuron is active. The functions here compute density
// profiles, Monte Carlo estimates of trap-existence probabilities, and the
// closed-form identification-error chain p_exact_k -> p_tail -> p_error.

namespace pwave::trapstats {

struct TrapParams {
  std::uint32_t n_neuron = 650;   // neurons surrounding the selected one
  std::uint32_t n_source = 25000; // source positions along the dendrite
  std::uint32_t n_trap = 15;      // window width of one trap, in positions
  std::uint32_t n_sig = 10;       // active neurons per signal
  std::uint32_t n_dict = 10000;   // dictionary capacity
  std::uint32_t k_limit = 5;      // trap activation density threshold

  void validate() const {
    if (n_neuron < 1 || n_source < 1 || n_trap < 1 || n_sig < 1 ||
        n_dict < 1 || k_limit < 1) {
      throw InvalidArgument("TrapParams: all fields must be >= 1");
    }
    if (n_trap > n_source) {
      throw InvalidArgument("TrapParams: n_trap must not exceed n_source");
    }
    if (n_sig > n_neuron) {
      throw InvalidArgument("TrapParams: n_sig must not exceed n_neuron");
    }
    if (k_limit > n_trap) {
      throw InvalidArgument("TrapParams: k_limit must not exceed n_trap");
    }
  }
};

// Neuron indices are 0-based throughout.
struct SourceMap {
  std::uint32_t n_neuron = 0;
  std::vector<std::uint32_t> assignments;  // length n_source
};

struct Signal {
  std::uint32_t n_neuron = 0;
  std::vector<std::uint32_t> active;  // distinct, sorted ascending
};

struct Dictionary {
  std::vector<Signal> signals;
};

struct DensityProfile {
  std::vector<std::uint32_t> densities;  // one per interior window
};

enum class MapMode {
  kUniform,     // independent uniform neuron per position
  kMinSpacing,  // additionally, same-neuron positions at least `gap` apart
};

struct MapOptions {
  MapMode mode = MapMode::kUniform;
  std::uint32_t gap = 10;  // used by kMinSpacing only
};

namespace detail {

inline constexpr int kSpacingRetries = 1000;

// One uniform draw for a map position; `attempt` separates retries in
// min-spacing mode so rejected draws do not perturb later positions.
inline std::uint32_t draw_assignment(std::uint64_t seed, std::uint64_t pos,
                                     std::uint64_t attempt,
                                     std::uint32_t n_neuron) {
  return static_cast<std::uint32_t>(rng::bounded(
      rng::hash(seed, rng::Stream::kSourceMap, pos, attempt), n_neuron));
}

}  // namespace detail

// Generative model for the source map D. Deterministic in
// (params, seed, options). In min-spacing mode each position redraws until
// it lands at least `gap` positions away from the previous occurrence of
// the same neuron, up to a bounded retry budget.
inline SourceMap build_source_map(const TrapParams& params, std::uint64_t seed,
                                  const MapOptions& options = {}) {
  params.validate();
  if (options.mode == MapMode::kMinSpacing) {
    if (options.gap < 1) {
      throw InvalidArgument("min-spacing gap must be >= 1");
    }
    if (options.gap > params.n_neuron) {
      throw InvalidArgument(
          "min-spacing gap too large for the neuron count: gap * (n_source / "
          "n_neuron) must stay within n_source");
    }
  }

  SourceMap map;
  map.n_neuron = params.n_neuron;
  map.assignments.resize(params.n_source);

  if (options.mode == MapMode::kUniform) {
    for (std::uint64_t pos = 0; pos < params.n_source; ++pos) {
      map.assignments[pos] =
          detail::draw_assignment(seed, pos, 0, params.n_neuron);
    }
    return map;
  }

  // Position of the most recent source assigned to each neuron.
  std::vector<std::int64_t> last_pos(params.n_neuron, -1);
  for (std::uint64_t pos = 0; pos < params.n_source; ++pos) {
    bool placed = false;
    for (int attempt = 0; attempt < detail::kSpacingRetries; ++attempt) {
      const std::uint32_t neuron =
          detail::draw_assignment(seed, pos, attempt, params.n_neuron);
      const std::int64_t prev = last_pos[neuron];
      if (prev < 0 ||
          static_cast<std::int64_t>(pos) - prev >=
              static_cast<std::int64_t>(options.gap)) {
        map.assignments[pos] = neuron;
        last_pos[neuron] = static_cast<std::int64_t>(pos);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InfeasibleSpacing(
          "could not place source " + std::to_string(pos) + " within " +
          std::to_string(detail::kSpacingRetries) + " retries (gap " +
          std::to_string(options.gap) + ")");
    }
  }
  return map;
}

// Uniform random n_sig-subset of [0, n_neuron), drawn as the prefix of a
// seeded partial shuffle. Prefix property: for fixed (seed, trial) the
// subset for n_sig is contained in the subset for any larger n_sig, which
// makes Monte Carlo estimates monotone in the signal size under matched
// seeds.
inline Signal draw_signal(std::uint32_t n_neuron, std::uint32_t n_sig,
                          std::uint64_t seed, std::uint64_t trial = 0) {
  if (n_sig > n_neuron) {
    throw InvalidArgument("draw_signal: n_sig exceeds n_neuron");
  }
  std::vector<std::uint32_t> pool(n_neuron);
  std::iota(pool.begin(), pool.end(), 0);
  Signal signal;
  signal.n_neuron = n_neuron;
  signal.active.resize(n_sig);
  for (std::uint32_t i = 0; i < n_sig; ++i) {
    const std::uint64_t r =
        rng::bounded(rng::hash(seed, rng::Stream::kSignal, trial, i),
                     n_neuron - i);
    std::swap(pool[i], pool[i + r]);
    signal.active[i] = pool[i];
  }
  std::sort(signal.active.begin(), signal.active.end());
  return signal;
}

// n_dict distinct signals drawn from the same generative model. The
// attempt budget guards against capacities near or beyond the size of the
// signal space.
inline Dictionary make_dictionary(const TrapParams& params,
                                  std::uint64_t seed) {
  params.validate();
  Dictionary dict;
  dict.signals.reserve(params.n_dict);
  std::vector<std::vector<std::uint32_t>> seen;
  const std::uint64_t budget = 64ULL * params.n_dict + 256;
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    Signal signal = draw_signal(params.n_neuron, params.n_sig, seed, attempt);
    if (std::find(seen.begin(), seen.end(), signal.active) != seen.end()) {
      continue;
    }
    seen.push_back(signal.active);
    dict.signals.push_back(std::move(signal));
    if (dict.signals.size() == params.n_dict) return dict;
  }
  throw InvalidArgument(
      "could not draw " + std::to_string(params.n_dict) +
      " distinct signals; the dictionary capacity is too close to the size "
      "of the signal space");
}

namespace detail {

// Visits the density of every interior window (those fully inside the
// dendrite) with a sliding count. `active` is a per-neuron flag vector.
template <typename Fn>
void for_each_window_density(const std::vector<std::uint32_t>& assignments,
                             const std::vector<std::uint8_t>& active,
                             std::uint32_t n_trap, Fn&& fn) {
  const std::size_t n = assignments.size();
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < n_trap; ++i) {
    count += active[assignments[i]];
  }
  fn(count);
  for (std::size_t i = n_trap; i < n; ++i) {
    count += active[assignments[i]];
    count -= active[assignments[i - n_trap]];
    fn(count);
  }
}

inline std::vector<std::uint8_t> active_flags(const Signal& signal) {
  std::vector<std::uint8_t> flags(signal.n_neuron, 0);
  for (std::uint32_t idx : signal.active) {
    if (idx >= signal.n_neuron) {
      throw IndexOutOfRange("signal index out of range");
    }
    flags[idx] = 1;
  }
  return flags;
}

}  // namespace detail

// Mediator density at every interior window: the count of window positions
// whose assigned neuron is active in the signal. Output length is
// n_source - n_trap + 1.
inline DensityProfile density_profile(const Signal& signal,
                                      const SourceMap& map,
                                      std::uint32_t n_trap) {
  if (signal.n_neuron != map.n_neuron) {
    throw DimensionMismatch("signal and source map disagree on n_neuron");
  }
  if (n_trap < 1 || n_trap > map.assignments.size()) {
    throw InvalidArgument("n_trap out of range for this map");
  }
  const std::vector<std::uint8_t> active = detail::active_flags(signal);
  DensityProfile profile;
  profile.densities.reserve(map.assignments.size() - n_trap + 1);
  detail::for_each_window_density(
      map.assignments, active, n_trap,
      [&](std::uint32_t d) { profile.densities.push_back(d); });
  return profile;
}

inline std::uint32_t max_trap_density(const DensityProfile& profile) {
  if (profile.densities.empty()) {
    throw EmptyProfile("density profile is empty");
  }
  return *std::max_element(profile.densities.begin(),
                           profile.densities.end());
}

enum class Comparison { kAtLeast, kExactly };

struct ProbEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

namespace detail {

// Per-trial summary: which densities occur among interior windows, as a
// bitmask over words of 64. Enough for any n_trap the scan supports.
struct DensitySet {
  std::vector<std::uint64_t> words;

  explicit DensitySet(std::uint32_t n_trap) : words(n_trap / 64 + 1, 0) {}
  void reset() { std::fill(words.begin(), words.end(), 0); }
  void insert(std::uint32_t d) { words[d >> 6] |= 1ULL << (d & 63); }
  bool contains(std::uint32_t d) const {
    return (words[d >> 6] >> (d & 63)) & 1ULL;
  }
  bool any_at_least(std::uint32_t d) const {
    const std::size_t w = d >> 6;
    if ((words[w] >> (d & 63)) != 0) return true;
    for (std::size_t i = w + 1; i < words.size(); ++i) {
      if (words[i] != 0) return true;
    }
    return false;
  }
  bool satisfies(Comparison cmp, std::uint32_t k) const {
    return cmp == Comparison::kAtLeast ? any_at_least(k) : contains(k);
  }
};

// Each trial draws a fresh (map, signal) pair from a per-trial subseed and
// records which window densities occur.
inline DensitySet run_trial(const TrapParams& params, std::uint64_t seed,
                            std::uint64_t trial, const MapOptions& options) {
  const std::uint64_t trial_seed =
      rng::hash(seed, rng::Stream::kSourceMap, trial, ~0ULL);
  const SourceMap map = build_source_map(params, trial_seed, options);
  const Signal signal =
      draw_signal(params.n_neuron, params.n_sig, trial_seed, trial);
  const std::vector<std::uint8_t> active = active_flags(signal);
  DensitySet seen(params.n_trap);
  for_each_window_density(map.assignments, active, params.n_trap,
                          [&](std::uint32_t d) { seen.insert(d); });
  return seen;
}

inline ProbEstimate estimate_from_counts(std::uint64_t hits,
                                         std::uint64_t trials) {
  ProbEstimate est;
  est.trials = trials;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) /
                static_cast<double>(trials));
  return est;
}

}  // namespace detail

// Monte Carlo probability that at least one interior window satisfies the
// comparison against k, over `trials` independent (map, signal) draws.
// Deterministic in (params, k, comparison, trials, seed, options).
inline ProbEstimate prob_trap_exists(const TrapParams& params,
                                     std::uint32_t k, Comparison comparison,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const MapOptions& options = {}) {
  params.validate();
  if (trials < 1) {
    throw InvalidArgument("prob_trap_exists: trials must be >= 1");
  }
  if (k > params.n_trap) {
    throw InvalidArgument("prob_trap_exists: k must not exceed n_trap");
  }
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (detail::run_trial(params, seed, t, options).satisfies(comparison, k)) {
      ++hits;
    }
  }
  return detail::estimate_from_counts(hits, trials);
}

struct ScanRow {
  std::uint32_t k = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo table for k = 0..k_max. Single pass over trials; exactly
// equivalent to calling prob_trap_exists per k with the same seed. Under
// the default at-least comparison the column is monotone non-increasing by
// construction.
inline std::vector<ScanRow> sharp_transition_scan(
    const TrapParams& params, std::uint32_t k_max, std::uint64_t trials,
    std::uint64_t seed, const MapOptions& options = {},
    Comparison comparison = Comparison::kAtLeast) {
  params.validate();
  if (trials < 1) {
    throw InvalidArgument("sharp_transition_scan: trials must be >= 1");
  }
  if (k_max > params.n_trap) {
    throw InvalidArgument("sharp_transition_scan: k_max must not exceed n_trap");
  }
  std::vector<std::uint64_t> hits(k_max + 1, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const detail::DensitySet seen = detail::run_trial(params, seed, t, options);
    for (std::uint32_t k = 0; k <= k_max; ++k) {
      if (seen.satisfies(comparison, k)) ++hits[k];
    }
  }
  std::vector<ScanRow> rows(k_max + 1);
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    const ProbEstimate est = detail::estimate_from_counts(hits[k], trials);
    rows[k] = {k, est.estimate, est.std_error, est.trials};
  }
  return rows;
}

// Probability that a competing signal produces density exactly k in a fixed
// trap: Binomial(n_trap, n_trap / n_neuron) evaluated at k.
inline double p_exact_k(const TrapParams& params, std::uint32_t k) {
  params.validate();
  if (k > params.n_trap) {
    throw InvalidArgument("p_exact_k: k must not exceed n_trap");
  }
  const long double q = static_cast<long double>(params.n_trap) /
                        static_cast<long double>(params.n_neuron);
  long double binom = 1.0L;
  for (std::uint32_t i = 0; i < k; ++i) {
    binom *= static_cast<long double>(params.n_trap - i) /
             static_cast<long double>(i + 1);
  }
  const long double value = binom * std::pow(q, static_cast<long double>(k)) *
                            std::pow(1.0L - q,
                                     static_cast<long double>(params.n_trap - k));
  return static_cast<double>(value);
}

// Tail sum p(k) + p(k+1) + ... + p(n_sig). The upper limit is n_sig by
// definition of the model, even though the binomial support extends to
// n_trap; terms beyond n_trap are zero. Compensated summation keeps the
// relative error well under 1e-12.
inline double p_tail(const TrapParams& params, std::uint32_t k) {
  params.validate();
  if (k > params.n_sig) {
    throw InvalidRange("p_tail: k must not exceed n_sig");
  }
  const std::uint32_t upper = std::min(params.n_sig, params.n_trap);
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (std::uint32_t j = k; j <= upper; ++j) {
    const long double term = static_cast<long double>(p_exact_k(params, j));
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return static_cast<double>(sum);
}

// Identification-error probability: the chance that at least one of the
// other n_dict - 1 dictionary signals reaches density k in the same trap,
// 1 - (1 - p_tail(k))^(n_dict - 1). Exactly 0 when n_dict == 1.
inline double p_error(const TrapParams& params, std::uint32_t k) {
  const long double tail = static_cast<long double>(p_tail(params, k));
  const long double exponent = static_cast<long double>(params.n_dict) - 1.0L;
  if (exponent == 0.0L || tail == 0.0L) {
    return 0.0;
  }
  if (tail >= 1.0L) {
    return 1.0;
  }
  // Same formula, evaluated through logs so tiny tails keep full precision.
  return static_cast<double>(-std::expm1(exponent * std::log1p(-tail)));
}

}  // namespace pwave::trapstats

#endif  // PWAVE_TRAPSTATS_HPP
