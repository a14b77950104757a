#include "skewpnn/bat.hpp"

#include <algorithm>
#include <cmath>

#include "skewpnn/errors.hpp"
#include "skewpnn/random.hpp"

namespace skewpnn {

namespace {

double evaluate_checked(const Evaluator& fitness, std::span<const double> x, std::size_t bat) {
  double value = 0.0;
  try {
    value = fitness(x);
  } catch (const std::exception& e) {
    throw BatStepError(bat, e.what());
  }
  if (std::isnan(value)) throw BatStepError(bat, "evaluator returned NaN");
  return value;
}

void clamp_into(std::span<double> x, const std::vector<Interval>& bounds) {
  for (std::size_t d = 0; d < x.size(); ++d) x[d] = std::clamp(x[d], bounds[d].lo, bounds[d].hi);
}

}  // namespace

void BatConfig::validate() const {
  if (population < 2) throw ValidationError("bat population must be at least 2");
  if (bounds.empty()) throw ValidationError("bat search box needs at least one dimension");
  for (const auto& b : bounds) {
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw ValidationError("each search interval needs finite lo < hi");
    }
  }
  if (!(f_min >= 0.0) || !(f_max >= f_min)) throw ValidationError("need 0 <= f_min <= f_max");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in (0, 1)");
  if (!(initial_loudness > 0.0)) throw ValidationError("initial loudness must be positive");
  if (!(initial_pulse_rate >= 0.0 && initial_pulse_rate <= 1.0)) {
    throw ValidationError("initial pulse rate must lie in [0, 1]");
  }
  if (max_iters == 0) throw ValidationError("max_iters must be positive");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be nonnegative");
}

nlohmann::json BatConfig::to_json() const {
  nlohmann::json box = nlohmann::json::array();
  for (const auto& b : bounds) box.push_back({b.lo, b.hi});
  nlohmann::json j = {{"population", population},
                      {"f_min", f_min},
                      {"f_max", f_max},
                      {"lambda", lambda},
                      {"initial_loudness", initial_loudness},
                      {"initial_pulse_rate", initial_pulse_rate},
                      {"bounds", std::move(box)},
                      {"max_iters", max_iters},
                      {"patience", patience},
                      {"tolerance", tolerance},
                      {"seed", seed}};
  j["target_fitness"] = target_fitness ? nlohmann::json(*target_fitness) : nlohmann::json(nullptr);
  return j;
}

std::uint64_t bat_stream_seed(std::uint64_t master, std::size_t iteration, std::size_t bat) {
  return derive_seed(master, 0xba7000 + iteration, bat);
}

BatSwarmState init_swarm(const BatConfig& config, const Evaluator& fitness) {
  config.validate();
  const std::size_t pop = config.population;
  const std::size_t dims = config.dims();
  BatSwarmState state;
  state.dims = dims;
  state.positions.resize(pop * dims);
  state.velocities.assign(pop * dims, 0.0);
  state.fitness.resize(pop);
  state.loudness.assign(pop, config.initial_loudness);
  state.pulse_rate.assign(pop, config.initial_pulse_rate);
  for (std::size_t i = 0; i < pop; ++i) {
    Rng rng(bat_stream_seed(config.seed, 0, i));
    for (std::size_t d = 0; d < dims; ++d) {
      std::uniform_real_distribution<double> u(config.bounds[d].lo, config.bounds[d].hi);
      state.positions[i * dims + d] = u(rng);
    }
  }
  for (std::size_t i = 0; i < pop; ++i) {
    state.fitness[i] = evaluate_checked(fitness, state.position(i), i);
  }
  state.evaluations = pop;
  const auto best = static_cast<std::size_t>(
      std::max_element(state.fitness.begin(), state.fitness.end()) - state.fitness.begin());
  state.best_fitness = state.fitness[best];
  const auto p = state.position(best);
  state.best_position.assign(p.begin(), p.end());
  return state;
}

BatSwarmState bat_step(const BatSwarmState& state, const BatConfig& config, const Evaluator& fitness) {
  const std::size_t pop = state.population();
  const std::size_t dims = state.dims;
  if (pop != config.population || dims != config.dims()) {
    throw ValidationError("swarm state does not match the bat configuration");
  }
  BatSwarmState next = state;
  next.iteration = state.iteration + 1;
  const double t = static_cast<double>(next.iteration);

  double mean_loudness = 0.0;
  for (double a : state.loudness) mean_loudness += a;
  mean_loudness /= static_cast<double>(pop);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> symmetric(-1.0, 1.0);
  std::vector<double> candidates(pop * dims);
  std::vector<double> accept_draws(pop);

  for (std::size_t i = 0; i < pop; ++i) {
    Rng rng(bat_stream_seed(config.seed, next.iteration, i));
    const double beta = unit(rng);
    const double freq = config.f_min + (config.f_max - config.f_min) * beta;
    std::span<double> x(candidates.data() + i * dims, dims);
    for (std::size_t d = 0; d < dims; ++d) {
      double& v = next.velocities[i * dims + d];
      v += (state.best_position[d] - state.positions[i * dims + d]) * freq;
      x[d] = state.positions[i * dims + d] + v;
    }
    clamp_into(x, config.bounds);
    // Local walk around the incumbent with probability 1 - r_i.
    if (unit(rng) >= state.pulse_rate[i]) {
      for (std::size_t d = 0; d < dims; ++d) {
        x[d] = state.best_position[d] + symmetric(rng) * mean_loudness;
      }
      clamp_into(x, config.bounds);
    }
    accept_draws[i] = unit(rng);
  }

  std::vector<double> candidate_fitness(pop);
  for (std::size_t i = 0; i < pop; ++i) {
    candidate_fitness[i] =
        evaluate_checked(fitness, std::span<const double>(candidates.data() + i * dims, dims), i);
  }
  next.evaluations += pop;

  std::size_t round_best = 0;
  for (std::size_t i = 0; i < pop; ++i) {
    if (candidate_fitness[i] > state.fitness[i] && accept_draws[i] < state.loudness[i]) {
      std::copy_n(candidates.begin() + static_cast<long>(i * dims), dims,
                  next.positions.begin() + static_cast<long>(i * dims));
      next.fitness[i] = candidate_fitness[i];
      next.loudness[i] = config.lambda * state.loudness[i];
      next.pulse_rate[i] = config.initial_pulse_rate * (1.0 - std::exp(-config.lambda * t));
    }
    if (candidate_fitness[i] > candidate_fitness[round_best]) round_best = i;
  }
  if (candidate_fitness[round_best] > state.best_fitness) {
    next.best_fitness = candidate_fitness[round_best];
    next.best_position.assign(candidates.begin() + static_cast<long>(round_best * dims),
                              candidates.begin() + static_cast<long>((round_best + 1) * dims));
  }
  return next;
}

OptimizeResult optimize(const BatConfig& config, const Evaluator& fitness) {
  auto state = init_swarm(config, fitness);
  OptimizeResult result;
  result.stop_reason = "max_iters";
  double reference = state.best_fitness;
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    state = bat_step(state, config, fitness);
    result.history.push_back({state.iteration, state.best_fitness, state.best_position});
    if (state.best_fitness - reference > config.tolerance) {
      reference = state.best_fitness;
      stalled = 0;
    } else {
      ++stalled;
    }
    if (config.target_fitness && state.best_fitness >= *config.target_fitness) {
      result.stop_reason = "target_fitness";
      break;
    }
    if (config.patience > 0 && stalled >= config.patience) {
      result.stop_reason = "patience";
      break;
    }
  }
  result.best_position = state.best_position;
  result.best_fitness = state.best_fitness;
  result.evaluations = state.evaluations;
  return result;
}

nlohmann::json trace_to_json(std::span<const TraceEntry> history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : history) {
    out.push_back({{"iteration", e.iteration},
                   {"best_fitness", e.best_fitness},
                   {"best_position", e.best_position}});
  }
  return out;
}

}  // namespace skewpnn
