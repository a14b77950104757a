#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace skewpnn {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Bat algorithm settings. Frequencies f_i = f_min + (f_max - f_min) beta
// scale the pull toward the incumbent; loudness decays by lambda on every
// accepted move; pulse rates follow r0 (1 - exp(-lambda t)).
struct BatConfig {
  std::size_t population = 20;
  double f_min = 0.0;
  double f_max = 2.0;
  double lambda = 0.9;
  double initial_loudness = 1.0;
  double initial_pulse_rate = 0.5;
  std::vector<Interval> bounds;
  std::size_t max_iters = 100;
  // Stop after this many consecutive iterations without a gain above
  // `tolerance`; 0 disables early stopping.
  std::size_t patience = 10;
  double tolerance = 1e-6;
  std::optional<double> target_fitness;
  std::uint64_t seed = 0;

  std::size_t dims() const { return bounds.size(); }
  void validate() const;
  nlohmann::json to_json() const;
};

// Maps a position in the search box to a score; higher is better.
using Evaluator = std::function<double(std::span<const double>)>;

struct BatSwarmState {
  std::size_t dims = 0;
  std::vector<double> positions;   // population x dims, row-major
  std::vector<double> velocities;  // population x dims, row-major
  std::vector<double> fitness;
  std::vector<double> loudness;
  std::vector<double> pulse_rate;
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::size_t iteration = 0;
  std::size_t evaluations = 0;

  std::size_t population() const { return fitness.size(); }
  std::span<const double> position(std::size_t bat) const {
    return {positions.data() + bat * dims, dims};
  }
};

// Thrown when the evaluator fails; the swarm state passed in is untouched.
class BatStepError : public std::runtime_error {
 public:
  BatStepError(std::size_t bat, const std::string& what)
      : std::runtime_error("fitness evaluation failed for bat " + std::to_string(bat) + ": " + what),
        bat_(bat) {}
  std::size_t bat() const { return bat_; }

 private:
  std::size_t bat_;
};

// Random stream used by bat `bat` at iteration `iteration` (0 = initialisation).
std::uint64_t bat_stream_seed(std::uint64_t master, std::size_t iteration, std::size_t bat);

// Uniform placement inside the box, zero velocities, evaluated once.
BatSwarmState init_swarm(const BatConfig& config, const Evaluator& fitness);

// One synchronous iteration: every bat moves relative to the incumbent held
// at the start of the step, so per-bat work is independent and the result
// does not depend on evaluation order.
BatSwarmState bat_step(const BatSwarmState& state, const BatConfig& config,
                       const Evaluator& fitness);

struct TraceEntry {
  std::size_t iteration = 0;
  double best_fitness = 0.0;
  std::vector<double> best_position;
};

struct OptimizeResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::vector<TraceEntry> history;
  std::size_t evaluations = 0;
  std::string stop_reason;
};

OptimizeResult optimize(const BatConfig& config, const Evaluator& fitness);

nlohmann::json trace_to_json(std::span<const TraceEntry> history);

}  // namespace skewpnn
