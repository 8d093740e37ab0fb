#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acn {

struct EnvSpec {
  std::size_t observation_dim = 0;
  std::size_t action_dim = 0;
  std::vector<double> action_bound;  // symmetric, per dimension
  std::size_t horizon = 0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;  // terminal only; horizon truncation is the caller's business
};

/// Deterministic continuous-control task. Rewards are computed from the state
/// before the step and the (clipped) action; `done` from the state after.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual std::string name() const = 0;
  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  /// Raw simulator state (not the observation); used by tests and tools.
  virtual std::vector<double> state() const = 0;
  /// Overwrites the simulator state and returns the matching observation.
  virtual std::vector<double> set_state(std::span<const double> state) = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

/// Maps an angle to (-pi, pi].
double wrap_angle(double theta);

/// Torque-limited pendulum swing-up. State (theta, theta_dot), theta = 0 upright.
std::unique_ptr<Environment> pendulum_swingup();
/// Planar point mass driven to the origin. State (px, py, vx, vy).
std::unique_ptr<Environment> point_mass_2d();
/// 1-D double integrator; terminates when |x| > 5. State (x, x_dot).
std::unique_ptr<Environment> double_integrator_1d();

/// "pendulum", "pointmass" or "integrator"; throws std::invalid_argument otherwise.
std::unique_ptr<Environment> make_environment(std::string_view name);
bool is_known_environment(std::string_view name);

}  // namespace acn
