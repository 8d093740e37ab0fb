#include "acn/envs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "acn/rng.hpp"

namespace acn {

double wrap_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // r in [0, 2pi); map to (-pi, pi]
  double out = r - std::numbers::pi;
  if (out == -std::numbers::pi) out = std::numbers::pi;
  return out;
}

namespace {

double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

void check_action(std::span<const double> action, const EnvSpec& spec) {
  if (action.size() != spec.action_dim) throw std::invalid_argument("step: wrong action dimension");
}

void check_state(std::span<const double> state, std::size_t n) {
  if (state.size() != n) throw std::invalid_argument("set_state: wrong state dimension");
}

class PendulumSwingup final : public Environment {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "pendulum"; }

  std::vector<double> reset(std::uint64_t seed) override {
    Rng rng(seed);
    theta_ = rng.uniform(-std::numbers::pi, std::numbers::pi);
    theta_dot_ = rng.uniform(-1.0, 1.0);
    return observe();
  }

  StepResult step(std::span<const double> action) override {
    check_action(action, spec_);
    const double u = clip(action[0], kMaxTorque);
    const double th = wrap_angle(theta_);
    const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

    const double accel =
        3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) + 3.0 / (kMass * kLength * kLength) * u;
    theta_dot_ = std::clamp(theta_dot_ + accel * kDt, -kMaxSpeed, kMaxSpeed);
    theta_ = theta_ + theta_dot_ * kDt;
    return {observe(), -cost, false};
  }

  std::vector<double> state() const override { return {theta_, theta_dot_}; }
  std::vector<double> set_state(std::span<const double> s) override {
    check_state(s, 2);
    theta_ = s[0];
    theta_dot_ = s[1];
    return observe();
  }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PendulumSwingup>(*this); }

 private:
  std::vector<double> observe() const { return {std::cos(theta_), std::sin(theta_), theta_dot_}; }

  EnvSpec spec_{3, 1, {kMaxTorque}, 200};
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
};

class PointMass2d final : public Environment {
 public:
  static constexpr double kDt = 0.1;
  static constexpr double kMaxSpeed = 2.0;

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "pointmass"; }

  std::vector<double> reset(std::uint64_t seed) override {
    Rng rng(seed);
    p_[0] = rng.uniform(-2.0, 2.0);
    p_[1] = rng.uniform(-2.0, 2.0);
    v_[0] = 0.0;
    v_[1] = 0.0;
    return observe();
  }

  StepResult step(std::span<const double> action) override {
    check_action(action, spec_);
    const double a0 = clip(action[0], 1.0);
    const double a1 = clip(action[1], 1.0);
    const double reward = -std::hypot(p_[0], p_[1]) - 0.05 * (a0 * a0 + a1 * a1);
    v_[0] = clip(v_[0] + a0 * kDt, kMaxSpeed);
    v_[1] = clip(v_[1] + a1 * kDt, kMaxSpeed);
    p_[0] += v_[0] * kDt;
    p_[1] += v_[1] * kDt;
    return {observe(), reward, false};
  }

  std::vector<double> state() const override { return {p_[0], p_[1], v_[0], v_[1]}; }
  std::vector<double> set_state(std::span<const double> s) override {
    check_state(s, 4);
    p_ = {s[0], s[1]};
    v_ = {s[2], s[3]};
    return observe();
  }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<PointMass2d>(*this); }

 private:
  // Goal is the origin, so p - goal == p.
  std::vector<double> observe() const { return {p_[0], p_[1], v_[0], v_[1]}; }

  EnvSpec spec_{4, 2, {1.0, 1.0}, 100};
  std::array<double, 2> p_{};
  std::array<double, 2> v_{};
};

class DoubleIntegrator1d final : public Environment {
 public:
  static constexpr double kDt = 0.05;
  static constexpr double kLimit = 5.0;

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "integrator"; }

  std::vector<double> reset(std::uint64_t seed) override {
    Rng rng(seed);
    x_ = rng.uniform(-1.0, 1.0);
    x_dot_ = rng.uniform(-0.5, 0.5);
    return observe();
  }

  StepResult step(std::span<const double> action) override {
    check_action(action, spec_);
    const double a = clip(action[0], 1.0);
    const double reward = -(x_ * x_ + 0.1 * x_dot_ * x_dot_ + 0.01 * a * a);
    x_dot_ += a * kDt;
    x_ += x_dot_ * kDt;
    return {observe(), reward, std::abs(x_) > kLimit};
  }

  std::vector<double> state() const override { return {x_, x_dot_}; }
  std::vector<double> set_state(std::span<const double> s) override {
    check_state(s, 2);
    x_ = s[0];
    x_dot_ = s[1];
    return observe();
  }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<DoubleIntegrator1d>(*this); }

 private:
  std::vector<double> observe() const { return {x_, x_dot_}; }

  EnvSpec spec_{2, 1, {1.0}, 150};
  double x_ = 0.0;
  double x_dot_ = 0.0;
};

}  // namespace

std::unique_ptr<Environment> pendulum_swingup() { return std::make_unique<PendulumSwingup>(); }
std::unique_ptr<Environment> point_mass_2d() { return std::make_unique<PointMass2d>(); }
std::unique_ptr<Environment> double_integrator_1d() { return std::make_unique<DoubleIntegrator1d>(); }

bool is_known_environment(std::string_view name) {
  return name == "pendulum" || name == "pointmass" || name == "integrator";
}

std::unique_ptr<Environment> make_environment(std::string_view name) {
  if (name == "pendulum") return pendulum_swingup();
  if (name == "pointmass") return point_mass_2d();
  if (name == "integrator") return double_integrator_1d();
  throw std::invalid_argument("unknown environment \"" + std::string(name) +
                              "\" (expected pendulum, pointmass or integrator)");
}

}  // namespace acn
