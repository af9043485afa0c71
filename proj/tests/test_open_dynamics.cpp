#include <doctest.h>

#include <cmath>
#include <complex>

#include "memkern/closed_dynamics.hpp"
#include "memkern/errors.hpp"
#include "memkern/open_dynamics.hpp"
#include "memkern/spectral_model.hpp"
#include "memkern/two_level.hpp"

using namespace memkern;

namespace {

Signal two_level_oracle(double gamma, const TimeGrid& grid, Stepper stepper,
                        PropagationStats* stats = nullptr) {
  const Spectrum spectrum = two_level_spectrum();
  const EthObservable obs = two_level_observable();
  const DiagonalState state = DiagonalState::pure(2, two_level_up_index());
  LindbladConfig config{gamma, grid, stepper};
  return oracle_decohered(spectrum, obs, state, config, stats);
}

}  // namespace

TEST_CASE("dephasing RHS reproduces the matrix identity on a hand example") {
  // rho = |+><+| with H = diag(-1, 1): d rho / dt has the off-diagonals
  // rotated by -2iE and damped by gamma, diagonals untouched.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 1.0;
  Eigen::MatrixXcd rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  const double gamma = 0.7;
  const Eigen::MatrixXcd out = lindblad_rhs(rho, h, gamma);
  CHECK(std::abs(out(0, 0)) <= 1e-15);
  CHECK(std::abs(out(1, 1)) <= 1e-15);
  // -i[H, rho]_{01} = -i(E0 - E1) rho01 = 2i * 0.5 = i; dissipator adds -gamma/2...
  // applied entrywise: -gamma * rho01 = -0.35.
  CHECK(out(0, 1).real() == doctest::Approx(-0.35).epsilon(1e-14));
  CHECK(out(0, 1).imag() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(out(1, 0) - std::conj(out(0, 1))) <= 1e-15);
}

TEST_CASE("two-level RK4 oracle matches the damped-cosine closed form") {
  const TimeGrid grid{1e-3, 10000};
  for (const double gamma : {0.5, 1.0, 2.0}) {
    PropagationStats stats;
    const Signal oracle = two_level_oracle(gamma, grid, Stepper::RungeKutta4, &stats);
    const Signal exact = damped_oscillator_solution(gamma, 1.0, grid);
    INFO("gamma ", gamma);
    CHECK(max_abs_diff(oracle, exact) <= 1e-9);
    CHECK(stats.max_trace_error <= 1e-12);
    CHECK(stats.max_hermiticity_defect <= 1e-12);
    CHECK(stats.min_eigenvalue >= -1e-12);
  }
}

TEST_CASE("discrete projective map converges to the master equation") {
  const double gamma = 0.5;
  const TimeGrid coarse{2e-3, 5000};
  const TimeGrid fine{1e-3, 10000};
  const Signal exact_c = damped_oscillator_solution(gamma, 1.0, coarse);
  const Signal exact_f = damped_oscillator_solution(gamma, 1.0, fine);

  const double err_c =
      max_abs_diff(two_level_oracle(gamma, coarse, Stepper::DiscreteMap), exact_c);
  const double err_f =
      max_abs_diff(two_level_oracle(gamma, fine, Stepper::DiscreteMap), exact_f);
  CHECK(err_c <= 0.01);
  // First-order splitting: halving dt roughly halves the deviation.
  CHECK(err_f <= 0.7 * err_c);
  CHECK(err_f >= 0.3 * err_c);
}

TEST_CASE("gamma = 0 propagation equals the spectral closed dynamics") {
  EthEnsembleConfig cfg;
  cfg.dimension = 12;
  cfg.half_width = 2.0;
  cfg.reference.kind = ReferenceKind::Oscillation;
  cfg.seed = 5;
  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable obs = build_observable(spectrum, cfg);
  const auto levels = select_initial_levels(obs, {0.9});
  const DiagonalState state = DiagonalState::pure(12, levels[0]);
  const TimeGrid grid{2e-3, 5000};

  const Signal closed = expectation_closed(spectrum, obs, state, grid);
  for (const auto stepper : {Stepper::RungeKutta4, Stepper::DiscreteMap}) {
    LindbladConfig config{0.0, grid, stepper};
    const Signal open = oracle_decohered(spectrum, obs, state, config, nullptr);
    INFO("stepper ", stepper == Stepper::RungeKutta4 ? "rk4" : "map");
    CHECK(max_abs_diff(open, closed) <= 1e-8);
  }
}

TEST_CASE("propagation invariants hold on an ETH ensemble") {
  EthEnsembleConfig cfg;
  cfg.dimension = 48;
  cfg.half_width = 3.0;
  cfg.reference.kind = ReferenceKind::Exponential;
  cfg.seed = 9;
  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable obs = build_observable(spectrum, cfg);
  const auto levels = select_initial_levels(obs, {0.75});
  const DiagonalState state = DiagonalState::pure(48, levels[0]);
  const TimeGrid grid{0.02, 500};

  PropagationStats stats;
  LindbladConfig config{0.3, grid, Stepper::RungeKutta4};
  oracle_decohered(spectrum, obs, state, config, &stats);
  CHECK(stats.max_trace_error <= 1e-9);
  CHECK(stats.max_hermiticity_defect <= 1e-10);
  CHECK(stats.min_eigenvalue >= -1e-6);
}

TEST_CASE("unstable step sizes are rejected or detected") {
  // The oracle wrapper enforces its stability precondition outright.
  const TimeGrid big{2.0, 10};
  const Spectrum spectrum = two_level_spectrum();
  const EthObservable obs = two_level_observable();
  const DiagonalState state = DiagonalState::pure(2, two_level_up_index());
  LindbladConfig config{0.0, big, Stepper::RungeKutta4};
  CHECK_THROWS_AS(oracle_decohered(spectrum, obs, state, config, nullptr),
                  std::invalid_argument);

  // The raw propagator only notices once positivity is violated.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 1.0;
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(2, 2);
  rho.entries(0, 0) = 0.5;
  rho.entries(0, 1) = 0.5;
  rho.entries(1, 0) = 0.5;
  rho.entries(1, 1) = 0.5;
  LindbladConfig raw{0.0, TimeGrid{2.0, 2000}, Stepper::RungeKutta4};
  CHECK_THROWS_AS(propagate_lindblad(rho, h, raw), PositivityLost);
}

TEST_CASE("discrete map needs gamma * dt < 1") {
  LindbladConfig config{600.0, TimeGrid{2e-3, 100}, Stepper::DiscreteMap};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  DensityMatrix rho;
  rho.entries = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
  // gamma * step = 1.2: more of the ensemble would collapse than exists.
  CHECK_THROWS_AS(step_discrete_map(rho, u, 600.0, 2e-3), std::invalid_argument);
}

TEST_CASE("oracle dimension guard") {
  Spectrum spectrum;
  spectrum.energies = Eigen::VectorXd::LinSpaced(1025, -1.0, 1.0);
  spectrum.half_width = 1.0;
  EthObservable obs;
  obs.matrix = Eigen::MatrixXd::Identity(1025, 1025);
  obs.eigenvalues = Eigen::VectorXd::Ones(1025);
  obs.eigenbasis = Eigen::MatrixXd::Identity(1025, 1025);
  obs.scale = 1.0;
  const DiagonalState state = DiagonalState::pure(1025, 0);
  LindbladConfig config{0.1, TimeGrid{0.01, 10}, Stepper::RungeKutta4};
  CHECK_THROWS_AS(oracle_decohered(spectrum, obs, state, config, nullptr),
                  DimensionTooLarge);
}
