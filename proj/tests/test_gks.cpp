#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gkesn/errors.hpp"
#include "gkesn/gks/domain.hpp"
#include "gkesn/gks/solver.hpp"
#include "gkesn/numerics/fft.hpp"
#include "gkesn/numerics/rng.hpp"
#include "oracles.hpp"

using namespace gkesn;
using gks::DomainConfig;

namespace {

constexpr double kPi = std::numbers::pi;

/// Analytic symbol of the implicit operator at grid phase theta = q*dx:
/// independent rederivation of what build_linear_operator encodes.
std::complex<double> implicit_symbol(const DomainConfig& c, double theta) {
    const double dx = c.dx();
    const double d2 = (2.0 * std::cos(theta) - 2.0) / (dx * dx);
    const double d3_im = (std::sin(2.0 * theta) - 2.0 * std::sin(theta)) / (dx * dx * dx);
    const double d4 =
        (2.0 * std::cos(2.0 * theta) - 8.0 * std::cos(theta) + 6.0) / (dx * dx * dx * dx);
    return {1.0 + c.dt * (d2 + d4), c.dt * c.gamma * d3_im};
}

double mean_of(const std::vector<double>& u) {
    double s = 0.0;
    for (double v : u) s += v;
    return s / static_cast<double>(u.size());
}

}  // namespace

// ---- configuration -----------------------------------------------------------------

TEST_CASE("domain config validation") {
    DomainConfig c;
    CHECK(c.steps_per_sample() == 250);
    CHECK_NOTHROW(c.validate());

    DomainConfig bad = c;
    bad.length = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = c;
    bad.nx = 4;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = c;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = c;
    bad.dt_sample = 0.2498;  // not an integer multiple of dt
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

// ---- initial conditions --------------------------------------------------------------

TEST_CASE("initial condition parameters are drawn in a fixed order and range") {
    numerics::Rng rng(5);
    const gks::IcParams ic = gks::sample_ic_params(rng);

    numerics::Rng replay(5);
    const double c1 = replay.uniform01();
    const double c2 = replay.uniform01();
    const int p1 = static_cast<int>(replay.uniform_int(1, 6));
    const int p2 = static_cast<int>(replay.uniform_int(1, 6));
    CHECK(ic.c1 == c1);
    CHECK(ic.c2 == c2);
    CHECK(ic.p1 == p1);
    CHECK(ic.p2 == p2);

    numerics::Rng many(17);
    for (int i = 0; i < 500; ++i) {
        const gks::IcParams p = gks::sample_ic_params(many);
        CHECK(p.c1 >= 0.0);
        CHECK(p.c1 < 1.0);
        CHECK(p.c2 >= 0.0);
        CHECK(p.c2 < 1.0);
        CHECK(p.p1 >= 1);
        CHECK(p.p1 <= 6);
        CHECK(p.p2 >= 1);
        CHECK(p.p2 <= 6);
    }
}

TEST_CASE("initial condition field evaluates the two-cosine profile") {
    DomainConfig c;
    c.nx = 32;
    c.length = 22.0;
    const gks::IcParams ic{0.3, 0.8, 3, 5};
    const auto u = gks::initial_condition_field(c, ic);
    REQUIRE(u.size() == 32);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = static_cast<double>(j) * c.dx();
        const double want = 0.3 * std::cos(3.0 * x * kPi / 22.0) +
                            0.8 * std::cos(5.0 * x * kPi / 22.0);
        CHECK(u[j] == doctest::Approx(want).epsilon(1e-14));
    }
}

// ---- the implicit operator ------------------------------------------------------------

TEST_CASE("linear operator eigenvalues match the analytic stencil symbol") {
    for (double gamma : {0.0, 0.5, -1.3}) {
        DomainConfig c;
        c.gamma = gamma;
        c.nx = 64;
        const auto op = gks::build_linear_operator(c);
        REQUIRE(op.first_column.size() == 64);

        // Eigenvalues are the unnormalised DFT of the first column.
        const auto eig = oracles::naive_dft_real(op.first_column);
        for (std::size_t k = 0; k < c.nx; ++k) {
            const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(c.nx);
            const std::complex<double> want = implicit_symbol(c, theta);
            CHECK(std::abs(eig[k] - want) / std::max(1.0, std::abs(want)) < 1e-8);
        }
    }
}

TEST_CASE("linear operator rows sum to one (constants preserved)") {
    DomainConfig c;
    c.gamma = 0.7;
    const auto op = gks::build_linear_operator(c);
    CHECK(std::abs(op.row_sum() - 1.0) < 1e-9);
}

// ---- linear fidelity of a full step ------------------------------------------------------

TEST_CASE("small-amplitude modes grow and rotate at the continuum rates") {
    // A tiny single-mode field makes the nonlinear flux negligible, so the
    // update reduces to the linear solve; the measured per-window growth and
    // phase drift must then match exp((q^2 - q^4) T) and gamma q^3 T.
    DomainConfig c;
    c.length = 22.0;
    c.nx = 256;
    c.dt = 1e-3;
    c.gamma = 0.5;

    const std::size_t k = 2;
    const double q = 2.0 * kPi * static_cast<double>(k) / c.length;
    const double eps = 1e-8;
    std::vector<double> u(c.nx);
    for (std::size_t j = 0; j < c.nx; ++j) {
        u[j] = eps * std::cos(q * static_cast<double>(j) * c.dx());
    }

    const auto before = numerics::dft(u);
    gks::GksStepper stepper(c);
    const std::size_t steps = 500;
    for (std::size_t s = 0; s < steps; ++s) stepper.step_inplace(u);
    const auto after = numerics::dft(u);

    const double t = static_cast<double>(steps) * c.dt;
    const std::complex<double> ratio = after[k] / before[k];
    const double growth_want = std::exp((q * q - q * q * q * q) * t);
    const double phase_want = c.gamma * q * q * q * t;
    CHECK(std::abs(std::abs(ratio) - growth_want) / growth_want < 0.01);
    CHECK(std::abs(std::arg(ratio) - phase_want) / phase_want < 0.01);
}

TEST_CASE("the update conserves the spatial mean") {
    // The flux differences telescope around the ring and the implicit matrix
    // preserves constants, so the mean survives a long nonlinear run.
    DomainConfig c;
    c.nx = 128;
    numerics::Rng rng(3);
    auto u = gks::sample_initial_condition(c, rng);
    const double before = mean_of(u);
    gks::GksStepper stepper(c);
    for (int s = 0; s < 500; ++s) stepper.step_inplace(u);
    CHECK(std::abs(mean_of(u) - before) < 1e-9);
}

TEST_CASE("one-shot step equals the stepper") {
    DomainConfig c;
    c.nx = 64;
    numerics::Rng rng(8);
    auto u = gks::sample_initial_condition(c, rng);
    auto via_stepper = u;
    gks::GksStepper stepper(c);
    stepper.step_inplace(via_stepper);
    const auto via_one_shot = gks::step(c, u);
    CHECK(via_stepper == via_one_shot);
}

// ---- trajectories -------------------------------------------------------------------

TEST_CASE("simulate records the documented snapshot schedule") {
    DomainConfig c;
    c.nx = 64;
    c.dt = 1e-3;
    c.dt_sample = 0.05;
    numerics::Rng rng(21);
    const auto u0 = gks::sample_initial_condition(c, rng);

    const double transient = 0.1, record = 0.5;
    const auto traj = gks::simulate(c, u0, transient, record);
    CHECK(traj.t_start == transient);
    REQUIRE(traj.snapshots.rows() == c.nx);
    REQUIRE(traj.snapshots.cols() == 11);  // floor(0.5/0.05) + 1

    // Snapshot 0 is the post-transient state and later snapshots follow at
    // steps_per_sample intervals — bit-identical to manual stepping.
    std::vector<double> u(u0);
    gks::GksStepper stepper(c);
    for (int s = 0; s < 100; ++s) stepper.step_inplace(u);  // 0.1 / 1e-3
    for (std::size_t j = 0; j < c.nx; ++j) CHECK(traj.snapshots(j, 0) == u[j]);
    for (int s = 0; s < 50; ++s) stepper.step_inplace(u);  // one cadence
    for (std::size_t j = 0; j < c.nx; ++j) CHECK(traj.snapshots(j, 1) == u[j]);
}

TEST_CASE("generate_dataset is reproducible and thread-count independent") {
    DomainConfig c;
    c.nx = 64;
    c.dt = 2e-3;
    c.dt_sample = 0.1;
    c.seed = 99;
    const auto one = gks::generate_dataset(c, 4, 0.2, 0.4, 1);
    const auto three = gks::generate_dataset(c, 4, 0.2, 0.4, 3);
    REQUIRE(one.size() == 4);
    REQUIRE(three.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(one[i].seed == numerics::sub_seed(99, i));
        CHECK(one[i].snapshots.values() == three[i].snapshots.values());
    }
    // distinct initial conditions across trajectories
    CHECK(one[0].snapshots.values() != one[1].snapshots.values());
}

TEST_CASE("a violently unstable configuration reports a numerical failure") {
    DomainConfig c;
    c.nx = 64;
    c.dt = 0.25;
    c.dt_sample = 0.25;
    std::vector<double> u0(c.nx);
    for (std::size_t j = 0; j < c.nx; ++j) {
        u0[j] = 200.0 * std::cos(2.0 * kPi * static_cast<double>(j) / 64.0);
    }
    CHECK_THROWS_AS(gks::simulate(c, u0, 0.0, 50.0), NumericalError);
}
