#include "gkesn/gks/solver.hpp"

#include <cmath>
#include <string>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/parallel.hpp"

namespace gkesn::gks {

numerics::CirculantOperator build_linear_operator(const DomainConfig& config) {
    config.validate();
    const std::size_t n = config.nx;
    const double dx = config.dx();
    const double dx2 = dx * dx;
    const double dx3 = dx2 * dx;
    const double dx4 = dx2 * dx2;
    const double g = config.gamma;
    const double dt = config.dt;

    // Stencil coefficient for offset o lands in first-column slot (n - o) % n.
    numerics::CirculantOperator op;
    op.first_column.assign(n, 0.0);
    auto add = [&](std::int64_t offset, double value) {
        const std::size_t idx =
            static_cast<std::size_t>(((-offset) % static_cast<std::int64_t>(n) +
                                      static_cast<std::int64_t>(n)) %
                                     static_cast<std::int64_t>(n));
        op.first_column[idx] += value;
    };

    add(0, 1.0);  // identity
    // D2 / dx^2
    add(-1, dt * (1.0 / dx2));
    add(0, dt * (-2.0 / dx2));
    add(+1, dt * (1.0 / dx2));
    // gamma * D3 / (2 dx^3)
    add(-2, dt * g * (-1.0 / (2.0 * dx3)));
    add(-1, dt * g * (+2.0 / (2.0 * dx3)));
    add(+1, dt * g * (-2.0 / (2.0 * dx3)));
    add(+2, dt * g * (+1.0 / (2.0 * dx3)));
    // D4 / dx^4
    add(-2, dt * (1.0 / dx4));
    add(-1, dt * (-4.0 / dx4));
    add(0, dt * (6.0 / dx4));
    add(+1, dt * (-4.0 / dx4));
    add(+2, dt * (1.0 / dx4));
    return op;
}

GksStepper::GksStepper(const DomainConfig& config)
    : config_(config),
      solver_(build_linear_operator(config)),
      interface_flux_(config.nx, 0.0),
      rhs_(config.nx, 0.0) {}

void GksStepper::step_inplace(std::span<double> u) {
    const std::size_t n = config_.nx;
    if (u.size() != n) {
        throw ValidationError("GksStepper::step_inplace: state has " +
                              std::to_string(u.size()) + " points, grid has " +
                              std::to_string(n));
    }
    const double lambda = config_.dt / config_.dx();

    double max_abs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double uj = u[j];
        max_abs = std::max(max_abs, std::abs(uj));
        interface_flux_[j] = flux(uj, u[j + 1 == n ? 0 : j + 1]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        rhs_[j] = u[j] - lambda * (interface_flux_[j] - interface_flux_[j == 0 ? n - 1 : j - 1]);
    }
    solver_.solve(rhs_, u);

    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(u[j])) {
            throw NumericalError("gks step diverged: non-finite state at grid point " +
                                 std::to_string(j) + "; max |u| entering the step was " +
                                 std::to_string(max_abs));
        }
    }
}

std::vector<double> step(const DomainConfig& config, std::span<const double> u) {
    GksStepper stepper(config);
    std::vector<double> out(u.begin(), u.end());
    stepper.step_inplace(out);
    return out;
}

Trajectory simulate(const DomainConfig& config, std::span<const double> u0, double t_transient,
                    double t_record) {
    config.validate();
    if (!(t_transient >= 0.0) || !(t_record >= 0.0) || !std::isfinite(t_transient) ||
        !std::isfinite(t_record)) {
        throw ValidationError("simulate: transient and record windows must be >= 0");
    }
    if (u0.size() != config.nx) {
        throw ValidationError("simulate: initial state has " + std::to_string(u0.size()) +
                              " points, grid has " + std::to_string(config.nx));
    }

    GksStepper stepper(config);
    std::vector<double> u(u0.begin(), u0.end());

    const std::uint64_t transient_steps =
        static_cast<std::uint64_t>(std::llround(t_transient / config.dt));
    const std::uint64_t per_sample = config.steps_per_sample();
    const std::uint64_t n_snap =
        static_cast<std::uint64_t>(std::floor(t_record / config.dt_sample)) + 1;

    Trajectory traj;
    traj.config = config;
    traj.t_start = t_transient;
    traj.snapshots = numerics::DenseMatrix(config.nx, n_snap);

    std::uint64_t global_step = 0;
    auto advance = [&](std::uint64_t steps) {
        for (std::uint64_t s = 0; s < steps; ++s) {
            try {
                stepper.step_inplace(u);
            } catch (const NumericalError& e) {
                throw NumericalError(std::string(e.what()) + " (step " +
                                     std::to_string(global_step + 1) + ", t = " +
                                     std::to_string(static_cast<double>(global_step + 1) *
                                                    config.dt) +
                                     ")");
            }
            ++global_step;
        }
    };

    advance(transient_steps);
    for (std::uint64_t s = 0; s < n_snap; ++s) {
        if (s > 0) advance(per_sample);
        for (std::size_t j = 0; j < config.nx; ++j) {
            traj.snapshots(j, s) = u[j];
        }
    }
    return traj;
}

std::vector<Trajectory> generate_dataset(const DomainConfig& config, std::size_t n_traj,
                                         double t_transient, double t_record, int threads) {
    config.validate();
    if (n_traj == 0) throw ValidationError("generate_dataset: need at least one trajectory");

    std::vector<Trajectory> out(n_traj);
    numerics::parallel_for(n_traj, threads, [&](std::size_t i) {
        const std::uint64_t seed_i = numerics::sub_seed(config.seed, i);
        numerics::Rng rng(seed_i);
        IcParams ic;
        const std::vector<double> u0 = sample_initial_condition(config, rng, &ic);
        Trajectory t = simulate(config, u0, t_transient, t_record);
        t.ic = ic;
        t.seed = seed_i;
        out[i] = std::move(t);
    });
    return out;
}

}  // namespace gkesn::gks
