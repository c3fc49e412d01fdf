#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gkesn/gks/domain.hpp"
#include "gkesn/numerics/circulant.hpp"
#include "gkesn/numerics/dense_matrix.hpp"

namespace gkesn::gks {

/// Interface numerical flux of the quadratic advection term:
///
///   F(u_l, u_r) = (u_l^2 + u_l*u_r + u_r^2) / 6
///
/// It telescopes around the ring, so the discrete spatial mean is conserved
/// by the explicit half of the scheme.
inline double flux(double u_left, double u_right) {
    return (u_left * u_left + u_left * u_right + u_right * u_right) / 6.0;
}

/// Implicit-side operator M = I + dt * (D2 + gamma*D3 + D4) on the periodic
/// grid, as the first column of a circulant matrix. The central-difference
/// stencils are
///
///   D2: [ 1 -2  1     ] / dx^2    at offsets [-1 0 +1]
///   D3: [-1  2 -2  1  ] / (2dx^3) at offsets [-2 -1 +1 +2]
///   D4: [ 1 -4  6 -4 1] / dx^4    at offsets [-2 -1 0 +1 +2]
///
/// Every row sums to 1, so constants are preserved by the implicit solve.
numerics::CirculantOperator build_linear_operator(const DomainConfig& config);

/// One semi-implicit Euler step reused across a whole run: the circulant
/// operator is factorised once at construction, each step costs the explicit
/// flux sweep plus one transform-space solve.
///
/// Holds internal buffers; create one instance per thread.
class GksStepper {
public:
    explicit GksStepper(const DomainConfig& config);

    const DomainConfig& config() const { return config_; }
    const numerics::CirculantOperator& op() const { return solver_.op(); }

    /// Advance u by one dt in place. Throws NumericalError when the updated
    /// state stops being finite, reporting max |u| going into the step.
    void step_inplace(std::span<double> u);

private:
    DomainConfig config_;
    numerics::CirculantSolver solver_;
    std::vector<double> interface_flux_;
    std::vector<double> rhs_;
};

/// One-shot step convenience for small tests and exploration: factorises,
/// steps, discards.
std::vector<double> step(const DomainConfig& config, std::span<const double> u);

/// A simulated run: snapshots are columns, snapshot s was taken at
/// t_start + s * dt_sample.
struct Trajectory {
    DomainConfig config;
    IcParams ic;
    std::uint64_t seed = 0;  // sub-seed the initial condition was drawn from
    double t_start = 0.0;    // physical time of the first snapshot
    numerics::DenseMatrix snapshots;  // nx rows, one column per snapshot
};

/// Integrate from u0: discard floor(t_transient/dt) steps, then record
/// floor(t_record/dt_sample)+1 snapshots (the post-transient state is
/// snapshot 0). Blow-ups propagate as NumericalError annotated with the
/// elapsed physical time.
Trajectory simulate(const DomainConfig& config, std::span<const double> u0, double t_transient,
                    double t_record);

/// n_traj independent runs with initial conditions drawn from per-trajectory
/// sub-seeds of config.seed. Trajectories are simulated in parallel (at most
/// `threads` workers); each lands in its own slot, so the result is identical
/// for every thread count.
std::vector<Trajectory> generate_dataset(const DomainConfig& config, std::size_t n_traj,
                                         double t_transient, double t_record, int threads = 1);

}  // namespace gkesn::gks
