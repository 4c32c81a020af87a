#pragma once

// Hamiltonian flows on G x S_reg. Runge-Kutta-Munthe-Kaas order 4: the group
// component is advanced by a single exponential per step built from the
// truncated dexpinv series, which keeps states on G exactly (up to the det
// renormalization); the slice component updates linearly in coordinates.

#include "gslice/systems.hpp"

namespace gslice {

struct FlowOptions {
    double step = 1e-3;
    double horizon = 1.0;
    double error_cap = 1e-6;       // step-doubling local error cap; <=0 disables
    bool estimate_error = true;
};

struct Trajectory {
    PhasePoint initial;
    int hamiltonian_index = 0;
    double step = 0.0;
    double horizon = 0.0;
    std::vector<double> times;
    std::vector<PhasePoint> states;
    double max_local_error = 0.0;
};

namespace detail {

struct FieldValue {
    Matrix y;        // right-trivialized group velocity
    Vector z;        // slice-coordinate velocity
};

inline FieldValue eval_field(const LieContext& ctx, const SlodowySlice& slice,
                             const Observable& obs, const Matrix& g, const Vector& c) {
    PhasePoint p{g, c, slice.point(c)};
    const Matrix om = omega_matrix(ctx, slice, p);
    const Vector d = obs.diff(p);
    Eigen::FullPivLU<Matrix> lu(om);
    if (!lu.isInvertible()) throw NumericalFailure("flow: omega singular along the path");
    const Vector v = lu.solve(-d);
    return {ctx.from_coordinates(v.head(ctx.dim())), v.tail(slice.rank())};
}

/// dexpinv_u(y) truncated after the double commutator; enough for order 4.
inline Matrix dexpinv(const Matrix& u, const Matrix& y) {
    const Matrix c1 = commutator(u, y);
    return y - 0.5 * c1 + (1.0 / 12.0) * commutator(u, c1);
}

struct State {
    Matrix g;
    Vector c;
};

inline State rkmk4_step(const LieContext& ctx, const SlodowySlice& slice, const Observable& obs,
                        const State& s, double h) {
    const auto a1 = eval_field(ctx, slice, obs, s.g, s.c);
    const Matrix k1 = a1.y;

    const Matrix u2 = 0.5 * h * k1;
    const Vector c2 = s.c + 0.5 * h * a1.z;
    const auto a2 = eval_field(ctx, slice, obs, group_exp(u2) * s.g, c2);
    const Matrix k2 = dexpinv(u2, a2.y);

    const Matrix u3 = 0.5 * h * k2;
    const Vector c3 = s.c + 0.5 * h * a2.z;
    const auto a3 = eval_field(ctx, slice, obs, group_exp(u3) * s.g, c3);
    const Matrix k3 = dexpinv(u3, a3.y);

    const Matrix u4 = h * k3;
    const Vector c4 = s.c + h * a3.z;
    const auto a4 = eval_field(ctx, slice, obs, group_exp(u4) * s.g, c4);
    const Matrix k4 = dexpinv(u4, a4.y);

    State out;
    out.g = group_exp((h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)) * s.g;
    out.c = s.c + (h / 6.0) * (a1.z + 2.0 * a2.z + 2.0 * a3.z + a4.z);
    return out;
}

}  // namespace detail

/// Integrate the Hamiltonian flow of system observable obs_index from p0.
inline Trajectory integrate(const LieContext& ctx, const SlodowySlice& slice,
                            const IntegrableSystem& sys, int obs_index, const PhasePoint& p0,
                            const FlowOptions& opt = {}) {
    if (obs_index < 0 || obs_index >= static_cast<int>(sys.observables.size()))
        throw std::invalid_argument("integrate: bad observable index");
    if (opt.step <= 0 || opt.horizon < opt.step)
        throw std::invalid_argument("integrate: need step > 0 and horizon >= step");
    const Observable& obs = sys.observables[obs_index];

    Trajectory traj;
    traj.initial = p0;
    traj.hamiltonian_index = obs_index;
    traj.step = opt.step;
    traj.horizon = opt.horizon;

    const int nsteps = static_cast<int>(std::llround(opt.horizon / opt.step));
    const int stride = std::max(1, static_cast<int>(opt.horizon / (100.0 * opt.step)));

    detail::State s{p0.g, p0.x_coords};
    traj.times.push_back(0.0);
    traj.states.push_back(p0);
    for (int step = 1; step <= nsteps; ++step) {
        const detail::State full = detail::rkmk4_step(ctx, slice, obs, s, opt.step);
        if (opt.estimate_error) {
            const detail::State half =
                detail::rkmk4_step(ctx, slice, obs,
                                   detail::rkmk4_step(ctx, slice, obs, s, 0.5 * opt.step),
                                   0.5 * opt.step);
            const double err = frob(full.g - half.g) + (full.c - half.c).norm();
            traj.max_local_error = std::max(traj.max_local_error, err);
            if (opt.error_cap > 0 && err > opt.error_cap)
                throw NumericalFailure("integrate: local error estimate " + std::to_string(err) +
                                       " exceeds cap at step " + std::to_string(step));
            s = half;  // keep the more accurate state
        } else {
            s = full;
        }
        if (step % stride == 0 || step == nsteps) {
            traj.times.push_back(step * opt.step);
            traj.states.push_back(make_phase_point(ctx, slice, s.g, s.c));
        }
    }
    return traj;
}

/// Max relative deviation of each observable along the trajectory.
inline std::vector<double> conservation_report(const Trajectory& traj,
                                               const std::vector<Observable>& observables) {
    std::vector<double> drift(observables.size(), 0.0);
    if (traj.states.empty()) return drift;
    std::vector<Cplx> initial(observables.size());
    for (std::size_t i = 0; i < observables.size(); ++i)
        initial[i] = observables[i].value(traj.states.front());
    for (const auto& p : traj.states)
        for (std::size_t i = 0; i < observables.size(); ++i) {
            const double dev = std::abs(observables[i].value(p) - initial[i]) /
                               (1.0 + std::abs(initial[i]));
            drift[i] = std::max(drift[i], dev);
        }
    return drift;
}

inline std::vector<double> conservation_report(const Trajectory& traj,
                                               const IntegrableSystem& sys) {
    return conservation_report(traj, sys.observables);
}

}  // namespace gslice
