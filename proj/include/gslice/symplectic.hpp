#pragma once

// Phase space G x S_reg in right trivialization: the symplectic form, the
// map phi(g,x) = -Ad_{g^{-1}}(x) with its differential, Hamiltonian vector
// fields via dense linear solves, both Poisson bracket engines, and the
// fiber-geometry checks (isotropy, submersion, classification).

#include "gslice/slodowy.hpp"

namespace gslice {

struct PhasePoint {
    Matrix g;
    Vector x_coords;
    Matrix x;  // cached slice point
};

inline PhasePoint make_phase_point(const LieContext& ctx, const SlodowySlice& slice,
                                   const Matrix& g, const Vector& coords) {
    ctx.check_group(g);
    return {g, coords, slice.point(coords)};
}

/// Right-trivialized tangent vector: y in g, z in span of the slice basis.
struct TangentVector {
    Matrix y;
    Matrix z;
};

inline Matrix phi(const PhasePoint& p) {
    return -adjoint_action(p.g.inverse(), p.x);
}

/// d phi at p applied to (y, z): Ad_{g^{-1}}([y, x] - z).
inline Matrix d_phi(const PhasePoint& p, const TangentVector& v) {
    return adjoint_action(p.g.inverse(), commutator(v.y, p.x) - v.z);
}

/// omega((y1,z1),(y2,z2)) = <y1,z2> - <y2,z1> - <x,[y1,y2]>.
inline Cplx omega(const LieContext& ctx, const PhasePoint& p, const TangentVector& v1,
                  const TangentVector& v2) {
    return pair(ctx, v1.y, v2.z) - pair(ctx, v2.y, v1.z) -
           pair(ctx, p.x, commutator(v1.y, v2.y));
}

/// Tangent basis at any phase point: (b_i, 0) for the context basis, then
/// (0, s_k) for the slice basis. Length dim + rank.
inline TangentVector tangent_basis_vector(const LieContext& ctx, const SlodowySlice& slice,
                                          int i) {
    const int n = ctx.n();
    if (i < ctx.dim()) return {ctx.basis()[i], Matrix::Zero(n, n)};
    return {Matrix::Zero(n, n), slice.basis()[i - ctx.dim()]};
}

inline TangentVector tangent_from_coordinates(const LieContext& ctx, const SlodowySlice& slice,
                                              const Vector& v) {
    const int n = ctx.n();
    Matrix y = ctx.from_coordinates(v.head(ctx.dim()));
    Matrix z = Matrix::Zero(n, n);
    for (int k = 0; k < slice.rank(); ++k) z += v(ctx.dim() + k) * slice.basis()[k];
    return {y, z};
}

/// Gram matrix of omega on the tangent basis; antisymmetric by construction.
inline Matrix omega_matrix(const LieContext& ctx, const SlodowySlice& slice,
                           const PhasePoint& p) {
    const int dim = ctx.dim(), rank = slice.rank();
    const int m = dim + rank;
    Matrix om = Matrix::Zero(m, m);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const Cplx w = -pair(ctx, p.x, commutator(ctx.basis()[i], ctx.basis()[j]));
            om(i, j) = w;
            om(j, i) = -w;
        }
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < rank; ++k) {
            const Cplx w = pair(ctx, ctx.basis()[i], slice.basis()[k]);
            om(i, dim + k) = w;
            om(dim + k, i) = -w;
        }
    return om;
}

/// A function on the phase space with its differential as a covector on the
/// tangent basis.
struct Observable {
    std::string name;
    std::function<Cplx(const PhasePoint&)> value;
    std::function<Vector(const PhasePoint&)> diff;
};

/// Pullback f o phi of a polynomial on the algebra.
inline Observable pullback(const LieContext& ctx, const SlodowySlice& slice,
                           const AlgebraFunction& f) {
    Observable obs;
    obs.name = f.name + "*phi";
    const LieContext* c = &ctx;
    const SlodowySlice* s = &slice;
    AlgebraFunction fn = f;
    obs.value = [c, fn](const PhasePoint& p) { return fn.value(phi(p)); };
    obs.diff = [c, s, fn](const PhasePoint& p) {
        const Matrix grad = fn.gradient(phi(p));
        // <grad, Ad_{g^{-1}}(m)> = <Ad_g(grad), m>
        const Matrix gprime = adjoint_action(p.g, grad);
        Vector d(c->dim() + s->rank());
        for (int i = 0; i < c->dim(); ++i)
            d(i) = pair(*c, gprime, commutator(c->basis()[i], p.x));
        for (int k = 0; k < s->rank(); ++k)
            d(c->dim() + k) = -pair(*c, gprime, s->basis()[k]);
        return d;
    };
    return obs;
}

/// H_y = <phi(.), y>, the moment-map component for direction y.
inline Observable moment_component(const LieContext& ctx, const SlodowySlice& slice,
                                   const Matrix& y) {
    return pullback(ctx, slice, linear_function(ctx, y, "H_y"));
}

/// Unique v with omega(v, w) = df(w) for all w.
inline TangentVector hamiltonian_field(const LieContext& ctx, const SlodowySlice& slice,
                                       const PhasePoint& p, const Observable& obs) {
    const Matrix om = omega_matrix(ctx, slice, p);
    const Vector d = obs.diff(p);
    Eigen::FullPivLU<Matrix> lu(om);
    if (!lu.isInvertible())
        throw NumericalFailure("hamiltonian_field: omega matrix is singular at this point");
    // omega(v, w_j) = sum_i v_i Om_ij = d_j, and Om^T = -Om
    const Vector v = lu.solve(-d);
    return tangent_from_coordinates(ctx, slice, v);
}

/// Poisson bracket upstairs: omega(X_f, X_h).
inline Cplx bracket_up(const LieContext& ctx, const SlodowySlice& slice, const PhasePoint& p,
                       const Observable& f, const Observable& h) {
    const TangentVector vf = hamiltonian_field(ctx, slice, p, f);
    const TangentVector vh = hamiltonian_field(ctx, slice, p, h);
    return omega(ctx, p, vf, vh);
}

/// Lie-Poisson bracket downstairs: {f,h}(y) = <y, [grad f, grad h]>.
inline Cplx lie_poisson(const LieContext& ctx, const AlgebraFunction& f,
                        const AlgebraFunction& h, const Matrix& y) {
    return pair(ctx, y, commutator(f.gradient(y), h.gradient(y)));
}

/// |{f o phi, h o phi}(p) - {f, h}(phi(p))| -- the two bracket engines must
/// agree because phi is a Poisson morphism.
inline double verify_poisson_morphism(const LieContext& ctx, const SlodowySlice& slice,
                                      const PhasePoint& p, const AlgebraFunction& f,
                                      const AlgebraFunction& h) {
    const Cplx up = bracket_up(ctx, slice, p, pullback(ctx, slice, f), pullback(ctx, slice, h));
    const Cplx down = lie_poisson(ctx, f, h, phi(p));
    return std::abs(up - down);
}

/// Residual of the moment-map identity X_{H_y} = (-Ad_g(y), 0).
inline double verify_moment_map(const LieContext& ctx, const SlodowySlice& slice,
                                const PhasePoint& p, const Matrix& y) {
    const TangentVector field = hamiltonian_field(ctx, slice, p, moment_component(ctx, slice, y));
    const Matrix expected = -adjoint_action(p.g, y);
    return frob(field.y - expected) + frob(field.z);
}

/// max over centralizer basis pairs of |<tilde_x, [v_i, v_j]>|.
inline double isotropy_residual(const LieContext& ctx, const Matrix& tilde_x,
                                const CentralizerBasis& cb) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cb.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < cb.vectors.size(); ++j)
            worst = std::max(worst,
                             std::abs(pair(ctx, tilde_x, commutator(cb.vectors[i], cb.vectors[j]))));
    return worst;
}

enum class FiberKind { torus, nilpotent_type, mixed, uncertain };

inline const char* to_string(FiberKind k) {
    switch (k) {
        case FiberKind::torus: return "torus";
        case FiberKind::nilpotent_type: return "nilpotent_type";
        case FiberKind::mixed: return "mixed";
        default: return "uncertain";
    }
}

struct FiberReport {
    Matrix base;
    Matrix tilde_x;
    CentralizerBasis centralizer;
    int fiber_dim = 0;
    FiberKind kind = FiberKind::uncertain;
    std::optional<int> component_count_theoretical;  // empty means unknown
    double isotropy = 0.0;
};

/// Geometry of the fiber over a regular x: slice representative, its
/// centralizer, dimension, type, and theoretical component count.
inline FiberReport fiber_report(const LieContext& ctx, const SlodowySlice& slice,
                                const Matrix& x) {
    const auto cls = classify(ctx, x);
    if (!cls.is_regular) throw std::invalid_argument("fiber_report: x is not regular");
    FiberReport r;
    r.base = x;
    auto rep = slice_representative(ctx, slice, x);
    r.tilde_x = rep.tilde_x;
    r.centralizer = centralizer(ctx, r.tilde_x);
    r.fiber_dim = ctx.rank();
    r.isotropy = isotropy_residual(ctx, r.tilde_x, r.centralizer);

    Eigen::ComplexEigenSolver<Matrix> es(x, false);
    const double scale = 1.0 + frob(x);
    const bool all_zero = es.eigenvalues().cwiseAbs().maxCoeff() <= ctx.tol().cluster_tol * scale;
    if (cls.is_semisimple == TriState::uncertain) {
        r.kind = FiberKind::uncertain;
    } else if (cls.is_semisimple == TriState::yes) {
        r.kind = FiberKind::torus;
        r.component_count_theoretical = 1;
    } else if (all_zero) {
        r.kind = FiberKind::nilpotent_type;
        r.component_count_theoretical = ctx.n();  // |Z(SL_n)|
    } else {
        r.kind = FiberKind::mixed;
    }
    return r;
}

/// Seeded random phase point. scale shrinks both the slice coordinates and
/// the group exponent; flow tests use small scales to keep noncompact
/// Hamiltonian trajectories bounded over the integration horizon.
inline PhasePoint sample_phase_point(const LieContext& ctx, const SlodowySlice& slice,
                                     std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dull + 0xb5297a4d3f852c2full);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector coords(slice.rank());
    for (int k = 0; k < slice.rank(); ++k) coords(k) = scale * Cplx(uni(rng), uni(rng));
    Matrix y = detail::draw_traceless(ctx, rng);
    const double cap = 1.5 * std::min(1.0, scale);
    if (frob(y) > cap) y *= cap / frob(y);
    return make_phase_point(ctx, slice, group_exp(y), coords);
}

struct AisCertificate {
    int phase_dim = 0;
    int expected_dim = 0;  // dim(G) + rk(G)
    bool dim_ok = false;
    int samples = 0;
    int regular_failures = 0;
    bool pass() const { return dim_ok && regular_failures == 0; }
};

/// The two hypotheses for the moment-map route to an abstract integrable
/// system: exact dimension identity and image inside the regular locus.
inline AisCertificate ais_certificate(const LieContext& ctx, const SlodowySlice& slice,
                                      int samples, std::uint64_t seed) {
    AisCertificate cert;
    cert.phase_dim = ctx.dim() + slice.rank();
    cert.expected_dim = ctx.dim() + ctx.rank();
    cert.dim_ok = cert.phase_dim == cert.expected_dim;
    cert.samples = samples;
    for (int s = 0; s < samples; ++s) {
        const PhasePoint p = sample_phase_point(ctx, slice, seed + s);
        if (!classify(ctx, phi(p)).is_regular) ++cert.regular_failures;
    }
    return cert;
}

}  // namespace gslice
