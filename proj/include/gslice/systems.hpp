#pragma once

// The two explicit integrable systems: pullbacks of the invariant
// generators completed by linear coordinates, and the argument-shift
// (Mishchenko-Fomenko) family. Verification sweeps for commutativity and
// functional independence.

#include "gslice/symplectic.hpp"

namespace gslice {

enum class SystemKind { invariant_pullback, mishchenko_fomenko };

inline const char* to_string(SystemKind k) {
    return k == SystemKind::invariant_pullback ? "invariant_pullback" : "mishchenko_fomenko";
}

struct IntegrableSystem {
    SystemKind kind;
    std::vector<Observable> observables;
    std::vector<AlgebraFunction> downstairs;  // the same functions on the algebra
    int declared_rank = 0;
    std::optional<Matrix> shift;             // beta, MF only
    std::vector<int> selected_coords;        // retained basis indices, pullback only
};

/// Coordinate function theta_j (j-th basis coordinate) with its gradient
/// under the context form.
inline AlgebraFunction coordinate_function(const LieContext& ctx, int j) {
    AlgebraFunction f;
    f.name = "theta" + std::to_string(j);
    f.degree = 1;
    const LieContext* c = &ctx;
    // gradient m solves pair(m, v) = coord_j(v): G m_coords = e_j
    Vector ej = Vector::Zero(ctx.dim());
    ej(j) = 1.0;
    const Matrix grad = ctx.from_coordinates(ctx.gram().fullPivLu().solve(ej));
    f.value = [c, j](const Matrix& x) { return c->coordinates(x)(j); };
    f.gradient = [grad](const Matrix&) { return grad; };
    return f;
}

namespace detail {

/// Jacobian of the invariant map in basis coordinates: rows are
/// df_i(b_j) = tr(grad_tf f_i(x) * b_j). Form-free.
inline Matrix invariant_jacobian(const LieContext& ctx, const Matrix& x) {
    const auto fs = invariants(ctx);
    const double unscale = 1.0 / gradient_scale(ctx);
    Matrix jac(ctx.rank(), ctx.dim());
    for (int i = 0; i < ctx.rank(); ++i) {
        const Matrix g = unscale * fs[i].gradient(x);  // trace-form gradient
        for (int j = 0; j < ctx.dim(); ++j) jac(i, j) = (g * ctx.basis()[j]).trace();
    }
    return jac;
}

}  // namespace detail

/// Invariant pullbacks f_i o phi completed by dim - rank coordinate
/// pullbacks. The dropped coordinates are the column pivots of the invariant
/// Jacobian at the probe point, so the retained set stays independent.
inline IntegrableSystem build_invariant_pullback(const LieContext& ctx, const SlodowySlice& slice,
                                                 const Matrix& probe) {
    if (!classify(ctx, probe).is_regular)
        throw std::invalid_argument("build_invariant_pullback: probe is not regular");
    const Matrix jac = detail::invariant_jacobian(ctx, probe);
    {
        Eigen::JacobiSVD<Matrix> svd(jac);
        if (detail::numerical_rank(svd.singularValues(), ctx.tol().rank_tol, 1.0).rank != ctx.rank())
            throw std::invalid_argument(
                "build_invariant_pullback: invariant gradients degenerate at probe");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(jac);
    const auto perm = qr.colsPermutation().indices();
    std::vector<bool> dropped(ctx.dim(), false);
    for (int i = 0; i < ctx.rank(); ++i) dropped[perm(i)] = true;

    IntegrableSystem sys;
    sys.kind = SystemKind::invariant_pullback;
    sys.declared_rank = ctx.rank();
    for (auto& f : invariants(ctx)) {
        sys.observables.push_back(pullback(ctx, slice, f));
        sys.downstairs.push_back(f);
    }
    for (int j = 0; j < ctx.dim(); ++j) {
        if (dropped[j]) continue;
        sys.selected_coords.push_back(j);
        auto f = coordinate_function(ctx, j);
        sys.observables.push_back(pullback(ctx, slice, f));
        sys.downstairs.push_back(std::move(f));
    }
    return sys;
}

/// Argument-shift system for a regular semisimple beta. Default excludes the
/// constant top derivatives so the count is exactly (dim + rank) / 2;
/// include_constants restores the full j range.
inline IntegrableSystem build_mf(const LieContext& ctx, const SlodowySlice& slice,
                                 const Matrix& beta, bool include_constants = false) {
    const auto cls = classify(ctx, beta);
    if (!cls.is_regular || cls.is_semisimple != TriState::yes)
        throw std::invalid_argument("build_mf: beta must be regular semisimple");
    IntegrableSystem sys;
    sys.kind = SystemKind::mishchenko_fomenko;
    sys.shift = beta;
    sys.declared_rank = (ctx.dim() + ctx.rank()) / 2;
    for (auto& f : invariants(ctx)) {
        const int jmax = include_constants ? f.degree : f.degree - 1;
        for (int j = 0; j <= jmax; ++j) {
            auto s = shift_function(ctx, f, beta, j);
            sys.observables.push_back(pullback(ctx, slice, s));
            sys.downstairs.push_back(std::move(s));
        }
    }
    return sys;
}

struct CommutativityReport {
    double max_upstairs = 0.0;    // symplectic engine on G x S_reg
    double max_downstairs = 0.0;  // Lie-Poisson engine at phi(p)
};

/// Bracket residual sweep. For the invariant-pullback system only pairs with
/// one index among the first declared_rank functions are required to vanish;
/// for MF all pairs commute.
inline CommutativityReport verify_commutativity(const LieContext& ctx, const SlodowySlice& slice,
                                                const IntegrableSystem& sys,
                                                const std::vector<PhasePoint>& points) {
    CommutativityReport rep;
    const int count = static_cast<int>(sys.observables.size());
    const int afirst = sys.kind == SystemKind::invariant_pullback ? ctx.rank() : count;
    for (const auto& p : points) {
        std::vector<TangentVector> fields(count);
        for (int i = 0; i < count; ++i)
            fields[i] = hamiltonian_field(ctx, slice, p, sys.observables[i]);
        const Matrix img = phi(p);
        for (int a = 0; a < count; ++a)
            for (int b = a + 1; b < count; ++b) {
                if (a >= afirst && b >= afirst) continue;
                rep.max_upstairs =
                    std::max(rep.max_upstairs, std::abs(omega(ctx, p, fields[a], fields[b])));
                rep.max_downstairs = std::max(
                    rep.max_downstairs,
                    std::abs(lie_poisson(ctx, sys.downstairs[a], sys.downstairs[b], img)));
            }
    }
    return rep;
}

struct IndependenceReport {
    int point_count = 0;
    int function_count = 0;
    std::vector<int> ranks;       // per point
    std::vector<double> min_sv;   // per point
    int full_rank_points = 0;
    double full_rank_fraction() const {
        return point_count ? static_cast<double>(full_rank_points) / point_count : 0.0;
    }
};

/// Stack the differentials of all system observables at each point and
/// measure their numerical rank.
inline IndependenceReport verify_independence(const LieContext& ctx, const SlodowySlice& slice,
                                              const IntegrableSystem& sys,
                                              const std::vector<PhasePoint>& points) {
    IndependenceReport rep;
    rep.point_count = static_cast<int>(points.size());
    rep.function_count = static_cast<int>(sys.observables.size());
    const int m = ctx.dim() + slice.rank();
    for (const auto& p : points) {
        Matrix d(rep.function_count, m);
        for (int i = 0; i < rep.function_count; ++i)
            d.row(i) = sys.observables[i].diff(p).transpose();
        Eigen::JacobiSVD<Matrix> svd(d);
        const auto dec = detail::numerical_rank(svd.singularValues(), ctx.tol().rank_tol, 1.0);
        rep.ranks.push_back(dec.rank);
        rep.min_sv.push_back(svd.singularValues()(svd.singularValues().size() - 1));
        if (dec.rank == rep.function_count) ++rep.full_rank_points;
    }
    return rep;
}

struct LocusProbeRow {
    int gradient_rank = 0;
    bool is_regular = false;
    bool uncertain = false;
    bool consistent = false;  // rank == rk(ctx) exactly when regular
};

struct LocusProbeReport {
    std::vector<LocusProbeRow> rows;
    int inconsistent = 0;
    int excluded_uncertain = 0;
};

/// The regular locus is exactly where the invariant gradients reach full
/// rank; sampled in both directions.
inline LocusProbeReport regularity_locus_probe(const LieContext& ctx,
                                               const std::vector<Matrix>& points) {
    LocusProbeReport rep;
    for (const auto& x : points) {
        LocusProbeRow row;
        const Matrix jac = detail::invariant_jacobian(ctx, x);
        Eigen::JacobiSVD<Matrix> svd(jac);
        row.gradient_rank = detail::numerical_rank(svd.singularValues(), ctx.tol().rank_tol, 1.0).rank;
        const auto cls = classify(ctx, x);
        row.is_regular = cls.is_regular;
        row.uncertain = cls.is_semisimple == TriState::uncertain;
        if (row.uncertain) {
            ++rep.excluded_uncertain;
        } else {
            row.consistent = (row.gradient_rank == ctx.rank()) == row.is_regular;
            if (!row.consistent) ++rep.inconsistent;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace gslice
