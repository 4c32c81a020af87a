#pragma once

// The principal sl2-triple, the regular Slodowy slice xi + Z(eta), the
// power-trace invariant generators with gradients and directional
// derivatives, and the Newton solver that locates the unique slice point
// on each regular adjoint orbit (Kostant section).

#include "gslice/lie.hpp"

#include <functional>

namespace gslice {

struct Sl2Triple {
    Matrix xi;   // regular nilpotent, raising
    Matrix h;    // semisimple
    Matrix eta;  // regular nilpotent, lowering
};

/// Principal triple for sl_n: xi = sum E_{i,i+1}, h = diag(n-1, n-3, ...),
/// eta = sum i(n-i) E_{i+1,i}.
inline Sl2Triple principal_triple(const LieContext& ctx) {
    const int n = ctx.n();
    Matrix xi = Matrix::Zero(n, n), h = Matrix::Zero(n, n), eta = Matrix::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
        xi(i, i + 1) = 1.0;
        eta(i + 1, i) = static_cast<double>((i + 1) * (n - i - 1));
    }
    for (int i = 0; i < n; ++i) h(i, i) = static_cast<double>(n - 1 - 2 * i);
    return {xi, h, eta};
}

inline double triple_residual(const Sl2Triple& t) {
    return std::max({frob(commutator(t.xi, t.eta) - t.h),
                     frob(commutator(t.h, t.xi) - 2.0 * t.xi),
                     frob(commutator(t.h, t.eta) + 2.0 * t.eta)});
}

/// The slice S = xi + span{eta, eta^2, ..., eta^{n-1}}.
class SlodowySlice {
public:
    SlodowySlice(const LieContext& ctx, Sl2Triple triple) : triple_(std::move(triple)) {
        Matrix p = Matrix::Identity(ctx.n(), ctx.n());
        for (int k = 1; k < ctx.n(); ++k) {
            p = p * triple_.eta;
            if (frob(p) < 1e-14)
                throw NumericalFailure("SlodowySlice: eta power vanished, eta not regular");
            basis_.push_back(p);
        }
        // numerical rank of the basis must equal rank(ctx)
        Matrix stacked(ctx.dim(), ctx.rank());
        for (int k = 0; k < ctx.rank(); ++k) stacked.col(k) = ctx.coordinates(basis_[k]);
        Eigen::JacobiSVD<Matrix> svd(stacked);
        if (detail::numerical_rank(svd.singularValues(), 1e-12, 1.0).rank != ctx.rank())
            throw NumericalFailure("SlodowySlice: rank-deficient basis");
    }

    const Sl2Triple& triple() const { return triple_; }
    const std::vector<Matrix>& basis() const { return basis_; }
    int rank() const { return static_cast<int>(basis_.size()); }

    Matrix point(const Vector& coords) const {
        if (coords.size() != rank()) throw DimensionMismatch("slice point: wrong coord count");
        Matrix x = triple_.xi;
        for (int k = 0; k < rank(); ++k) x += coords(k) * basis_[k];
        return x;
    }

    /// Coordinates of (x - xi) in the slice basis; throws if x is off-slice.
    Vector coords_of(const LieContext& ctx, const Matrix& x, double tol = 1e-9) const {
        Matrix stacked(ctx.dim(), rank());
        for (int k = 0; k < rank(); ++k) stacked.col(k) = ctx.coordinates(basis_[k]);
        Vector rhs = ctx.coordinates(x - triple_.xi);
        Vector c = stacked.colPivHouseholderQr().solve(rhs);
        if ((stacked * c - rhs).norm() > tol * (1.0 + rhs.norm()))
            throw std::invalid_argument("coords_of: point is not on the slice");
        return c;
    }

private:
    Sl2Triple triple_;
    std::vector<Matrix> basis_;
};

/// A polynomial function on the algebra with an explicit gradient under the
/// context form (sharp of the differential).
struct AlgebraFunction {
    std::string name;
    int degree = 0;
    std::function<Cplx(const Matrix&)> value;
    std::function<Matrix(const Matrix&)> gradient;
};

namespace detail {

/// Form-dependent rescale: trace-form gradients carry over to the Killing
/// form with the type-A factor 1/(2n).
inline double gradient_scale(const LieContext& ctx) {
    return ctx.form() == FormKind::trace ? 1.0 : 1.0 / (2.0 * ctx.n());
}

}  // namespace detail

/// f_i(x) = tr(x^{i+1}) for i = 1..rank, with closed-form gradients.
inline std::vector<AlgebraFunction> invariants(const LieContext& ctx) {
    std::vector<AlgebraFunction> fs;
    const int n = ctx.n();
    const double gs = detail::gradient_scale(ctx);
    for (int i = 1; i <= ctx.rank(); ++i) {
        AlgebraFunction f;
        f.name = "f" + std::to_string(i);
        f.degree = i + 1;
        f.value = [i](const Matrix& x) {
            Matrix p = x.pow(i + 1);
            return p.trace();
        };
        f.gradient = [i, n, gs](const Matrix& x) -> Matrix {
            Matrix p = x.pow(i);
            return gs * static_cast<double>(i + 1) * traceless(p);
        };
        fs.push_back(std::move(f));
    }
    return fs;
}

/// Linear function x -> pair(a, x); gradient is a itself.
inline AlgebraFunction linear_function(const LieContext& ctx, const Matrix& a,
                                       std::string name = "linear") {
    AlgebraFunction f;
    f.name = std::move(name);
    f.degree = 1;
    Matrix acopy = a;
    const LieContext* c = &ctx;
    f.value = [c, acopy](const Matrix& x) { return pair(*c, acopy, x); };
    f.gradient = [acopy](const Matrix&) { return acopy; };
    return f;
}

/// Quadratic function x -> tr(x^2 a) with closed-form gradient.
inline AlgebraFunction quadratic_function(const LieContext& ctx, const Matrix& a,
                                          std::string name = "quadratic") {
    AlgebraFunction f;
    f.name = std::move(name);
    f.degree = 2;
    Matrix acopy = a;
    const double gs = detail::gradient_scale(ctx);
    f.value = [acopy](const Matrix& x) { return (x * x * acopy).trace(); };
    f.gradient = [acopy, gs](const Matrix& x) {
        Matrix g = gs * traceless(acopy * x + x * acopy);
        return g;
    };
    return f;
}

namespace detail {

/// Fixed Chebyshev nodes and the LU of the associated Vandermonde system,
/// used to extract polynomial coefficients exactly (up to conditioning).
struct ChebInterp {
    std::vector<double> nodes;
    Eigen::PartialPivLU<Matrix> lu;

    explicit ChebInterp(int degree) {
        const int m = degree + 1;
        nodes.resize(m);
        Matrix v(m, m);
        for (int r = 0; r < m; ++r) {
            nodes[r] = std::cos(M_PI * (r + 0.5) / m);
            Cplx p = 1.0;
            for (int c = 0; c < m; ++c) {
                v(r, c) = p;
                p *= nodes[r];
            }
        }
        // conditioning asserted once per degree
        Eigen::JacobiSVD<Matrix> svd(v);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= 0 || sv(0) / sv(sv.size() - 1) > 1e8)
            throw NumericalFailure("ChebInterp: ill-conditioned node set");
        lu.compute(v);
    }
};

inline const ChebInterp& cheb_interp(int degree) {
    static std::map<int, ChebInterp> cache;
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, ChebInterp(degree)).first;
    return it->second;
}

inline double factorial(int j) {
    double f = 1.0;
    for (int k = 2; k <= j; ++k) f *= k;
    return f;
}

}  // namespace detail

struct DirectionalDerivative {
    Cplx value;
    Matrix gradient;
};

/// j!-times the t^j coefficient of t -> f(x + t*beta), with its gradient in x.
/// Coefficients are extracted by interpolation at Chebyshev nodes.
inline DirectionalDerivative directional_derivative(const LieContext& ctx,
                                                    const AlgebraFunction& f,
                                                    const Matrix& beta, int j,
                                                    const Matrix& x) {
    if (j < 0 || j > f.degree)
        throw std::invalid_argument("directional_derivative: j out of range");
    const int d = f.degree;
    const auto& interp = detail::cheb_interp(d);
    const int m = d + 1;
    const int n = ctx.n();
    Vector vals(m);
    Matrix grads(m, n * n);
    for (int r = 0; r < m; ++r) {
        Matrix xt = x + interp.nodes[r] * beta;
        vals(r) = f.value(xt);
        Matrix g = f.gradient(xt);
        grads.row(r) = Eigen::Map<const Vector>(g.data(), n * n).transpose();
    }
    Vector coeffs = interp.lu.solve(vals);
    Matrix gcoeffs = interp.lu.solve(grads);
    const double fac = detail::factorial(j);
    DirectionalDerivative out;
    out.value = fac * coeffs(j);
    Vector grow = gcoeffs.row(j).transpose() * fac;
    out.gradient = Eigen::Map<const Matrix>(grow.data(), n, n);
    return out;
}

/// The argument-shift polynomial (d_beta)^j f_i as a standalone function.
inline AlgebraFunction shift_function(const LieContext& ctx, const AlgebraFunction& f,
                                      const Matrix& beta, int j) {
    AlgebraFunction out;
    out.name = f.name + "_d" + std::to_string(j);
    out.degree = f.degree - j;
    const LieContext* c = &ctx;
    AlgebraFunction base = f;
    Matrix b = beta;
    out.value = [c, base, b, j](const Matrix& x) {
        return directional_derivative(*c, base, b, j, x).value;
    };
    out.gradient = [c, base, b, j](const Matrix& x) {
        return directional_derivative(*c, base, b, j, x).gradient;
    };
    return out;
}

struct KostantResult {
    Vector coords;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int restarts_used = 0;
    double jacobian_min_sv = 0.0;
};

namespace detail {

/// F(slice_point(c)) stacked over the invariant generators.
inline Vector slice_invariant_values(const std::vector<AlgebraFunction>& fs, const Matrix& p) {
    Vector v(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) v(i) = fs[i].value(p);
    return v;
}

/// Jacobian dF/dc at a slice point. Entries are the form-free differentials
/// df_i(s_k) = tr(grad_tf f_i(p) * s_k); power-trace gradients make this
/// (i+1) tr(p^i s_k).
inline Matrix slice_jacobian(const SlodowySlice& slice, const Matrix& p, int rank) {
    Matrix jac(rank, rank);
    Matrix acc = p;  // p^{i+1} for row i; df_i(v) = (i+2) tr(p^{i+1} v)
    for (int i = 0; i < rank; ++i) {
        for (int k = 0; k < rank; ++k)
            jac(i, k) = static_cast<double>(i + 2) * (acc * slice.basis()[k]).trace();
        acc = acc * p;
    }
    return jac;
}

}  // namespace detail

/// Newton iteration for the slice point with prescribed invariant values.
/// Multi-start with bounded random perturbations; the Jacobian at the
/// solution is checked for invertibility (transversality).
inline KostantResult kostant_section(const LieContext& ctx, const SlodowySlice& slice,
                                     const Vector& target, std::uint64_t seed = 17,
                                     int max_restarts = 20, bool randomize_start = false) {
    if (target.size() != ctx.rank()) throw DimensionMismatch("kostant_section: bad target size");
    const auto fs = invariants(ctx);
    const double tol = ctx.tol().newton_tol * (1.0 + target.norm());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    KostantResult best;
    for (int restart = 0; restart <= max_restarts; ++restart) {
        Vector c = Vector::Zero(ctx.rank());
        if (restart > 0 || randomize_start) {
            const double radius = 1.0 + target.norm();
            for (int k = 0; k < ctx.rank(); ++k) c(k) = radius * Cplx(uni(rng), uni(rng));
        }
        double res = (detail::slice_invariant_values(fs, slice.point(c)) - target).norm();
        for (int iter = 0; iter < 60 && res > tol; ++iter) {
            const Matrix p = slice.point(c);
            Matrix jac = detail::slice_jacobian(slice, p, ctx.rank());
            Vector f = detail::slice_invariant_values(fs, p) - target;
            Vector dc = jac.colPivHouseholderQr().solve(-f);
            // backtracking line search on the residual norm
            double step = 1.0;
            double new_res = res;
            Vector cand = c;
            for (int halve = 0; halve < 12; ++halve) {
                cand = c + step * dc;
                new_res = (detail::slice_invariant_values(fs, slice.point(cand)) - target).norm();
                if (new_res < res) break;
                step *= 0.5;
            }
            if (new_res >= res) break;  // stalled
            c = cand;
            res = new_res;
        }
        if (res < best.residual) {
            best.coords = c;
            best.residual = res;
            best.restarts_used = restart;
        }
        if (best.residual <= tol) break;
    }
    best.converged = best.residual <= tol;
    if (best.converged) {
        Matrix jac = detail::slice_jacobian(slice, slice.point(best.coords), ctx.rank());
        Eigen::JacobiSVD<Matrix> svd(jac);
        best.jacobian_min_sv = svd.singularValues()(ctx.rank() - 1);
        if (best.jacobian_min_sv <= 1e-12)
            throw NumericalFailure("kostant_section: singular Jacobian at solution");
    }
    return best;
}

struct SliceRepresentative {
    Matrix tilde_x;
    Vector coords;
};

/// The unique slice point on the orbit of -x (regular x).
inline SliceRepresentative slice_representative(const LieContext& ctx, const SlodowySlice& slice,
                                                const Matrix& x, std::uint64_t seed = 17) {
    if (!classify(ctx, x).is_regular)
        throw std::invalid_argument("slice_representative: x is not regular");
    const auto fs = invariants(ctx);
    Vector target(ctx.rank());
    const Matrix mx = -x;
    for (int i = 0; i < ctx.rank(); ++i) target(i) = fs[i].value(mx);
    auto kr = kostant_section(ctx, slice, target, seed);
    if (!kr.converged)
        throw NumericalFailure("slice_representative: Newton failed, best residual " +
                               std::to_string(kr.residual));
    return {slice.point(kr.coords), kr.coords};
}

/// A group element g with Ad_{g^{-1}}(tilde_x) = minus_x. Both inputs must
/// be regular semisimple with matching eigenvalue multisets; eigenvectors
/// are matched greedily and g is renormalized to det 1.
inline Matrix conjugator(const LieContext& ctx, const Matrix& tilde_x, const Matrix& minus_x) {
    const int n = ctx.n();
    auto cls_a = classify(ctx, tilde_x);
    auto cls_b = classify(ctx, minus_x);
    if (cls_a.is_semisimple != TriState::yes || cls_b.is_semisimple != TriState::yes ||
        !cls_a.is_regular || !cls_b.is_regular)
        throw std::invalid_argument("conjugator: inputs must be regular semisimple");
    Eigen::ComplexEigenSolver<Matrix> ea(tilde_x), eb(minus_x);
    const Vector la = ea.eigenvalues(), lb = eb.eigenvalues();
    const double scale = 1.0 + frob(tilde_x);

    // greedy eigenvalue matching
    std::vector<int> match(n, -1);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        int bestj = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(la(i) - lb(j));
            if (d < bestd) {
                bestd = d;
                bestj = j;
            }
        }
        if (bestd > 1e-6 * scale)
            throw std::invalid_argument("conjugator: eigenvalue multisets do not match");
        match[i] = bestj;
        used[bestj] = true;
    }
    Matrix pa = ea.eigenvectors();
    Matrix pb(n, n);
    for (int i = 0; i < n; ++i) pb.col(i) = eb.eigenvectors().col(match[i]);
    Matrix g = pa * pb.inverse();
    g /= principal_root(g.determinant(), n);
    const double res = frob(adjoint_action(g.inverse(), tilde_x) - minus_x);
    if (res > 1e-7 * scale)
        throw NumericalFailure("conjugator: residual " + std::to_string(res) + " too large");
    return g;
}

}  // namespace gslice
