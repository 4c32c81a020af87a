#pragma once

// Matrix realization of sl_n(C) and SL_n(C): brackets, adjoint actions,
// invariant bilinear forms, exponentials, centralizers and regularity
// classification. Everything downstream (slices, symplectic structure,
// integrable systems) is built on top of this header.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gslice {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class FormKind { trace, killing };

inline const char* to_string(FormKind k) {
    return k == FormKind::trace ? "trace" : "killing";
}

/// Named tolerances, all overridable through the CLI.
struct Tolerances {
    double trace_tol = 1e-10;    // traceless check, relative
    double det_tol = 1e-9;       // |det(g) - 1| bound for group elements
    double rank_tol = 1e-8;      // SVD relative threshold for numerical rank
    double gap_tol = 1e3;        // required singular-value gap ratio at rank decisions
    double cluster_tol = 1e-7;   // eigenvalue clustering radius
    double newton_tol = 1e-10;   // Kostant-section residual, relative
    double gap_floor = 0.5;      // minimal eigenvalue spacing for regular semisimple samples
    double cond_max = 1e12;      // condition-number cap for omega nondegeneracy
    double bracket_tol = 1e-8;   // Poisson bracket / morphism residual threshold

    void set(const std::string& name, double value) {
        static const std::map<std::string, double Tolerances::*> fields = {
            {"trace", &Tolerances::trace_tol},   {"det", &Tolerances::det_tol},
            {"rank", &Tolerances::rank_tol},     {"gap", &Tolerances::gap_tol},
            {"cluster", &Tolerances::cluster_tol}, {"newton", &Tolerances::newton_tol},
            {"gap_floor", &Tolerances::gap_floor}, {"cond_max", &Tolerances::cond_max},
            {"bracket", &Tolerances::bracket_tol}};
        auto it = fields.find(name);
        if (it == fields.end()) throw std::invalid_argument("unknown tolerance: " + name);
        if (value <= 0) throw std::invalid_argument("tolerance must be positive: " + name);
        this->*(it->second) = value;
    }
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double frob(const Matrix& m) { return m.norm(); }

inline Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("commutator: size mismatch");
    return a * b - b * a;
}

/// Project onto traceless matrices (subtract the scalar part).
inline Matrix traceless(const Matrix& m) {
    const auto n = m.rows();
    return m - (m.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
}

inline bool is_traceless(const Matrix& m, double tol = 1e-10) {
    return std::abs(m.trace()) <= tol * (1.0 + frob(m));
}

/// The ambient algebra sl_n(C): basis, invariant form, invariant degrees.
/// Immutable after construction; all operations taking a context are pure.
class LieContext {
public:
    LieContext(int n, FormKind form = FormKind::trace, Tolerances tol = {})
        : n_(n), dim_(n * n - 1), rank_(n - 1), form_(form), tol_(tol) {
        if (n < 2) throw std::invalid_argument("LieContext: n must be >= 2");
        build_basis();
        build_gram();
    }

    int n() const { return n_; }
    int dim() const { return dim_; }
    int rank() const { return rank_; }
    FormKind form() const { return form_; }
    const Tolerances& tol() const { return tol_; }
    const std::vector<Matrix>& basis() const { return basis_; }
    const Matrix& gram() const { return gram_; }

    /// Invariant-generator degrees (2, 3, ..., n).
    std::vector<int> degrees() const {
        std::vector<int> d(rank_);
        for (int i = 0; i < rank_; ++i) d[i] = i + 2;
        return d;
    }

    /// Coordinates of a traceless matrix in the context basis.
    /// Basis order: H_k = E_kk - E_{k+1,k+1} for k = 0..n-2, then E_ij (i != j)
    /// row major. The diagonal coefficients are the partial sums of diag(x).
    Vector coordinates(const Matrix& x) const {
        check_algebra(x);
        Vector c(dim_);
        Cplx partial = 0.0;
        for (int k = 0; k < n_ - 1; ++k) {
            partial += x(k, k);
            c(k) = partial;
        }
        int idx = n_ - 1;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j) c(idx++) = x(i, j);
        return c;
    }

    Matrix from_coordinates(const Vector& c) const {
        if (c.size() != dim_) throw DimensionMismatch("from_coordinates: wrong length");
        Matrix x = Matrix::Zero(n_, n_);
        for (int k = 0; k < n_ - 1; ++k) {
            x(k, k) += c(k);
            x(k + 1, k + 1) -= c(k);
        }
        int idx = n_ - 1;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j) x(i, j) = c(idx++);
        return x;
    }

    void check_algebra(const Matrix& x) const {
        if (x.rows() != n_ || x.cols() != n_)
            throw DimensionMismatch("expected a " + std::to_string(n_) + "x" +
                                    std::to_string(n_) + " matrix");
        if (!x.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
        if (!is_traceless(x, tol_.trace_tol))
            throw std::invalid_argument("matrix is not traceless within tolerance");
    }

    void check_group(const Matrix& g) const {
        if (g.rows() != n_ || g.cols() != n_)
            throw DimensionMismatch("expected a " + std::to_string(n_) + "x" +
                                    std::to_string(n_) + " matrix");
        if (std::abs(g.determinant() - 1.0) > tol_.det_tol)
            throw std::invalid_argument("group element has |det - 1| above tolerance");
    }

private:
    void build_basis() {
        basis_.reserve(dim_);
        for (int k = 0; k < n_ - 1; ++k) {
            Matrix h = Matrix::Zero(n_, n_);
            h(k, k) = 1.0;
            h(k + 1, k + 1) = -1.0;
            basis_.push_back(h);
        }
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j) {
                    Matrix e = Matrix::Zero(n_, n_);
                    e(i, j) = 1.0;
                    basis_.push_back(e);
                }
    }

    void build_gram();  // needs pair(); defined below

    int n_, dim_, rank_;
    FormKind form_;
    Tolerances tol_;
    std::vector<Matrix> basis_;
    Matrix gram_;
};

inline Matrix bracket(const Matrix& a, const Matrix& b) { return commutator(a, b); }

/// Matrix of ad_x = [x, .] in the context basis.
inline Matrix ad_matrix(const LieContext& ctx, const Matrix& x) {
    ctx.check_algebra(x);
    Matrix a(ctx.dim(), ctx.dim());
    for (int j = 0; j < ctx.dim(); ++j)
        a.col(j) = ctx.coordinates(bracket(x, ctx.basis()[j]));
    return a;
}

/// Invariant bilinear form: tr(xy), or tr(ad_x ad_y) in killing mode.
inline Cplx pair(const LieContext& ctx, const Matrix& x, const Matrix& y) {
    if (ctx.form() == FormKind::trace) return (x * y).trace();
    return (ad_matrix(ctx, x) * ad_matrix(ctx, y)).trace();
}

inline void LieContext::build_gram() {
    gram_.resize(dim_, dim_);
    if (form_ == FormKind::trace) {
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                gram_(i, j) = gram_(j, i) = (basis_[i] * basis_[j]).trace();
    } else {
        std::vector<Matrix> ads(dim_);
        for (int i = 0; i < dim_; ++i) {
            Matrix a(dim_, dim_);
            for (int j = 0; j < dim_; ++j)
                a.col(j) = coordinates(commutator(basis_[i], basis_[j]));
            ads[i] = a;
        }
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                gram_(i, j) = gram_(j, i) = (ads[i] * ads[j]).trace();
    }
}

/// x -> <x, .>, as a covector on the context basis.
inline Vector flat(const LieContext& ctx, const Matrix& x) {
    Vector alpha(ctx.dim());
    for (int i = 0; i < ctx.dim(); ++i) alpha(i) = pair(ctx, x, ctx.basis()[i]);
    return alpha;
}

/// Inverse of flat. Throws if the Gram matrix is singular (broken basis).
inline Matrix sharp(const LieContext& ctx, const Vector& alpha) {
    if (alpha.size() != ctx.dim()) throw DimensionMismatch("sharp: wrong covector length");
    Eigen::FullPivLU<Matrix> lu(ctx.gram());
    if (!lu.isInvertible()) throw NumericalFailure("sharp: singular Gram matrix");
    return ctx.from_coordinates(lu.solve(alpha));
}

/// Principal n-th root of a nonzero complex number.
inline Cplx principal_root(Cplx z, int n) { return std::exp(std::log(z) / static_cast<double>(n)); }

/// Matrix exponential (scaling and squaring) renormalized to det 1.
inline Matrix group_exp(const Matrix& y) {
    Matrix g = y.exp();
    const int n = static_cast<int>(y.rows());
    return g / principal_root(g.determinant(), n);
}

/// Ad_g(x) = g x g^{-1}.
inline Matrix adjoint_action(const Matrix& g, const Matrix& x) {
    Eigen::FullPivLU<Matrix> lu(g);
    if (!lu.isInvertible()) throw NumericalFailure("adjoint_action: singular group element");
    return g * x * lu.inverse();
}

struct CentralizerBasis {
    Matrix base_point;
    std::vector<Matrix> vectors;  // Frobenius-orthonormal, each commutes with base_point
    double tol_used = 0.0;
};

namespace detail {

/// Numerical rank from a descending singular-value list, with a gap-ratio
/// sanity check. Returns rank and whether the decision is reliable.
struct RankDecision {
    int rank = 0;
    bool ambiguous = false;
    double gap_ratio = std::numeric_limits<double>::infinity();
};

inline RankDecision numerical_rank(const RealVector& sv, double rel_tol, double gap_tol) {
    RankDecision d;
    const double smax = sv.size() ? sv(0) : 0.0;
    if (smax == 0.0) return d;
    const double cut = rel_tol * smax;
    int r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    d.rank = r;
    if (r > 0 && r < sv.size()) {
        const double below = std::max(sv(r), smax * 1e-300);
        d.gap_ratio = sv(r - 1) / below;
        d.ambiguous = d.gap_ratio < gap_tol;
    }
    return d;
}

/// Gram-Schmidt in the Frobenius inner product tr(a^H b).
inline std::vector<Matrix> frobenius_orthonormalize(const std::vector<Matrix>& vs) {
    std::vector<Matrix> out;
    for (Matrix v : vs) {
        for (const Matrix& u : out) v -= (u.adjoint() * v).trace() * u;
        const double nrm = frob(v);
        if (nrm > 1e-12) out.push_back(v / nrm);
    }
    return out;
}

}  // namespace detail

/// Orthonormal basis of the numerical kernel of ad_x.
inline CentralizerBasis centralizer(const LieContext& ctx, const Matrix& x,
                                    std::optional<double> tol_opt = {}) {
    const double tol = tol_opt.value_or(ctx.tol().rank_tol);
    const Matrix a = ad_matrix(ctx, x);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto dec = detail::numerical_rank(svd.singularValues(), tol, ctx.tol().gap_tol);
    if (dec.ambiguous)
        throw NumericalFailure("centralizer: ambiguous kernel dimension (gap ratio " +
                               std::to_string(dec.gap_ratio) + ")");
    const int kdim = ctx.dim() - dec.rank;
    if (kdim < ctx.rank())
        throw NumericalFailure("centralizer: dimension below rank, tolerance unreliable");
    std::vector<Matrix> vs;
    vs.reserve(kdim);
    for (int k = 0; k < kdim; ++k)
        vs.push_back(ctx.from_coordinates(svd.matrixV().col(ctx.dim() - kdim + k)));
    CentralizerBasis cb{x, detail::frobenius_orthonormalize(vs), tol};
    if (static_cast<int>(cb.vectors.size()) != kdim)
        throw NumericalFailure("centralizer: orthonormalization lost a kernel vector");
    return cb;
}

enum class TriState { yes, no, uncertain };

inline const char* to_string(TriState t) {
    switch (t) {
        case TriState::yes: return "yes";
        case TriState::no: return "no";
        default: return "uncertain";
    }
}

struct Classification {
    bool is_regular = false;
    TriState is_semisimple = TriState::uncertain;
    int centralizer_dim = 0;
};

namespace detail {

struct EigenCluster {
    Cplx center;
    int multiplicity;
};

/// Single-linkage clustering of eigenvalues at radius tol. Returns clusters
/// and the smallest distance between distinct clusters.
inline std::pair<std::vector<EigenCluster>, double> cluster_eigenvalues(const Vector& ev,
                                                                        double tol) {
    const int n = static_cast<int>(ev.size());
    std::vector<int> label(n, -1);
    int nclusters = 0;
    for (int i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = nclusters++;
        // grow the cluster transitively
        bool grew = true;
        while (grew) {
            grew = false;
            for (int j = 0; j < n; ++j) {
                if (label[j] >= 0) continue;
                for (int k = 0; k < n; ++k)
                    if (label[k] == label[i] && std::abs(ev(j) - ev(k)) <= tol) {
                        label[j] = label[i];
                        grew = true;
                        break;
                    }
            }
        }
    }
    std::vector<EigenCluster> clusters(nclusters, {0.0, 0});
    for (int i = 0; i < n; ++i) {
        clusters[label[i]].center += ev(i);
        clusters[label[i]].multiplicity += 1;
    }
    for (auto& c : clusters) c.center /= static_cast<double>(c.multiplicity);
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (label[i] != label[j]) min_sep = std::min(min_sep, std::abs(ev(i) - ev(j)));
    return {clusters, min_sep};
}

}  // namespace detail

/// Regularity (centralizer dimension) and semisimplicity (eigenvalue
/// clustering + rank test). Refuses to guess when clusters nearly touch.
inline Classification classify(const LieContext& ctx, const Matrix& x,
                               std::optional<double> tol_opt = {}) {
    const double tol = tol_opt.value_or(ctx.tol().rank_tol);
    Classification out;
    {
        const Matrix a = ad_matrix(ctx, x);
        Eigen::JacobiSVD<Matrix> svd(a);
        const auto dec = detail::numerical_rank(svd.singularValues(), tol, ctx.tol().gap_tol);
        out.centralizer_dim = ctx.dim() - dec.rank;
        out.is_regular = (out.centralizer_dim == ctx.rank());
    }
    Eigen::ComplexEigenSolver<Matrix> es(x, /*computeEigenvectors=*/false);
    const double scale = 1.0 + frob(x);
    auto [clusters, min_sep] = detail::cluster_eigenvalues(es.eigenvalues(), ctx.tol().cluster_tol * scale);
    if (clusters.size() > 1 && min_sep < 10.0 * ctx.tol().cluster_tol * scale) {
        out.is_semisimple = TriState::uncertain;  // clusters too close to call
        return out;
    }
    bool ss = true;
    const int n = ctx.n();
    for (const auto& c : clusters) {
        Matrix shifted = x - c.center * Matrix::Identity(n, n);
        Eigen::JacobiSVD<Matrix> svd(shifted);
        const auto dec = detail::numerical_rank(svd.singularValues(), tol, 1.0);
        if (dec.rank != n - c.multiplicity) {
            ss = false;
            break;
        }
    }
    out.is_semisimple = ss ? TriState::yes : TriState::no;
    return out;
}

enum class SampleKind { generic, regular_semisimple, group };

namespace detail {

inline Cplx draw_cplx(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re, im};
}

inline Matrix draw_traceless(const LieContext& ctx, std::mt19937_64& rng) {
    Matrix m(ctx.n(), ctx.n());
    for (int i = 0; i < ctx.n(); ++i)
        for (int j = 0; j < ctx.n(); ++j) m(i, j) = draw_cplx(rng);
    return traceless(m);
}

}  // namespace detail

/// Deterministic seeded sampling of algebra / group elements.
inline Matrix sample(const LieContext& ctx, std::uint64_t seed, SampleKind kind) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    switch (kind) {
        case SampleKind::generic:
            return detail::draw_traceless(ctx, rng);
        case SampleKind::group: {
            Matrix y = detail::draw_traceless(ctx, rng);
            const double nrm = frob(y);
            if (nrm > 1.5) y *= 1.5 / nrm;  // bounded so exp stays well conditioned
            return group_exp(y);
        }
        case SampleKind::regular_semisimple: {
            const int n = ctx.n();
            const double spacing = 2.0 * ctx.tol().gap_floor;
            std::uniform_real_distribution<double> jitter(-0.2 * spacing, 0.2 * spacing);
            Vector ev(n);
            for (int i = 0; i < n; ++i)
                ev(i) = Cplx(spacing * i + jitter(rng), jitter(rng));
            ev.array() -= ev.mean();
            Matrix d = ev.asDiagonal();
            Matrix g = sample(ctx, seed + 0x51ed2701ull, SampleKind::group);
            return adjoint_action(g, d);
        }
    }
    throw std::logic_error("sample: unknown kind");
}

}  // namespace gslice
