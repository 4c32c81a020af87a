#include "gslice/systems.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gslice;

namespace {

struct Setup {
    LieContext ctx;
    SlodowySlice slice;
    explicit Setup(int n) : ctx(n), slice(ctx, principal_triple(ctx)) {}
};

Matrix unit_rss(const LieContext& ctx, std::uint64_t seed) {
    Matrix b = sample(ctx, seed, SampleKind::regular_semisimple);
    return b / frob(b);
}

}  // namespace

TEST_CASE("coordinate functions are dual to the basis") {
    LieContext ctx(3);
    for (int j = 0; j < ctx.dim(); ++j) {
        const auto f = coordinate_function(ctx, j);
        for (int k = 0; k < ctx.dim(); ++k) {
            const Cplx want = j == k ? 1.0 : 0.0;
            CHECK(std::abs(pair(ctx, f.gradient(ctx.basis()[k]), ctx.basis()[k]) -
                           f.value(ctx.basis()[k])) < 1e-10);
            CHECK(std::abs(f.value(ctx.basis()[k]) - want) < 1e-12);
        }
    }
}

TEST_CASE("system function counts are exact") {
    for (int n = 2; n <= 5; ++n) {
        Setup s(n);
        const int dim = n * n - 1, rank = n - 1;
        const auto ip = build_invariant_pullback(s.ctx, s.slice, unit_rss(s.ctx, 5));
        CHECK(static_cast<int>(ip.observables.size()) == dim);
        CHECK(ip.declared_rank == rank);
        CHECK(static_cast<int>(ip.selected_coords.size()) == dim - rank);

        const auto mf = build_mf(s.ctx, s.slice, unit_rss(s.ctx, 6));
        CHECK(static_cast<int>(mf.observables.size()) == (n * n + n - 2) / 2);
        CHECK(mf.declared_rank == (dim + rank) / 2);

        const auto mf_full = build_mf(s.ctx, s.slice, unit_rss(s.ctx, 6), true);
        CHECK(static_cast<int>(mf_full.observables.size()) == (dim + rank) / 2 + rank);
    }
}

TEST_CASE("mf at n=2 is the explicit two-function family") {
    Setup s(2);
    const Matrix beta = unit_rss(s.ctx, 6);
    const auto mf = build_mf(s.ctx, s.slice, beta);
    REQUIRE(mf.observables.size() == 2);
    for (int k = 0; k < 10; ++k) {
        const PhasePoint p = sample_phase_point(s.ctx, s.slice, 50 + k);
        const Matrix img = phi(p);
        const Cplx f0 = (img * img).trace();
        const Cplx f1 = 2.0 * (img * beta).trace();
        CHECK(std::abs(mf.observables[0].value(p) - f0) < 1e-12 * (1.0 + std::abs(f0)));
        CHECK(std::abs(mf.observables[1].value(p) - f1) < 1e-12 * (1.0 + std::abs(f1)));
    }
}

TEST_CASE("builders reject degenerate inputs") {
    Setup s(3);
    CHECK_THROWS_AS(build_invariant_pullback(s.ctx, s.slice, Matrix::Zero(3, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_mf(s.ctx, s.slice, Matrix::Zero(3, 3)), std::invalid_argument);
    Matrix nil = Matrix::Zero(3, 3);
    nil(0, 1) = 1.0;
    nil(1, 2) = 1.0;  // regular but nilpotent: fine for pullback, not for MF
    CHECK_THROWS_AS(build_mf(s.ctx, s.slice, nil), std::invalid_argument);
}

TEST_CASE("mf zeroth layer equals the plain invariant pullbacks") {
    Setup s(3);
    const Matrix beta = unit_rss(s.ctx, 6);
    const auto mf = build_mf(s.ctx, s.slice, beta);
    const auto fs = invariants(s.ctx);
    const PhasePoint p = sample_phase_point(s.ctx, s.slice, 77);
    // observables are ordered (i, j) lexicographic with j inner; j=0 rows are
    // at offsets 0 and deg(f_1) = 2
    const Matrix img = phi(p);
    CHECK(std::abs(mf.observables[0].value(p) - fs[0].value(img)) < 1e-10);
    CHECK(std::abs(mf.observables[2].value(p) - fs[1].value(img)) < 1e-10);
}

TEST_CASE("commutativity sweeps stay at solver precision") {
    for (int n : {2, 3}) {
        Setup s(n);
        std::vector<PhasePoint> points;
        for (int k = 0; k < 25; ++k)
            points.push_back(sample_phase_point(s.ctx, s.slice, 100 + k, 0.5));
        const auto ip = build_invariant_pullback(s.ctx, s.slice, unit_rss(s.ctx, 5));
        const auto mf = build_mf(s.ctx, s.slice, unit_rss(s.ctx, 6));
        const auto cip = verify_commutativity(s.ctx, s.slice, ip, points);
        const auto cmf = verify_commutativity(s.ctx, s.slice, mf, points);
        CHECK(cip.max_upstairs < 1e-8);
        CHECK(cip.max_downstairs < 1e-8);
        CHECK(cmf.max_upstairs < 1e-8);
        CHECK(cmf.max_downstairs < 1e-8);
    }
}

TEST_CASE("independence holds at random points") {
    Setup s(3);
    std::vector<PhasePoint> points;
    for (int k = 0; k < 50; ++k) points.push_back(sample_phase_point(s.ctx, s.slice, 200 + k));
    const auto ip = build_invariant_pullback(s.ctx, s.slice, unit_rss(s.ctx, 5));
    const auto mf = build_mf(s.ctx, s.slice, unit_rss(s.ctx, 6));
    CHECK(verify_independence(s.ctx, s.slice, ip, points).full_rank_fraction() >= 0.99);
    CHECK(verify_independence(s.ctx, s.slice, mf, points).full_rank_fraction() >= 0.99);
}

TEST_CASE("regularity locus probe separates regular and singular points") {
    Setup s(3);
    std::vector<Matrix> pts;
    for (int k = 0; k < 10; ++k) pts.push_back(sample(s.ctx, 300 + k, SampleKind::regular_semisimple));
    pts.push_back(Matrix::Zero(3, 3));
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0;
    d(2, 2) = -2.0;  // repeated eigenvalue: not regular
    pts.push_back(d);
    const auto rep = regularity_locus_probe(s.ctx, pts);
    CHECK(rep.inconsistent == 0);
    // the two singular probes must show a rank drop
    CHECK(rep.rows[10].gradient_rank < s.ctx.rank());
    CHECK_FALSE(rep.rows[10].is_regular);
    CHECK(rep.rows[11].gradient_rank < s.ctx.rank());
    CHECK_FALSE(rep.rows[11].is_regular);
}

TEST_CASE("invariant jacobian rank equals rank at regular points") {
    Setup s(4);
    const Matrix x = sample(s.ctx, 9, SampleKind::regular_semisimple);
    const Matrix jac = detail::invariant_jacobian(s.ctx, x);
    Eigen::JacobiSVD<Matrix> svd(jac);
    CHECK(detail::numerical_rank(svd.singularValues(), 1e-8, 1.0).rank == s.ctx.rank());
}
