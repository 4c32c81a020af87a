#include "gslice/slodowy.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gslice;

TEST_CASE("principal triple satisfies the sl2 relations") {
    for (int n = 2; n <= 5; ++n) {
        LieContext ctx(n);
        const auto t = principal_triple(ctx);
        CHECK(triple_residual(t) < 1e-12);
        // h has the classical weights n-1, n-3, ..., 1-n
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(t.h(i, i) - Cplx(n - 1 - 2 * i)) < 1e-14);
    }
}

TEST_CASE("slice points and coordinates round trip") {
    LieContext ctx(4);
    SlodowySlice slice(ctx, principal_triple(ctx));
    CHECK(slice.rank() == ctx.rank());
    Vector c(slice.rank());
    for (int k = 0; k < slice.rank(); ++k) c(k) = Cplx(0.3 * (k + 1), -0.1 * k);
    const Matrix x = slice.point(c);
    CHECK((slice.coords_of(ctx, x) - c).norm() < 1e-10);
    // off-slice points are rejected
    Matrix off = x;
    off(0, 1) += 0.5;
    CHECK_THROWS_AS(slice.coords_of(ctx, off), std::invalid_argument);
}

TEST_CASE("slice points are regular for every n") {
    for (int n = 2; n <= 5; ++n) {
        LieContext ctx(n);
        SlodowySlice slice(ctx, principal_triple(ctx));
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        for (int s = 0; s < 20; ++s) {
            Vector c(slice.rank());
            for (int k = 0; k < slice.rank(); ++k) c(k) = Cplx(uni(rng), uni(rng));
            CHECK(classify(ctx, slice.point(c)).is_regular);
        }
    }
}

TEST_CASE("invariant values against the eigenvalue oracle") {
    LieContext ctx(4);
    const auto fs = invariants(ctx);
    REQUIRE(static_cast<int>(fs.size()) == ctx.rank());
    const Matrix x = sample(ctx, 5, SampleKind::generic);
    Eigen::ComplexEigenSolver<Matrix> es(x, false);
    for (int i = 0; i < ctx.rank(); ++i) {
        CHECK(fs[i].degree == i + 2);
        Cplx want = 0.0;
        for (int k = 0; k < 4; ++k) want += std::pow(es.eigenvalues()(k), i + 2);
        CHECK(std::abs(fs[i].value(x) - want) < 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("invariant gradients against finite differences") {
    for (FormKind fk : {FormKind::trace, FormKind::killing}) {
        LieContext ctx(3, fk);
        const auto fs = invariants(ctx);
        const Matrix x = sample(ctx, 6, SampleKind::generic);
        const Matrix dir = sample(ctx, 7, SampleKind::generic);
        const double t = 1e-6;
        for (const auto& f : fs) {
            const Cplx fd = (f.value(x + t * dir) - f.value(x - t * dir)) / (2.0 * t);
            const Cplx an = pair(ctx, f.gradient(x), dir);
            CHECK(std::abs(fd - an) < 1e-6 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("directional derivatives of tr(x^2)") {
    LieContext ctx(2);
    const auto fs = invariants(ctx);
    const Matrix x = sample(ctx, 8, SampleKind::generic);
    const Matrix beta = sample(ctx, 9, SampleKind::generic);
    // d_beta tr(x^2) = 2 tr(x beta); second derivative = 2 tr(beta^2)
    const auto d1 = directional_derivative(ctx, fs[0], beta, 1, x);
    CHECK(std::abs(d1.value - 2.0 * (x * beta).trace()) < 1e-12);
    const auto d2 = directional_derivative(ctx, fs[0], beta, 2, x);
    CHECK(std::abs(d2.value - 2.0 * (beta * beta).trace()) < 1e-12);
    // j = 0 recovers the plain value
    const auto d0 = directional_derivative(ctx, fs[0], beta, 0, x);
    CHECK(std::abs(d0.value - fs[0].value(x)) < 1e-12);
    CHECK_THROWS_AS(directional_derivative(ctx, fs[0], beta, 3, x), std::invalid_argument);
}

TEST_CASE("shift function gradients against finite differences") {
    LieContext ctx(3);
    const auto fs = invariants(ctx);
    const Matrix beta = sample(ctx, 10, SampleKind::regular_semisimple);
    const Matrix x = sample(ctx, 11, SampleKind::generic);
    const Matrix dir = sample(ctx, 12, SampleKind::generic);
    for (const auto& f : fs)
        for (int j = 0; j < f.degree; ++j) {
            const auto s = shift_function(ctx, f, beta, j);
            const double t = 1e-6;
            const Cplx fd = (s.value(x + t * dir) - s.value(x - t * dir)) / (2.0 * t);
            const Cplx an = pair(ctx, s.gradient(x), dir);
            CHECK(std::abs(fd - an) < 1e-5 * (1.0 + std::abs(an)));
        }
}

TEST_CASE("kostant section at n=2 is explicit") {
    LieContext ctx(2);
    SlodowySlice slice(ctx, principal_triple(ctx));
    // tr((xi + c eta)^2) = 2c, so target value v gives c = v/2
    Vector target(1);
    target(0) = Cplx(2.0, 0.0);
    const auto kr = kostant_section(ctx, slice, target);
    REQUIRE(kr.converged);
    CHECK(std::abs(kr.coords(0) - Cplx(1.0, 0.0)) < 1e-10);
    CHECK(kr.jacobian_min_sv > 1e-8);
}

TEST_CASE("kostant section inverts the invariant map") {
    for (int n : {2, 3, 4}) {
        LieContext ctx(n);
        SlodowySlice slice(ctx, principal_triple(ctx));
        const auto fs = invariants(ctx);
        for (int s = 0; s < 10; ++s) {
            const Matrix x = sample(ctx, 500 + s, SampleKind::regular_semisimple);
            Vector target(ctx.rank());
            for (int i = 0; i < ctx.rank(); ++i) target(i) = fs[i].value(x);
            const auto kr = kostant_section(ctx, slice, target, 17 + s);
            REQUIRE(kr.converged);
            const Matrix p = slice.point(kr.coords);
            for (int i = 0; i < ctx.rank(); ++i)
                CHECK(std::abs(fs[i].value(p) - target(i)) < 1e-8 * (1.0 + std::abs(target(i))));
        }
    }
}

TEST_CASE("slice representative of the diagonal sl2 element") {
    LieContext ctx(2);
    SlodowySlice slice(ctx, principal_triple(ctx));
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    // the slice point on the orbit of -h is xi + eta = [[0,1],[1,0]]
    const auto rep = slice_representative(ctx, slice, h);
    Matrix want = Matrix::Zero(2, 2);
    want(0, 1) = 1.0;
    want(1, 0) = 1.0;
    CHECK(frob(rep.tilde_x - want) < 1e-9);
}

TEST_CASE("conjugator realizes the eigenvalue matching") {
    LieContext ctx(3);
    SlodowySlice slice(ctx, principal_triple(ctx));
    for (int s = 0; s < 10; ++s) {
        const Matrix x = sample(ctx, 700 + s, SampleKind::regular_semisimple);
        const auto rep = slice_representative(ctx, slice, x);
        const Matrix g = conjugator(ctx, rep.tilde_x, -x);
        CHECK(std::abs(g.determinant() - 1.0) < 1e-10);
        CHECK(frob(adjoint_action(g.inverse(), rep.tilde_x) + x) < 1e-7 * (1.0 + frob(x)));
    }
    // mismatched spectra are rejected
    const Matrix a = sample(ctx, 720, SampleKind::regular_semisimple);
    const Matrix b = sample(ctx, 721, SampleKind::regular_semisimple);
    CHECK_THROWS_AS(conjugator(ctx, a, b), std::invalid_argument);
}
