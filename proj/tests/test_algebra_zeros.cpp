#include "common.hpp"

using namespace sr;

namespace {

// hides the exact backing so the pointwise formulas are exercised
SliceFunction opaque(const SliceFunction& f) {
    return from_evaluator([f](const Quat& q) { return f.eval_unchecked(q); }, f.domain, f.name + "~");
}

SliceFunction poly(std::vector<Quat> c) { return from_poly(QPolyD(std::move(c))); }

std::vector<Quat> probes(int n, uint64_t seed, double s = 1.5) {
    std::mt19937_64 rng(seed);
    std::vector<Quat> v;
    for (int k = 0; k < n; ++k) v.push_back(random_quat(rng, s));
    return v;
}

} // namespace

TEST(Algebra, PolynomialStar) {
    auto h = star_product(from_poly(QPolyD::linear(I_)), from_poly(QPolyD::linear(J_)));
    ASSERT_TRUE(h.poly);
    EXPECT_EQ(*h.poly, P({K_, -(I_ + J_), Quat(1)}));
}

TEST(Algebra, PointwiseStarMatchesExact) {
    auto f = poly({Quat(1, 0, 2, 0), Quat(0, 1, 0, -1), Quat(0.5, 0, 0, 1)});
    auto g = poly({Quat(0, 1, 1, 0), Quat(2, 0, 0, 0.5)});
    auto exact = star_product(f, g);
    auto pw = star_product(opaque(f), opaque(g));
    for (auto& q : probes(300, 1)) {
        EXPECT_QNEAR(pw(q), exact(q), 1e-9);
        EXPECT_QNEAR(star_at(f, g, q), exact(q), 1e-9);
    }
}

TEST(Algebra, SlicePreservingFactors) {
    auto sp = poly({Quat(1), Quat(-1), Quat(2)});
    auto g = poly({Quat(0, 1, 2, 3), Quat(1, 0, 0, 1)});
    auto c = constant(Quat(0.5, -1, 0, 2));
    for (auto& q : probes(50, 2)) {
        EXPECT_QNEAR(star_product(opaque(sp), opaque(g))(q), sp(q) * g(q), 1e-10);
        EXPECT_QNEAR(star_product(opaque(g), opaque(c))(q), g(q) * Quat(0.5, -1, 0, 2), 1e-10);
    }
    Quat p(0.5, 1, 0, -1);
    EXPECT_QNEAR(star_at(from_poly(QPolyD::linear(p)), g, p), Quat(), 0);
}

TEST(Algebra, Conjugate) {
    Quat p(0.5, 1, -2, 0.25);
    auto f = regular_conjugate(from_poly(QPolyD::linear(p)));
    EXPECT_EQ(*f.poly, QPolyD::linear(p.conj()));
    auto r = poly({Quat(1), Quat(3), Quat(-2)});
    EXPECT_EQ(*regular_conjugate(r).poly, *r.poly);
    auto g = poly({Quat(0, 1, 2, 3), Quat(1, 0, 0, 1), Quat(0, 0, 1, 0)});
    auto gcc = regular_conjugate(regular_conjugate(opaque(g)));
    for (auto& q : probes(50, 3)) EXPECT_QNEAR(gcc(q), g(q), 1e-10);
}

TEST(Algebra, Symmetrize) {
    Quat p(0.5, 1, -2, 0.25);
    auto s = symmetrize(from_poly(QPolyD::linear(p)));
    EXPECT_EQ(*s.poly, P({Quat(p.norm2()), Quat(-2 * p.w), Quat(1)}));
    auto sp = poly({Quat(1), Quat(2)});
    EXPECT_EQ(*symmetrize(sp).poly, *star_product(sp, sp).poly);
    auto g = poly({Quat(0, 1, 2, 3), Quat(1, 0, 0, 1), Quat(0, 0, 1, 0)});
    auto gs = symmetrize(opaque(g));
    auto gc = regular_conjugate(g);
    for (auto& q : probes(50, 4)) {
        EXPECT_QNEAR(gs(q), star_product(g, gc)(q), 1e-9);
        EXPECT_QNEAR(gs(q), star_product(gc, g)(q), 1e-9);
        auto d = spherical_data(gs, q);
        EXPECT_LE(im_norm(d.value) + im_norm(d.derivative), 1e-9);
    }
}

TEST(Algebra, Phi) {
    Quat a(1, 2, -1, 0.5);
    EXPECT_QNEAR(Phi(a, Quat()), a.conj() / a.norm2(), 1e-15);
    EXPECT_QNEAR(Phi(Quat(2), Quat(1)), Quat(0.4), 1e-15);
    EXPECT_ERR(Phi(I_, Quat(1)), ErrorCode::SingularDenominator);
}

TEST(Algebra, Reciprocal) {
    Quat p(0.3, 1, 0.5, -1);
    auto r = reciprocal(from_poly(QPolyD::linear(p)));
    ASSERT_TRUE(r.rational);
    EXPECT_EQ(r.rational->num, QPolyD::linear(p.conj()));
    EXPECT_EQ(r.rational->den.c, (std::vector<double>{p.norm2(), -2 * p.w, 1}));
    auto sp = poly({Quat(2), Quat(1), Quat(1)});
    auto rs = reciprocal(opaque(sp));
    for (auto& q : probes(50, 5)) EXPECT_QNEAR(rs(q), sp(q).inv(), 1e-10);
    auto f = poly({Quat(0, 1, 2, 3), Quat(1, 0, 0, 1), Quat(0, 0, 1, 0)});
    auto one_exact = star_product(f, reciprocal(f));
    auto one_pw = star_product(opaque(f), reciprocal(opaque(f)));
    for (auto& q : probes(1000, 6)) {
        EXPECT_QNEAR(one_exact(q), Quat(1), 1e-9);
        EXPECT_QNEAR(one_pw(q), Quat(1), 1e-9);
    }
    EXPECT_ERR(reciprocal(from_poly(QPolyD())), ErrorCode::IdenticallyZero);
}

TEST(Algebra, QuotientPoint) {
    auto f = poly({Quat(0, 1, 2, 3), Quat(1, 0, 0, 1)});
    auto g = poly({Quat(1), Quat(0, 1, 1, 0), Quat(0, 0, 0, 2)});
    auto sp = poly({Quat(3), Quat(1)});
    for (auto& q : probes(100, 8)) {
        EXPECT_QNEAR(quotient_at(f, f, q), Quat(1), 1e-10);
        EXPECT_QNEAR(quotient_at(sp, g, q), sp(q).inv() * g(q), 1e-10);
        EXPECT_QNEAR(quotient_at(f, g, q), quotient(f, g)(q), 1e-9);
    }
}

TEST(Algebra, CounterexampleDifferenceIsZeroDivisor) {
    auto fx = douren_fixtures();
    auto Ds = symmetrize(fx.D);
    auto cap_units = fx.Cplus.members(true, 40);
    double worst = 0, dmin = 1e9;
    for (auto& J : cap_units) {
        Quat q = fx.Cplus.point(J);
        worst = std::max(worst, norm(Ds(q)));
        dmin = std::min(dmin, norm(fx.D(q)));
    }
    EXPECT_LE(worst, 1e-9);
    EXPECT_GE(dmin, 1.0);
}

// ---------------------------------------------------------------------------

TEST(Zeros, TwoLinearFactors) {
    auto f = star(QPolyD::linear(I_), QPolyD::linear(J_));
    auto r = poly_zeros(f);
    ASSERT_EQ(r.isolated.size(), 1u);
    EXPECT_TRUE(r.spherical.empty());
    EXPECT_QNEAR(r.isolated[0].point, I_, 1e-12);
    // j is not a zero: f(j) = 2k
    EXPECT_QNEAR(f.eval(J_), 2.0 * K_, 1e-15);
    // dense sphere sampling finds nothing below the value at i's neighbourhood except near i
    std::mt19937_64 rng(9);
    for (int k = 0; k < 2000; ++k) {
        Quat J = random_unit(rng);
        if (dist(J, I_) > 0.05) {
            EXPECT_GT(norm(f.eval(J)), 0.01);
        }
    }
}

TEST(Zeros, SphericalAndReal) {
    auto r = poly_zeros(P({Quat(1), Quat(), Quat(1)}));
    ASSERT_EQ(r.spherical.size(), 1u);
    EXPECT_EQ(r.spherical[0].multiplicity, 2);
    EXPECT_NEAR(r.spherical[0].x, 0, 1e-12);
    EXPECT_NEAR(r.spherical[0].y, 1, 1e-12);
    auto s = poly_zeros(P({Quat(1), Quat(-2), Quat(1)}));
    ASSERT_EQ(s.isolated.size(), 1u);
    EXPECT_QNEAR(s.isolated[0].point, Quat(1), 1e-9);
    EXPECT_EQ(s.isolated[0].classical, 2);
    EXPECT_ERR(poly_zeros(QPolyD()), ErrorCode::IdenticallyZero);
}

TEST(Zeros, RealZerosOfSymmetrization) {
    auto f = star(star(QPolyD::linear(Quat(2)), QPolyD::linear(Quat(-1))), QPolyD::linear(Quat(0.5, 0, 1, 0)));
    auto r = poly_zeros(f);
    std::vector<double> reals;
    for (auto& z : r.isolated)
        if (z.cap.real_axis) reals.push_back(z.point.w);
    std::sort(reals.begin(), reals.end());
    ASSERT_EQ(reals.size(), 2u);
    EXPECT_NEAR(reals[0], -1, 1e-12);
    EXPECT_NEAR(reals[1], 2, 1e-12);
}

TEST(Zeros, FactorOut) {
    auto g0 = QPolyD(std::vector<Quat>{Quat(0, 1, 2, 0), Quat(1, 0, 0, 1)});
    auto f = from_poly(star(QPolyD::linear(Quat(1)), g0));
    EXPECT_EQ(*factor_out_point(f, Quat(1), std::nullopt).poly, g0);
    auto h = from_poly(star(QPolyD::linear(I_), QPolyD::linear(J_)));
    auto whole = cap_component(*whole_space(), I_);
    EXPECT_EQ(*factor_out_point(h, I_, whole).poly, QPolyD::linear(J_));
    EXPECT_ERR(factor_out_point(h, J_, whole), ErrorCode::NotDivisible);
    auto s = from_poly(P({Quat(1), Quat(), Quat(1)}));
    EXPECT_EQ(*factor_out_sphere(s, 0, 1, whole).poly, P({Quat(1)}));
    auto s2 = from_poly(P({Quat(-1), Quat(1), Quat(-1), Quat(1)}));
    EXPECT_EQ(*factor_out_sphere(s2, 0, 1, whole).poly, QPolyD::linear(Quat(1)));
    EXPECT_ERR(factor_out_sphere(h, 0, 1, whole), ErrorCode::NotVanishingOnCap);
}

TEST(Zeros, Multiplicities) {
    auto c = QPolyD::linear(Quat(1));
    auto m = multiplicities(from_poly(star(star(c, c), c)), Quat(1), std::nullopt);
    EXPECT_EQ(m.classical, 3);
    EXPECT_EQ(m.isolated, 3);
    EXPECT_EQ(m.spherical, 0);
    auto S = P({Quat(1), Quat(), Quat(1)});
    auto f = star(star(S, S), QPolyD::linear(I_));
    auto cap = cap_component(*whole_space(), I_);
    auto n = multiplicities(from_poly(f), I_, cap);
    EXPECT_EQ(n.spherical, 4);
    EXPECT_EQ(n.isolated, 1);
    // exact normal form recovers the chain
    auto nf = normal_form_exact(to_exact(f), mpq_class(0), mpq_class(1));
    EXPECT_EQ(nf.m, 2);
    ASSERT_EQ(nf.chain.size(), 1u);
    EXPECT_EQ(to_double(nf.chain[0]), I_);
}

TEST(Zeros, ConjugateZeroCriterion) {
    Quat p(0.2, 0, 1, 0);
    auto f = from_poly(star(QPolyD::linear(Quat(1, 1, 0, 0)), QPolyD::linear(p)));
    EXPECT_TRUE(conjugate_vanishes_at(f, p.conj()));
    EXPECT_QNEAR(regular_conjugate(f)(p.conj()), Quat(), 1e-12);
    EXPECT_FALSE(conjugate_vanishes_at(f, Quat(0.2, 0, 0, 1)));
}

TEST(Zeros, ZeroSubsetOfProduct) {
    auto f = from_poly(star(QPolyD::linear(Quat(0.5, 0, 1, 0)), QPolyD::linear(Quat(-1))));
    auto g = from_poly(QPolyD(std::vector<Quat>{Quat(0, 1, 0, 1), Quat(1)}));
    auto fg = star_product(f, g);
    for (auto& z : poly_zeros(*f.poly).isolated) EXPECT_LE(norm(fg(z.point)), 1e-12);
}

TEST(Zeros, ScanMatchesPolynomialReport) {
    auto f = from_poly(star(QPolyD::linear(Quat(0.5, 0, 1, 0)), QPolyD::linear(Quat(-1, 0, 0, 2))));
    auto r = zero_scan(f, 32);
    auto e = poly_zeros(*f.poly);
    ASSERT_EQ(r.isolated.size(), e.isolated.size());
    for (auto& z : e.isolated) {
        bool hit = false;
        for (auto& w : r.isolated) hit = hit || dist(w.point, z.point) < 1e-8;
        EXPECT_TRUE(hit) << z.point;
    }
}
