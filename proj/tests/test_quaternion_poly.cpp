#include "common.hpp"

using namespace sr;

TEST(Quaternion, Products) {
    EXPECT_EQ(I_ * J_, K_);
    Quat q(1.5, -2, 0.25, 3);
    EXPECT_EQ(Quat(1) * q, q);
    // component formula, written out by hand
    Quat a(1, 2, 3, 4), b(5, 6, 7, 8);
    Quat want(a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
              a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w);
    EXPECT_EQ(a * b, want);
    EXPECT_EQ(a * b, Quat(-60, 12, 30, 24));
}

TEST(Quaternion, Inverse) {
    EXPECT_EQ(Quat(2).inv(), Quat(0.5));
    EXPECT_QNEAR(I_.inv(), -I_, 0);
    Quat a(1, 1, 1, 1);
    EXPECT_QNEAR(a.inv(), a.conj() / a.norm2(), 1e-16);
    EXPECT_QNEAR(a.inv(), Quat(0.25, -0.25, -0.25, -0.25), 1e-16);
    EXPECT_ERR(Quat().inv(), ErrorCode::ZeroDivision);
}

TEST(Quaternion, SliceDecompose) {
    auto s = slice_decompose(Quat(3, 4, 0, 0));
    EXPECT_EQ(s.x, 3);
    EXPECT_EQ(s.y, 4);
    EXPECT_EQ(s.unit.q(), I_);
    s = slice_decompose(Quat(5));
    EXPECT_TRUE(s.real);
    EXPECT_EQ(s.y, 0);
    s = slice_decompose(Quat(1, 0, -2, 0));
    EXPECT_EQ(s.y, 2);
    EXPECT_EQ(s.unit.q(), -J_);
    EXPECT_ERR(ImaginaryUnit(Quat(0, 2, 0, 0)), ErrorCode::NotUnit);
}

TEST(Quaternion, SameSphere) {
    EXPECT_TRUE(same_sphere(I_, -I_, 0));
    EXPECT_FALSE(same_sphere(I_, Quat(1, 1, 0, 0), 0));
    EXPECT_TRUE(same_sphere(Quat(-1, 2, 0, 0), Quat(-1, 0, 2, 0), 1e-12));
}

TEST(Quaternion, RandomProperties) {
    std::mt19937_64 rng(7);
    double worst_norm = 0, worst_assoc = 0, worst_conj = 0, worst_round = 0;
    for (int k = 0; k < 10000; ++k) {
        Quat a = random_quat(rng, 3), b = random_quat(rng, 3), c = random_quat(rng, 3);
        double s = norm(a) * norm(b);
        worst_norm = std::max(worst_norm, std::abs(norm(a * b) - s) / s);
        worst_assoc = std::max(worst_assoc, dist((a * b) * c, a * (b * c)) / (s * norm(c)));
        worst_conj = std::max(worst_conj, dist((a * b).conj(), b.conj() * a.conj()) / s);
        auto d = slice_decompose(a);
        worst_round = std::max(worst_round, dist(d.point(), a) / norm(a));
    }
    EXPECT_LE(worst_norm, 1e-12);
    EXPECT_LE(worst_assoc, 1e-12);
    EXPECT_LE(worst_conj, 1e-13);
    EXPECT_LE(worst_round, 1e-15);
}

TEST(Poly, EvaluationUsesRightCoefficients) {
    std::mt19937_64 rng(3);
    std::vector<Quat> a;
    for (int k = 0; k < 6; ++k) a.push_back(random_quat(rng));
    QPolyD f(a);
    for (int k = 0; k < 50; ++k) {
        Quat q = random_quat(rng, 2);
        EXPECT_QNEAR(f.eval(q), horner(a, q), 1e-12);
    }
}

TEST(Poly, StarConjSym) {
    auto f = star(QPolyD::linear(I_), QPolyD::linear(J_));
    EXPECT_EQ(f, P({K_, -(I_ + J_), Quat(1)}));
    Quat p(1, 2, -1, 0.5);
    EXPECT_EQ(QPolyD::linear(p).conj(), QPolyD::linear(p.conj()));
    auto s = QPolyD::linear(p).sym();
    ASSERT_EQ(s.degree(), 2);
    EXPECT_DOUBLE_EQ(s.c[0], p.norm2());
    EXPECT_DOUBLE_EQ(s.c[1], -2 * p.w);
    EXPECT_DOUBLE_EQ(s.c[2], 1);
}

TEST(Poly, ExactRingAxioms) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-5, 5);
    auto fr = [](int n, int den) {
        mpq_class r(n, den);
        r.canonicalize();
        return r;
    };
    auto rq = [&] { return QuatQ(fr(d(rng), 3), mpq_class(d(rng)), fr(d(rng), 2), mpq_class(d(rng))); };
    auto rp = [&](int n) {
        std::vector<QuatQ> c;
        for (int k = 0; k <= n; ++k) c.push_back(rq());
        return QPolyQ(c);
    };
    for (int t = 0; t < 20; ++t) {
        auto a = rp(3), b = rp(2), c = rp(2);
        EXPECT_EQ(star(star(a, b), c), star(a, star(b, c)));
        EXPECT_EQ(star(a, b + c), star(a, b) + star(a, c));
        EXPECT_EQ(star(a, b).conj(), star(b.conj(), a.conj()));
        if (!a.is_zero() && !b.is_zero()) {
            EXPECT_EQ(star(a, b).degree(), a.degree() + b.degree());
        }
        for (auto& x : QPolyQ::from_real(a.sym()).c) {
            EXPECT_EQ(x.x, 0);
            EXPECT_EQ(x.y, 0);
            EXPECT_EQ(x.z, 0);
        }
    }
}

TEST(Poly, RightDivision) {
    auto f = star(QPolyD::linear(I_), QPolyD::linear(J_));
    auto [q, r] = f.left_divide_linear(I_);
    EXPECT_EQ(q, QPolyD::linear(J_));
    EXPECT_QNEAR(r, Quat(), 0);
}

TEST(Poly, SquarefreeAndRoots) {
    // (x-1)^2 (x^2+1)
    RealPoly<double> p(std::vector<double>{1, -2, 2, -2, 1});
    auto parts = squarefree_decomposition(to_exact(p));
    ASSERT_GE(parts.size(), 2u);
    EXPECT_EQ(parts[1].degree(), 1);
    auto roots = real_roots(p);
    EXPECT_EQ(roots.size(), 4u);
    for (auto z : roots) EXPECT_LE(std::abs(p.eval(z)), 1e-12);
}
