#include "common.hpp"

using namespace sr;

TEST(Domains, BallHasOneCap) {
    auto B = ball(Quat(), 1);
    auto cap = cap_component(*B, I_ / 2);
    EXPECT_TRUE(cap.whole_sphere());
    EXPECT_TRUE(cap.contains_unit(*B, Quat(0, 0, 0.6, 0.8)));
}

TEST(Domains, CapErrors) {
    auto B = ball(Quat(), 1);
    EXPECT_ERR(cap_component(*B, Quat(0.3)), ErrorCode::OnRealAxis);
    EXPECT_ERR(cap_component(*B, 2 * I_), ErrorCode::NotInDomain);
}

TEST(Domains, GammaTube) {
    auto T = gamma_tube({Quat(), I_}, 0.5);
    EXPECT_TRUE(T->inside(Quat(0.2)));
    EXPECT_TRUE(T->inside(0.9 * I_));
    EXPECT_TRUE(T->inside(Quat(0.3, 0.9, 0, 0)));
    EXPECT_FALSE(T->inside(Quat(0.3, 0, 0.9, 0)));
    EXPECT_FALSE(T->inside(Quat(0.6)));
    EXPECT_FALSE(T->inside(2 * I_));
    auto B = gamma_tube({Quat(2)}, 0.75);
    EXPECT_TRUE(B->inside(Quat(2, 0.7, 0, 0)));
    EXPECT_FALSE(B->inside(Quat(2, 0.8, 0, 0)));
    auto off = gamma_tube({2 * I_}, 1);
    EXPECT_TRUE(off->inside(Quat(0, 2.5, 0, 0)));
    EXPECT_FALSE(off->inside(Quat(0)));
    EXPECT_FALSE(off->slice_domain);
    EXPECT_ERR(gamma_tube({}, 1), ErrorCode::BadInput);
}

TEST(Domains, SigmaTauOmega) {
    auto a = sigma_tau_omega(Quat(1, 2, 0, 0), Quat(-1, 0.5, 0, 0));
    EXPECT_DOUBLE_EQ(a.sigma, a.tau);
    EXPECT_DOUBLE_EQ(a.sigma, std::hypot(2.0, 1.5));
    auto b = sigma_tau_omega(I_, J_);
    EXPECT_DOUBLE_EQ(b.tau, 0);
    EXPECT_DOUBLE_EQ(b.sigma, 2);
    EXPECT_DOUBLE_EQ(b.omega, 2);
    auto c = sigma_tau_omega(Quat(1, 0, 2, 0), 2 * I_);
    EXPECT_DOUBLE_EQ(c.omega, std::sqrt(17.0));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1000; ++k) {
        auto s = sigma_tau_omega(random_quat(rng), random_quat(rng));
        EXPECT_GE(s.sigma + 1e-15, s.tau);
    }
}

TEST(Domains, Cassini) {
    EXPECT_FALSE(cassini_contains({0, 1, 0, 1}, Quat(0)));
    EXPECT_TRUE(cassini_contains({0, 1, 0, 2}, I_ / 2));
    EXPECT_FALSE(cassini_contains({0, 1, 0.5, 1}, I_));
}

TEST(SliceFn, Eval) {
    auto sq = from_poly(P({Quat(), Quat(), Quat(1)}));
    EXPECT_QNEAR(sq(I_), Quat(-1), 0);
    Quat p(0.5, 1, -1, 2);
    EXPECT_QNEAR(from_poly(QPolyD::linear(p))(p), Quat(), 0);
}

TEST(SliceFn, SphericalDataOfLinear) {
    Quat p0(0.3, 0, 1, 0);
    auto f = from_poly(QPolyD::linear(p0));
    for (Quat q : {Quat(1, 2, 0, 0), Quat(-0.5, 0, 0, 1.5)}) {
        auto d = spherical_data_numeric(f, q);
        EXPECT_QNEAR(d.value, Quat(q.w) - p0, 1e-14);
        EXPECT_QNEAR(d.derivative, Quat(1), 1e-14);
    }
    EXPECT_ERR(spherical_derivative(f, Quat(2)), ErrorCode::OnRealAxis);
}

TEST(SliceFn, RepresentationIndependence) {
    std::mt19937_64 rng(17);
    std::vector<Quat> a;
    for (int k = 0; k < 5; ++k) a.push_back(random_quat(rng));
    auto f = from_poly(QPolyD(a));
    std::uniform_real_distribution<double> u(-1.5, 1.5), v(0.1, 1.5);
    double worst = 0;
    for (int s = 0; s < 100; ++s) {
        double x = u(rng), y = v(rng);
        auto ref = spherical_data_pair(f, x, y, I_, -I_);
        for (int t = 0; t < 5; ++t) {
            Quat J = random_unit(rng), K = random_unit(rng);
            if (dist(J, K) < 0.2) continue;
            auto d = spherical_data_pair(f, x, y, J, K);
            double scale = std::max(1.0, norm(ref.value));
            worst = std::max({worst, dist(d.value, ref.value) / scale, dist(d.derivative, ref.derivative) / scale});
        }
        // reconstruction f(q) = value + im(q) derivative
        Quat q = Quat(x) + y * random_unit(rng);
        EXPECT_QNEAR(ref.at(q), f(q), 1e-11);
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(SliceFn, SlicePreservingDetection) {
    auto f = from_poly(P({Quat(1), Quat(-2), Quat(3)}));
    auto d = spherical_data(f, Quat(0.4, 0, 1, 1));
    EXPECT_EQ(d.value.im(), Quat());
    EXPECT_EQ(d.derivative.im(), Quat());
    auto g = from_poly(P({Quat(1), J_}));
    EXPECT_NE(spherical_data(g, Quat(0.4, 1, 0, 0)).value.im(), Quat());
}

TEST(SliceFn, CullenDerivative) {
    std::vector<Quat> a = {Quat(1, 2, 0, 0), Quat(0, 1, -1, 0), Quat(2, 0, 0, 1), Quat(0.5, 0.5, 0.5, 0.5)};
    auto f = from_poly(QPolyD(a));
    Quat q(0.3, -0.2, 0.7, 0.1);
    std::vector<Quat> d = {a[1], 2.0 * a[2], 3.0 * a[3]};
    EXPECT_QNEAR(cullen_derivative(f, q), horner(d, q), 1e-13);
    EXPECT_QNEAR(cullen_derivative(constant(Quat(1, 2, 3, 4)), q), Quat(), 0);
    auto sq = from_poly(P({Quat(), Quat(), Quat(1)}));
    EXPECT_QNEAR(cullen_derivative(sq, Quat(1, 1, 0, 0)), Quat(2, 2, 0, 0), 1e-14);
    // finite-difference path agrees with the coefficient shift
    EXPECT_QNEAR(cullen_numeric(f, q), horner(d, q), 1e-9);
}

TEST(SliceFn, ExtendFromSlices) {
    auto sq = [](const Quat& q) { return q * q; };
    auto f = extend_from_slices(sq, sq, I_, J_);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 50; ++k) {
        Quat q = random_quat(rng, 2);
        EXPECT_QNEAR(f(q), q * q, 1e-12);
    }
    EXPECT_ERR(extend_from_slices(sq, sq, I_, I_), ErrorCode::SameUnit);
    auto shifted = [](const Quat& q) { return q * q + Quat(1); };
    EXPECT_ERR(extend_from_slices(sq, shifted, I_, J_), ErrorCode::MismatchedRealTrace);
    // K = -I, data on L_{-I} read off the conjugate-symmetric restriction
    auto g = extend_from_slices(sq, sq, I_, -I_);
    EXPECT_QNEAR(g(Quat(0.2, 0, 0.3, -0.4)), Quat(0.2, 0, 0.3, -0.4) * Quat(0.2, 0, 0.3, -0.4), 1e-13);
}

TEST(SliceFn, Differential) {
    auto sq = from_poly(P({Quat(), Quat(), Quat(1)}));
    EXPECT_QNEAR(differential(sq, Quat(), J_), Quat(), 1e-15);
    auto tr = from_poly(QPolyD::linear(Quat(1, 2, 3, 4)));
    EXPECT_QNEAR(differential(tr, Quat(0.1, 0.2, 0.3, 0.4), Quat(1, -1, 2, 0.5)), Quat(1, -1, 2, 0.5), 1e-14);
    EXPECT_QNEAR(differential(sq, I_, J_), Quat(), 1e-15);
    // against a central difference of f itself
    std::vector<Quat> a = {Quat(1), Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(1, 0, 0, 1)};
    auto f = from_poly(QPolyD(a));
    Quat p(0.2, 0.5, -0.3, 0.4), v(0.3, -0.1, 0.7, 0.2);
    double h = 1e-5;
    Quat fd = (f(p + h * v) - f(p - h * v)) / (2 * h);
    EXPECT_QNEAR(differential(f, p, v), fd, 1e-8);
}

TEST(SliceFn, DifferentialSingular) {
    auto sq = from_poly(P({Quat(), Quat(), Quat(1)}));
    EXPECT_TRUE(is_differential_singular(sq, Quat()));
    EXPECT_FALSE(is_differential_singular(from_poly(QPolyD::linear(Quat(1, 1, 0, 0))), Quat(0.3, 0, 1, 0)));
    auto f = from_poly(star(QPolyD::linear(I_), QPolyD::linear(I_)));
    EXPECT_TRUE(is_differential_singular(f, I_));
}
