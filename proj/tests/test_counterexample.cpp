#include "common.hpp"

using namespace sr;
using cd = std::complex<double>;

namespace {

const double pi = std::numbers::pi;

const DourenFixtures& fx() {
    static DourenFixtures F = douren_fixtures();
    return F;
}

// -- polyline continuation oracle for arg_t -----------------------------------

double cross(cd a, cd b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cd a, cd b, cd c, cd d) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a), d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

std::vector<cd> cut_polyline(double t) {
    std::vector<cd> v;
    for (int k = 0; k <= 4000; ++k) {
        double th = pi * k / 4000;
        v.emplace_back(-1 + std::cos(th), (1 - 2 * t) * std::sin(th));
    }
    return v;
}

bool leg_ok(const std::vector<cd>& arc, cd a, cd b) {
    if (segments_cross(a, b, cd(-2, 0), cd(-1e6, 0))) return false;
    for (size_t k = 0; k + 1 < arc.size(); ++k)
        if (segments_cross(a, b, arc[k], arc[k + 1])) return false;
    return true;
}

double unwrap(const std::vector<cd>& path) {
    double a = 0;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        cd p = path[k], q = path[k + 1];
        for (int s = 0; s < 64; ++s) {
            cd u = p + (q - p) * (s / 64.0), w = p + (q - p) * ((s + 1) / 64.0);
            a += std::arg(w / u);
        }
    }
    return a;
}

// continuation from w = 1 (arg 0) along the first cut-free route
double oracle_arg(double t, cd w) {
    auto arc = cut_polyline(t);
    std::vector<cd> way = {cd(1, 0)};
    for (double x : {1.0, -0.3, -1.0, -1.7, -3.0})
        for (double y : {-3.0, 3.0, -0.2, 0.2}) way.emplace_back(x, y);
    cd start(1, 0);
    if (leg_ok(arc, start, w)) return unwrap({start, w});
    for (auto& m : way)
        if (leg_ok(arc, start, m) && leg_ok(arc, m, w)) return unwrap({start, m, w});
    for (auto& m : way)
        for (auto& n : way)
            if (leg_ok(arc, start, m) && leg_ok(arc, m, n) && leg_ok(arc, n, w)) return unwrap({start, m, n, w});
    throw std::runtime_error("no route");
}

} // namespace

TEST(Counterexample, T) {
    DourenConfig cfg;
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; ++k) {
        double t = douren_T(cfg, random_unit(rng));
        EXPECT_GE(t, 0);
        EXPECT_LE(t, 1);
    }
    EXPECT_EQ(douren_T(cfg, I_), 0);
    EXPECT_EQ(douren_T(cfg, -I_), 1);
}

TEST(Counterexample, ArcPoint) {
    EXPECT_QNEAR(arc_point(0, I_, 0), Quat(0, 2, 0, 0), 1e-15);
    EXPECT_QNEAR(arc_point(0.3, J_, 0.5), Quat(-2, 0, 2, 0), 1e-15);
    EXPECT_QNEAR(arc_point(0, I_, 0.25), Quat(-1, 3, 0, 0), 1e-15);
    EXPECT_ERR(arc_point(1.5, I_, 0), ErrorCode::BadInput);
}

TEST(Counterexample, ArgValues) {
    EXPECT_NEAR(arg_branch(0, cd(-1, 0)), -pi, 1e-15);
    EXPECT_NEAR(arg_branch(1, cd(-1, 0)), pi, 1e-15);
    EXPECT_NEAR(arg_branch(0, cd(-1, -4)), oracle_arg(0, cd(-1, -4)), 1e-12);
    EXPECT_NEAR(arg_branch(0, cd(-1, -4)), -1.8157749899217608, 1e-12);
    EXPECT_ERR(arg_branch(0, cd(-3, 0)), ErrorCode::OnCut);
    EXPECT_ERR(arg_branch(0, cd(-1, 1)), ErrorCode::OnCut);
    EXPECT_ERR(arg_branch(1, cd(-1, -1)), ErrorCode::OnCut);
}

TEST(Counterexample, ArgMatchesContinuationOracle) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3.5, 1.5), v(-3, 3);
    int checked = 0;
    for (double t : {0.0, 0.2, 0.45, 0.5, 0.55, 0.8, 1.0}) {
        for (int k = 0; k < 60; ++k) {
            cd w(u(rng), v(rng));
            if (cut_distance(t, w) < 0.02) continue;
            EXPECT_NEAR(arg_branch(t, w), oracle_arg(t, w), 1e-9) << "t=" << t << " w=" << w;
            ++checked;
        }
    }
    EXPECT_GT(checked, 300);
}

TEST(Counterexample, PhiNormalisation) {
    for (double t : {0.0, 0.3, 1.0})
        for (double x : {0.1, 1.0, 7.5}) {
            cd z = phi(t, cd(x, 2));
            EXPECT_NEAR(z.real(), std::log(x), 1e-12);
            EXPECT_NEAR(z.imag(), 0, 1e-12);
        }
}

TEST(Counterexample, PhiJumpsInsideLobe) {
    // C_t is the region between the two arcs for parameters 0 and t
    for (double t : {0.25, 0.6, 1.0}) {
        cd inside(-1, 2 + 0.5 * (1 - t)), outside(1, 2.5), below(-0.5, 0.5);
        if (t > 0.5) inside = cd(-1, 2 + 0.5 * (1 - 2 * t) * 0.5 + 0.5 * 0.5);
        double h0 = 1.0, ht = (1 - 2 * t);
        // pick a point strictly between the arcs at u = -1
        inside = cd(-1, 2 + 0.5 * (h0 + ht));
        EXPECT_NEAR((phi(t, inside) - phi(0, inside)).imag(), 2 * pi, 1e-12) << t;
        EXPECT_NEAR(std::abs(phi(t, outside) - phi(0, outside)), 0, 1e-12);
        EXPECT_NEAR(std::abs(phi(t, below) - phi(0, below)), 0, 1e-12);
    }
}

TEST(Counterexample, ValueAtP) {
    auto f = douren_f();
    EXPECT_QNEAR(f(Quat(-1) + 2.0 * I_), -pi * I_, 1e-14);
    EXPECT_QNEAR(f(Quat(1) + 2.0 * I_), Quat(), 1e-15);
    EXPECT_ERR(f(Quat(-1) + 3.0 * I_), ErrorCode::OnBoundary);
}

TEST(Counterexample, Caps) {
    const auto& F = fx();
    auto& dom = *F.f.domain;
    EXPECT_FALSE(F.Cplus == F.Cminus);
    std::mt19937_64 rng(3);
    int in = 0, out = 0;
    for (int k = 0; k < 400; ++k) {
        Quat J = random_unit(rng);
        double d = dist(J, I_);
        if (std::abs(d - 0.5) < 0.02) continue;
        bool want = d < 0.5;
        EXPECT_EQ(F.Cplus.contains_unit(dom, J), want) << J;
        EXPECT_EQ(F.Cminus.contains_unit(dom, J), !want) << J;
        (want ? in : out)++;
    }
    EXPECT_GT(in, 5);
    EXPECT_GT(out, 100);
}

TEST(Counterexample, CapSphericalData) {
    const auto& F = fx();
    auto numeric = F.f;
    numeric.sph = nullptr;
    for (int sign : {1, -1}) {
        auto d = spherical_data(numeric, sign > 0 ? F.Cplus : F.Cminus);
        auto e = douren_cap_values(F.cfg, sign);
        EXPECT_QNEAR(d.value, e.value, 1e-12);
        EXPECT_QNEAR(d.derivative, e.derivative, 1e-12);
        // reconstruction at cap points
        for (auto& J : (sign > 0 ? F.Cplus : F.Cminus).members(true, 30)) {
            Quat q = Quat(-1) + 2.0 * J;
            EXPECT_QNEAR(d.at(q), F.f(q), 1e-12);
        }
    }
}

TEST(Counterexample, ExtensionOfPhi) {
    // ext(φ_t) from L_I and L_{-I} data agrees with f_t
    DourenConfig cfg;
    for (double t : {0.0, 0.7}) {
        auto r = [t](const Quat& q) { return embed(phi(t, project(q, I_)), I_); };
        auto s = [t](const Quat& q) { return embed(phi(t, project(q, I_)), I_); };
        auto ft = douren_ft(cfg, t);
        auto e = extend_from_slices(r, s, I_, -I_, ft.domain);
        for (Quat q : {Quat(0.5, 0, 1, 1), Quat(-2.5, 0.3, -0.2, 0.9), Quat(-0.8, 0, 0, -1.2)})
            EXPECT_QNEAR(e(q), ft(q), 1e-12);
    }
}

TEST(Counterexample, Jump) {
    for (double th : {0.4, 1.2, 2.5}) EXPECT_NEAR(douren_jump({}, th), 2 * pi, 1e-8);
}

TEST(Counterexample, ZeroDivisorD) {
    const auto& F = fx();
    EXPECT_QNEAR(F.D(Quat(-1) - 2.0 * I_), Quat(), 1e-12);
    EXPECT_QNEAR(F.D(Quat(-1) + 2.0 * I_), 2 * pi * I_, 1e-12);
    Quat J = Quat(0, 0.6, 0.8, 0);
    EXPECT_QNEAR(F.D(Quat(-1) + 2.0 * J), pi * (I_ + J), 1e-12);
}

TEST(Counterexample, DividesNearCases) {
    const auto& F = fx();
    auto& dom = *F.f.domain;
    Quat Jplus = std::cos(0.3) * I_ + std::sin(0.3) * J_;
    Quat Jminus = std::cos(2.0) * I_ + std::sin(2.0) * K_;
    ASSERT_TRUE(F.Cplus.contains_unit(dom, Jplus));
    ASSERT_TRUE(F.Cminus.contains_unit(dom, Jminus));
    auto near_p = [&](const Quat& J) { return Quat(-1) + 2.0 * J; };
    // case 1: p̃ in C+
    auto g1 = douren_g(F.cfg, F.f, Jplus);
    EXPECT_TRUE(divides_near(g1, near_p(Jplus), F.Cplus));
    EXPECT_FALSE(divides_near(g1, near_p(Jplus), F.Cminus));
    // case 2: p̃ in C- other than p̄ is a ghost divisor near C+
    auto g2 = douren_g(F.cfg, F.f, Jminus);
    EXPECT_TRUE(divides_near(g2, near_p(Jminus), F.Cplus));
    EXPECT_GT(norm(g2(near_p(Jminus))), 0.1);
    auto m2 = multiplicities(g2, near_p(Jminus), F.Cplus);
    EXPECT_GE(m2.classical, 1);
    EXPECT_EQ(multiplicities(g2, near_p(Jminus), F.Cminus).classical, 0);
    // case 3: p̃ = p̄ divides near both caps
    auto g3 = douren_g(F.cfg, F.f, -I_);
    EXPECT_TRUE(divides_near(g3, F.pbar, F.Cplus));
    EXPECT_TRUE(divides_near(g3, F.pbar, F.Cminus));
}

TEST(Counterexample, ZeroReports) {
    const auto& F = fx();
    auto in_cap = [&](const Quat& z, const CapId& c) {
        return same_sphere(z, F.p, 1e-6) && c.contains_unit(*F.f.domain, slice_decompose(z).unit.q());
    };
    auto rg = zero_scan(F.g, 32);
    ASSERT_EQ(rg.isolated.size(), 1u);
    EXPECT_QNEAR(rg.isolated[0].point, F.p, 1e-8);
    EXPECT_TRUE(rg.spherical.empty());

    auto rl = zero_scan(F.ell, 32);
    bool cap_zero = false, pbar_zero = false;
    for (auto& s : rl.spherical) cap_zero = cap_zero || (std::abs(s.x + 1) < 1e-6 && std::abs(s.y - 2) < 1e-6);
    for (auto& z : rl.isolated) pbar_zero = pbar_zero || dist(z.point, F.pbar) < 1e-8;
    EXPECT_TRUE(cap_zero);
    EXPECT_TRUE(pbar_zero);

    auto rm = zero_scan(F.m, 32);
    int plus = 0, minus = 0;
    for (auto& z : rm.isolated) {
        plus += in_cap(z.point, F.Cplus);
        minus += in_cap(z.point, F.Cminus);
        EXPECT_LE(norm(F.m(z.point)), 1e-10);
    }
    EXPECT_EQ(plus, 1);
    EXPECT_EQ(minus, 1);
    bool has_p = false, has_p0 = false;
    for (auto& z : rm.isolated) {
        has_p = has_p || dist(z.point, F.p) < 1e-8;
        has_p0 = has_p0 || dist(z.point, F.p0) < 1e-8;
    }
    EXPECT_TRUE(has_p);
    EXPECT_TRUE(has_p0);
}

TEST(Counterexample, EllFactors) {
    const auto& F = fx();
    auto g = factor_out_point(F.ell, F.pbar, F.Cminus);
    for (auto& J : F.Cminus.members(true, 20)) {
        Quat q = Quat(-1.2) + 1.7 * J;
        EXPECT_QNEAR(g(q), F.g(q), 1e-9);
    }
    EXPECT_NO_THROW(factor_out_sphere(F.ell, -1, 2, F.Cplus));
    EXPECT_ERR(factor_out_sphere(F.ell, -1, 2, F.Cminus), ErrorCode::NotVanishingOnCap);
}

TEST(Counterexample, SingularitiesOfH) {
    const auto& F = fx();
    Quat Jp = std::cos(0.25) * I_ + std::sin(0.25) * J_;
    auto r1 = classify_singularity(F.h, Quat(-1) + 2.0 * Jp, F.Cplus);
    EXPECT_EQ(r1.kind, SingularityKind::Removable);
    EXPECT_EQ(r1.order, 0);
    auto r2 = classify_singularity(F.h, F.pbar, F.Cminus);
    EXPECT_EQ(r2.order, 0);
    EXPECT_NE(r2.kind, SingularityKind::Removable);
    auto r3 = classify_singularity(F.h, F.p0, F.Cminus);
    EXPECT_GE(r3.order, 1);
}

TEST(Counterexample, CapDependentSeries) {
    const auto& F = fx();
    auto Sp = spherical_coeffs(F.f, -1, 2, F.Cplus, 4);
    auto Sm = spherical_coeffs(F.f, -1, 2, F.Cminus, 4);
    // a0 + x0 a1 is the cap value, and the caps differ by -πI against +πI
    Quat vp = Sp.a(0) + (-1.0) * Sp.a(1), vm = Sm.a(0) + (-1.0) * Sm.a(1);
    EXPECT_QNEAR(vp - vm, -pi * I_, 1e-8);
    EXPECT_QNEAR(vp, douren_cap_values(F.cfg, 1).value, 1e-8);
}
