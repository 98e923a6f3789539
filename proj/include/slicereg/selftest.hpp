#pragma once

// Acceptance battery. Every expected value is produced by an oracle that does
// not share the code path under test: direct Horner evaluation, exact rational
// construction, finite differences, or the polyline argument tracer below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "douren.hpp"
#include "integral.hpp"
#include "series.hpp"

namespace slicereg {

namespace oracle {

using cplx = std::complex<double>;

// does the segment a-b touch the cut of arg_t (ray (-inf,-2] plus half ellipse)?
inline bool leg_hits_cut(double t, cplx a, cplx b) {
    cplx d = b - a;
    // ray
    if ((a.imag() <= 0 && b.imag() >= 0) || (a.imag() >= 0 && b.imag() <= 0)) {
        double s = d.imag() == 0 ? 0 : -a.imag() / d.imag();
        double u = a.real() + s * d.real();
        if (u <= -2) return true;
    }
    double e = 1 - 2 * t;
    if (e == 0) {
        if ((a.imag() <= 0 && b.imag() >= 0) || (a.imag() >= 0 && b.imag() <= 0)) {
            double s = d.imag() == 0 ? 0 : -a.imag() / d.imag();
            double u = a.real() + s * d.real();
            return u >= -2 && u <= 0;
        }
        return false;
    }
    // e^2 (u+1)^2 + v^2 = e^2 along the leg
    double au = a.real() + 1, av = a.imag();
    double A = e * e * d.real() * d.real() + d.imag() * d.imag();
    double B = 2 * (e * e * au * d.real() + av * d.imag());
    double C = e * e * au * au + av * av - e * e;
    double disc = B * B - 4 * A * C;
    if (A == 0 || disc < 0) return false;
    for (double sg : {-1.0, 1.0}) {
        double s = (-B + sg * std::sqrt(disc)) / (2 * A);
        if (s < 0 || s > 1) continue;
        double v = av + s * d.imag();
        if (v * e >= 0) return true;
    }
    return false;
}

// arg_t(w) by tracing a polyline from |w| on the positive ray, legs < π/64
inline double trace_arg(double t, cplx w) {
    double rho = std::abs(w), target = std::arg(w);
    std::vector<double> ends = {target, target > 0 ? target - 2 * std::numbers::pi : target + 2 * std::numbers::pi};
    std::vector<double> found;
    for (double end : ends) {
        int legs = std::max(4, (int)std::ceil(std::abs(end) / (std::numbers::pi / 64)));
        bool ok = true;
        double acc = 0;
        cplx prev = rho;
        for (int k = 1; k <= legs && ok; ++k) {
            cplx next = std::polar(rho, end * k / legs);
            if (leg_hits_cut(t, prev, next)) ok = false;
            acc += std::arg(next / prev);
            prev = next;
        }
        if (ok) found.push_back(acc);
    }
    if (found.size() != 1) throw std::runtime_error("polyline oracle: no unique cut-avoiding route");
    return found[0];
}

inline Quat horner(const QPolyD& f, const Quat& q) {
    Quat r;
    for (size_t k = f.c.size(); k-- > 0;) r = q * r + f.c[k]; // sum q^n a_n
    return r;
}

// 4x4 real Jacobian of a quaternion map by central differences
inline Eigen::Matrix4d fd_jacobian(const std::function<Quat(const Quat&)>& f, const Quat& q, double h = 1e-6) {
    Eigen::Matrix4d J;
    const Quat e[4] = {Quat(1), Quat::i(), Quat::j(), Quat::k()};
    for (int c = 0; c < 4; ++c) {
        Quat d = (f(q + h * e[c]) - f(q - h * e[c])) / (2 * h);
        J(0, c) = d.w; J(1, c) = d.x; J(2, c) = d.y; J(3, c) = d.z;
    }
    return J;
}

inline Eigen::Vector4d vec(const Quat& q) { return {q.w, q.x, q.y, q.z}; }
inline Quat quat(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

} // namespace oracle

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace selftest_detail {

using Rng = std::mt19937_64;

inline std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

inline QPolyD random_poly(Rng& rng, int deg, double scale = 1.0) {
    std::vector<Quat> c;
    for (int k = 0; k <= deg; ++k) c.push_back(random_quat(rng, scale));
    return QPolyD(c);
}

inline const DourenFixtures& fixtures() {
    static DourenFixtures fx = douren_fixtures();
    return fx;
}

// interior units of a cap, thinned
inline std::vector<Quat> cap_units(const CapId& cap, size_t n) { return cap.members(true, n); }

inline CriterionResult c1(Rng& rng) {
    CriterionResult r{1, "representation formula independence", false, "", 0};
    std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(0.1, 1.5);
    std::uniform_int_distribution<int> ud(0, 8);
    double worst = 0;
    for (int p = 0; p < 100; ++p) {
        auto f = random_poly(rng, ud(rng));
        for (int s = 0; s < 20; ++s) {
            double x = ux(rng), y = uy(rng);
            std::vector<SphericalData> ds;
            double scale = 0;
            for (int k = 0; k < 5; ++k) {
                Quat J = random_unit(rng), K = random_unit(rng);
                if (dist(J, K) < 0.2) K = -J;
                Quat fJ = oracle::horner(f, Quat(x) + y * J), fK = oracle::horner(f, Quat(x) + y * K);
                ds.push_back(spherical_from_pair(fJ, fK, J, K, y));
                scale = std::max({scale, norm(fJ), norm(fK)});
            }
            for (size_t a = 0; a < ds.size(); ++a)
                for (size_t b = a + 1; b < ds.size(); ++b) {
                    double dv = dist(ds[a].value, ds[b].value) + y * dist(ds[a].derivative, ds[b].derivative);
                    worst = std::max(worst, dv / std::max(scale, 1e-300));
                }
        }
    }
    r.pass = worst <= 1e-10;
    r.detail = fmt("max relative (b,c) deviation %.3g", worst);
    return r;
}

inline CriterionResult c2(Rng& rng) {
    CriterionResult r{2, "reciprocal identity", false, "", 0};
    std::uniform_int_distribution<int> ud(1, 6);
    double worst = 0;
    int probes = 0;
    for (int p = 0; p < 50; ++p) {
        auto fp = random_poly(rng, ud(rng));
        auto f = from_poly(fp);
        auto g = reciprocal(f);
        auto fs = fp.sym();
        for (int k = 0; k < 1000; ++k) {
            Quat q = random_quat(rng, 1.5);
            // off Z(f^s), with a margin so the identity is well conditioned
            double sv = norm(fs.eval(q));
            if (sv < 1e-3 * std::pow(std::max(1.0, norm(q)), fs.degree())) continue;
            Quat fq = oracle::horner(fp, q);
            Quat gq = g.eval_unchecked(q);
            // (f*g)(q) = f(q) g(f(q)^{-1} q f(q)), (g*f)(q) = g(q) f(g(q)^{-1} q g(q))
            Quat a = fq * g.eval_unchecked(fq.inv() * q * fq);
            Quat b = gq * oracle::horner(fp, gq.inv() * q * gq);
            worst = std::max({worst, dist(a, Quat(1)), dist(b, Quat(1))});
            ++probes;
        }
    }
    r.pass = worst <= 1e-9 && probes >= 1000;
    r.detail = fmt("max |f*f^-* - 1| %.3g over %g probes", worst, probes);
    return r;
}

inline CriterionResult c3(Rng& rng) {
    CriterionResult r{3, "zero collapse of (q-i)*(q-j)", false, "", 0};
    auto f = star(QPolyD::linear(Quat::i()), QPolyD::linear(Quat::j()));
    auto rep = poly_zeros(f);
    bool shape = rep.isolated.size() == 1 && rep.spherical.empty() && rep.ghosts.empty() &&
                 dist(rep.isolated[0].point, Quat::i()) <= 1e-12;
    double at_i = norm(oracle::horner(f, Quat::i()));
    double mn = 1e300;
    int n = 0;
    while (n < 10000) {
        Quat J = random_unit(rng);
        if (dist(J, Quat::i()) < 0.01) continue;
        mn = std::min(mn, norm(oracle::horner(f, J)));
        ++n;
    }
    r.pass = shape && at_i <= 1e-12 && mn > 1e-2;
    r.detail = fmt("one isolated zero at i: %g, |f(i)| %.3g, min |f| off i %.4g", shape, at_i, mn);
    return r;
}

inline CriterionResult c4(Rng& rng) {
    CriterionResult r{4, "Cauchy reproduction", false, "", 0};
    std::uniform_int_distribution<int> ud(0, 8);
    std::uniform_real_distribution<double> uc(-0.5, 0.5), ur(0.6, 1.5), uf(0, 0.7);
    double worst = 0;
    int probes = 0;
    for (int p = 0; p < 20; ++p) {
        auto fp = random_poly(rng, ud(rng));
        auto f = from_poly(fp);
        double c = uc(rng), R = ur(rng);
        Quat I = random_unit(rng);
        auto C = circle_contour(I, c, R, 512);
        for (int k = 0; k < 5; ++k) {
            // on-slice probe for the slicewise formula, off-slice for the local one
            std::complex<double> z = c + uf(rng) * R * std::polar(1.0, 2 * std::numbers::pi * uf(rng));
            Quat zq = embed(z, I);
            Quat want = oracle::horner(fp, zq);
            double sc = std::max(1.0, norm(want));
            worst = std::max(worst, dist(slicewise_cauchy(f, C, zq), want) / sc);
            Quat J = random_unit(rng);
            Quat q = Quat(z.real()) + std::abs(z.imag()) * J;
            Quat wq = oracle::horner(fp, q);
            worst = std::max(worst, dist(local_cauchy(f, C, q), wq) / std::max(1.0, norm(wq)));
            probes += 2;
        }
    }
    r.pass = worst <= 1e-8 && probes >= 100;
    r.detail = fmt("max relative residual %.3g over %g probes at 512 nodes", worst, probes);
    return r;
}

inline CriterionResult c5(Rng&) {
    CriterionResult r{5, "counterexample cap data", false, "", 0};
    const auto& fx = fixtures();
    const Quat& I = fx.cfg.I;
    // φ0(p̄) = ln√17 + I arg0(-1-4I), the argument from the polyline tracer
    double a0 = oracle::trace_arg(0, {-1, -4});
    Quat phi = Quat(std::log(std::sqrt(17.0))) + a0 * I;
    const double pi = std::numbers::pi;
    auto numeric = fx.f;
    numeric.sph = nullptr;
    double worst = 0;
    for (int sign : {1, -1}) {
        const CapId& cap = sign > 0 ? fx.Cplus : fx.Cminus;
        auto d = spherical_data(numeric, cap);
        Quat v = 0.5 * (phi - sign * pi * I), dv = 0.25 * (I * phi - Quat(sign * pi));
        worst = std::max({worst, dist(d.value, v), dist(d.derivative, dv)});
    }
    r.pass = worst <= 1e-9;
    r.detail = fmt("max deviation from closed forms %.3g (traced arg0(-1-4I) = %.10f)", worst, a0);
    return r;
}

inline CriterionResult c6(Rng&) {
    CriterionResult r{6, "non-extendability jump", false, "", 0};
    DourenConfig cfg;
    double worst = 0;
    for (double th : {0.3, 0.9, 1.5707963267948966, 2.2, 2.8}) worst = std::max(worst, std::abs(douren_jump(cfg, th, 1e-5) - 2 * std::numbers::pi));
    r.pass = worst <= 1e-6;
    r.detail = fmt("max |jump - 2pi| %.3g at approach distance 1e-5", worst);
    return r;
}

inline CriterionResult c7(Rng& rng) {
    CriterionResult r{7, "ghost zeros", false, "", 0};
    const auto& fx = fixtures();
    const Quat& I = fx.cfg.I;
    const double pi = std::numbers::pi;
    std::ostringstream os;
    bool ok = true;

    // (a) and (d): case 2, p̃ in C- minus p̄
    auto units = cap_units(fx.Cminus, 400);
    std::shuffle(units.begin(), units.end(), rng);
    int tried = 0;
    double worst_sym = 0, min_g = 1e300;
    bool all_div = true, all_nonzero = true;
    for (auto& J : units) {
        if (dist(J, -I) < 0.05 || tried >= 3) continue;
        ++tried;
        Quat pt = Quat(-1) + 2.0 * J;
        auto g2 = douren_g(fx.cfg, fx.f, J);
        all_div = all_div && divides_near(g2, pt, fx.Cplus);
        // f(p̃) - v = π(I + J)
        all_nonzero = all_nonzero && dist(g2(pt), pi * (I + J)) < 1e-9 && norm(g2(pt)) > 1e-3;
        auto gs = symmetrize(g2);
        for (auto& K : cap_units(fx.Cplus, 100)) {
            Quat q = fx.Cplus.point(K);
            worst_sym = std::max(worst_sym, norm(gs(q)));
            min_g = std::min(min_g, norm(g2(q)));
        }
    }
    bool a = all_div && all_nonzero && tried == 3;
    bool d = worst_sym <= 1e-9 && min_g > 1e-3;
    os << "(a) " << (a ? "ok" : "FAIL") << " (d) max|g^s| on C+ " << worst_sym << ", min|g| on C+ " << min_g;

    // (b) ℓ vanishes on C+, meets C- only at p̄
    double worst_l = 0;
    for (auto& K : cap_units(fx.Cplus, 100)) worst_l = std::max(worst_l, norm(fx.ell(fx.Cplus.point(K))));
    auto zl = zero_scan(fx.ell, 32);
    int l_sph = 0, l_iso_minus = 0;
    bool l_pbar = false;
    for (auto& z : zl.spherical) l_sph += z.cap.index == fx.Cplus.index && std::abs(z.x + 1) < 1e-6 && std::abs(z.y - 2) < 1e-6;
    for (auto& z : zl.isolated)
        if (std::abs(z.point.w + 1) < 1e-6 && std::abs(im_norm(z.point) - 2) < 1e-6 && z.cap.index == fx.Cminus.index) {
            ++l_iso_minus;
            l_pbar = dist(z.point, fx.pbar) < 1e-6;
        }
    double min_l = 1e300;
    for (auto& K : cap_units(fx.Cminus, 2000))
        if (dist(K, -I) > 0.05) min_l = std::min(min_l, norm(fx.ell(fx.Cminus.point(K))));
    bool b = worst_l <= 1e-9 && l_sph == 1 && l_iso_minus == 1 && l_pbar && min_l > 1e-3;
    os << "; (b) max|l| on C+ " << worst_l << ", Z(l) on C- = {pbar}: " << (l_iso_minus == 1 && l_pbar);

    // (c) one isolated zero of m per cap
    auto zm = zero_scan(fx.m, 32);
    int in_plus = 0, in_minus = 0;
    for (auto& z : zm.isolated) {
        if (std::abs(z.point.w + 1) > 1e-6 || std::abs(im_norm(z.point) - 2) > 1e-6) continue;
        if (z.cap.index == fx.Cplus.index && dist(z.point, fx.p) < 1e-6) ++in_plus;
        else if (z.cap.index == fx.Cminus.index && dist(z.point, fx.p0) < 1e-6) ++in_minus;
        else ++in_plus, ++in_minus; // unexpected zero on the sphere
    }
    bool m_direct = norm(fx.m(fx.p)) < 1e-12 && norm(fx.m(fx.p0)) < 1e-12;
    bool c = in_plus == 1 && in_minus == 1 && zm.spherical.empty() && m_direct;
    os << "; (c) m zeros C+/C- " << in_plus << "/" << in_minus;

    ok = a && b && c && d;
    r.pass = ok;
    r.detail = os.str();
    return r;
}

inline CriterionResult c8(Rng& rng) {
    CriterionResult r{8, "zero divisor D on the torus", false, "", 0};
    const auto& fx = fixtures();
    const Quat& I = fx.cfg.I;
    auto Ds = symmetrize(fx.D);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0, worst_s = 0, mx = 0;
    for (int k = 0; k < 1000; ++k) {
        // (x+1)^2 + (y-2)^2 < 0.95^2, off the real-axis segment of the disc
        double rad = 0.95 * std::sqrt(u(rng)), th = 2 * std::numbers::pi * u(rng);
        double x = -1 + rad * std::cos(th), y = 2 + rad * std::sin(th);
        if (std::abs(y - 2) < 1e-6) continue;
        Quat J = random_unit(rng);
        Quat q = Quat(x) + y * J;
        Quat v = fx.D(q);
        worst = std::max(worst, dist(v, std::numbers::pi * (I + J)));
        worst_s = std::max(worst_s, norm(Ds(q)));
        mx = std::max(mx, norm(v));
    }
    r.pass = worst <= 1e-10 && worst_s <= 1e-10 && mx >= 1;
    r.detail = fmt("max |D - pi(I+J)| %.3g, max |D^s| %.3g, max |D| %.4g", worst, worst_s, mx);
    return r;
}

inline CriterionResult c9(Rng& rng) {
    CriterionResult r{9, "series round trips", false, "", 0};
    std::uniform_int_distribution<int> ud(0, 12);
    std::uniform_real_distribution<double> ux(-1, 1), uy(0.2, 1.2), u(0, 1);
    double worst = 0;
    for (int p = 0; p < 40; ++p) {
        auto fp = random_poly(rng, ud(rng));
        auto f = from_poly(fp);
        double x0 = ux(rng), y0 = uy(rng);
        auto cap = cap_component(*f.domain, Quat(x0) + y0 * Quat::i());
        auto S = spherical_coeffs(f, x0, y0, cap);
        for (int k = 0; k < 25; ++k) {
            Quat q = Quat(x0) + y0 * random_unit(rng) + random_quat(rng, 0.5);
            Quat want = oracle::horner(fp, q);
            worst = std::max(worst, dist(eval_series(S, q), want) / std::max(1.0, norm(want)));
        }
    }
    // Laurent window of (q - p)^{-*}
    double other = 0, am1 = 0;
    for (int k = 0; k < 10; ++k) {
        Quat p = random_quat(rng, 1.0);
        if (im_norm(p) < 0.2) continue;
        auto f = reciprocal(from_poly(QPolyD::linear(p)));
        auto L = laurent_coeffs(f, p, -6, 6);
        am1 = std::max(am1, dist(L.a(-1), Quat(1)));
        for (int n = -6; n <= 6; ++n)
            if (n != -1) other = std::max(other, norm(L.a(n)));
    }
    r.pass = worst <= 1e-9 && am1 <= 1e-10 && other <= 1e-10;
    r.detail = fmt("spherical round trip %.3g, |a_-1 - 1| %.3g, other coefficients %.3g", worst, am1, other);
    return r;
}

inline CriterionResult c10(Rng& rng) {
    CriterionResult r{10, "multiplicity normal form", false, "", 0};
    // rational imaginary units from Pythagorean quadruples
    const int quads[][4] = {{1, 2, 2, 3}, {2, 3, 6, 7}, {1, 4, 8, 9}, {4, 4, 7, 9}, {2, 6, 9, 11}, {6, 6, 7, 11},
                            {3, 4, 12, 13}, {2, 10, 11, 15}, {2, 5, 14, 15}, {1, 12, 12, 17}, {8, 9, 12, 17}};
    std::uniform_int_distribution<int> uq(0, 10), us(0, 1), um(0, 2), un(0, 3), uc(-4, 4), ud(1, 4);
    auto frac = [](long n, long d) {
        mpq_class v(n, d);
        v.canonicalize();
        return v;
    };
    auto unit = [&]() {
        auto& a = quads[uq(rng)];
        int perm[3] = {0, 1, 2};
        std::shuffle(perm, perm + 3, rng);
        mpq_class v[3];
        for (int k = 0; k < 3; ++k) v[k] = frac(a[perm[k]] * (us(rng) ? 1 : -1), a[3]);
        return QuatQ(mpq_class(0), v[0], v[1], v[2]);
    };
    auto rq = [&]() {
        return QuatQ(frac(uc(rng), ud(rng)), frac(uc(rng), ud(rng)), frac(uc(rng), ud(rng)), frac(uc(rng), ud(rng)));
    };
    int good = 0;
    std::string first_bad;
    for (int trial = 0; trial < 50; ++trial) {
        mpq_class x = frac(uc(rng), ud(rng)), y = frac(std::abs(uc(rng)) + 1, ud(rng));
        int m = um(rng), n = un(rng);
        std::vector<QuatQ> ps;
        while ((int)ps.size() < n) {
            QuatQ U = unit();
            QuatQ p(x, y * U.x, y * U.y, y * U.z);
            // p_i != conj(p_{i+1})
            if (!ps.empty() && ps.back() == p.conj()) continue;
            ps.push_back(p);
        }
        // g without zeros on the sphere: its stem (b, c) is not on the zero cone
        QPolyQ g;
        for (;;) {
            std::vector<QuatQ> c;
            for (int k = 0; k <= 2; ++k) c.push_back(rq());
            g = QPolyQ(c);
            if (g.is_zero()) continue;
            auto [b, cc] = sphere_stem(g, x, y);
            mpq_class s0 = b.norm2() - cc.norm2();
            mpq_class s1 = b.w * cc.w + b.x * cc.x + b.y * cc.y + b.z * cc.z;
            if (s0 != 0 || s1 != 0) break;
        }
        QPolyQ F = QPolyQ::constant(QuatQ(mpq_class(1)));
        auto S = QPolyQ::from_real(sphere_poly(x, mpq_class(y * y)));
        for (int k = 0; k < m; ++k) F = star(F, S);
        for (auto& p : ps) F = star(F, QPolyQ::linear(p));
        F = star(F, g);
        auto nf = normal_form_exact(F, x, y);
        bool ok = nf.m == m && nf.chain.size() == ps.size();
        for (size_t k = 0; ok && k < ps.size(); ++k) ok = nf.chain[k] == ps[k];
        if (ok) ++good;
        else if (first_bad.empty()) {
            std::ostringstream os;
            os << " (first mismatch at trial " << trial << ": built m=" << m << " n=" << n << ", got m=" << nf.m
               << " n=" << nf.chain.size() << ")";
            first_bad = os.str();
        }
    }
    r.pass = good == 50;
    r.detail = std::to_string(good) + "/50 normal forms recovered exactly" + first_bad;
    return r;
}

inline CriterionResult c11(Rng&) {
    CriterionResult r{11, "singularity classification of h", false, "", 0};
    const auto& fx = fixtures();
    int plus_ok = 0, plus_n = 0, minus_ok = 0, minus_n = 0;
    for (auto& J : cap_units(fx.Cplus, 12)) {
        auto rep = classify_singularity(fx.h, fx.Cplus.point(J), fx.Cplus);
        ++plus_n;
        plus_ok += rep.kind == SingularityKind::Removable && rep.order == 0;
    }
    auto pb = classify_singularity(fx.h, fx.pbar, fx.Cminus);
    bool pbar_ok = pb.kind != SingularityKind::Removable && pb.order == 0;
    for (auto& J : cap_units(fx.Cminus, 24)) {
        if (dist(J, -fx.cfg.I) < 0.05) continue;
        auto rep = classify_singularity(fx.h, fx.Cminus.point(J), fx.Cminus);
        ++minus_n;
        minus_ok += rep.kind != SingularityKind::Removable && rep.order >= 1;
    }
    r.pass = plus_ok == plus_n && plus_n > 0 && pbar_ok && minus_ok == minus_n && minus_n > 0;
    std::ostringstream os;
    os << "C+ removable " << plus_ok << "/" << plus_n << ", pbar " << to_string(pb.kind) << " ord " << pb.order
       << ", other C- ord>=1 " << minus_ok << "/" << minus_n;
    r.detail = os.str();
    return r;
}

inline CriterionResult c12(Rng& rng) {
    CriterionResult r{12, "minimum modulus and open mapping", false, "", 0};
    std::uniform_int_distribution<int> ud(1, 5);
    const double R = 2.0;
    double worst_min = 0;
    int minima = 0, centers = 0, covered = 0;
    for (int p = 0; p < 20; ++p) {
        auto fp = random_poly(rng, ud(rng));
        auto F = [&](const Quat& q) { return oracle::horner(fp, q); };
        // refined local minima of |f| from random starts (Levenberg-Marquardt on f)
        for (int s = 0; s < 10; ++s) {
            Quat q = random_quat(rng, 1.0);
            double lam = 1e-3;
            bool interior = true;
            for (int it = 0; it < 400; ++it) {
                Eigen::Matrix4d J = oracle::fd_jacobian(F, q);
                Eigen::Vector4d fv = oracle::vec(F(q));
                Eigen::Matrix4d A = J.transpose() * J;
                A.diagonal() *= (1 + lam);
                Eigen::Vector4d step = A.ldlt().solve(-J.transpose() * fv);
                Quat nq = q + oracle::quat(step);
                if (norm(F(nq)) < norm(F(q))) { q = nq; lam = std::max(lam / 3, 1e-12); }
                else lam *= 4;
                if (norm(q) > R) { interior = false; break; }
                if (step.norm() < 1e-15 || norm(F(q)) < 1e-14) break;
            }
            if (!interior) continue;
            ++minima;
            worst_min = std::max(worst_min, norm(F(q)) / std::max(1.0, std::sqrt(coeff_scale(fp))));
        }
        // open mapping: small image balls around f(q0) are reached near q0
        for (int c = 0; c < 3 && centers < 50; ++c) {
            Quat q0 = random_quat(rng, 1.0);
            Eigen::Matrix4d J0 = oracle::fd_jacobian(F, q0);
            auto sv = J0.jacobiSvd().singularValues();
            if (sv(3) < 1e-3 * sv(0)) continue;
            ++centers;
            double delta = 1e-3 * sv(3);
            bool all = true;
            for (int t = 0; t < 16 && all; ++t) {
                Quat dir = random_quat(rng, 1.0);
                Quat w = F(q0) + delta * (dir / std::max(norm(dir), 1e-12)) * std::uniform_real_distribution<double>(0, 1)(rng);
                Quat q = q0;
                for (int it = 0; it < 50; ++it) {
                    Eigen::Vector4d st = oracle::fd_jacobian(F, q).lu().solve(oracle::vec(w - F(q)));
                    q = q + oracle::quat(st);
                    if (st.norm() < 1e-14) break;
                }
                all = dist(F(q), w) <= 1e-10 * std::max(1.0, norm(w)) && dist(q, q0) < 10 * delta / sv(3);
            }
            covered += all;
        }
    }
    r.pass = minima > 0 && worst_min <= 1e-8 && centers == 50 && covered == 50;
    std::ostringstream os;
    os << minima << " interior minima, max |f| there " << worst_min << "; image balls covered at " << covered << "/"
       << centers << " centers";
    r.detail = os.str();
    return r;
}

} // namespace selftest_detail

inline const std::vector<std::pair<int, CriterionResult (*)(std::mt19937_64&)>>& selftest_criteria() {
    using namespace selftest_detail;
    static const std::vector<std::pair<int, CriterionResult (*)(std::mt19937_64&)>> list = {
        {1, c1}, {2, c2}, {3, c3}, {4, c4},  {5, c5},   {6, c6},
        {7, c7}, {8, c8}, {9, c9}, {10, c10}, {11, c11}, {12, c12}};
    return list;
}

inline CriterionResult run_criterion(int id, uint64_t seed) {
    for (auto& [k, fn] : selftest_criteria()) {
        if (k != id) continue;
        std::mt19937_64 rng(seed + 1000003ull * k);
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(rng);
        } catch (const std::exception& e) {
            r.id = k;
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }
    fail(ErrorCode::BadInput, "no criterion " + std::to_string(id));
}

inline std::vector<CriterionResult> run_selftest(uint64_t seed = 1, std::vector<int> which = {}) {
    if (which.empty())
        for (auto& [k, fn] : selftest_criteria()) which.push_back(k);
    std::vector<CriterionResult> out;
    for (int id : which) out.push_back(run_criterion(id, seed));
    return out;
}

inline std::string format_result(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "[%s] criterion %2d ", r.pass ? "PASS" : "FAIL", r.id);
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.1fs)", r.seconds);
    return std::string(head) + r.name + ": " + r.detail + tail;
}

} // namespace slicereg
