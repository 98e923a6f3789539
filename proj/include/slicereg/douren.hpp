#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "algebra.hpp"
#include "zeros.hpp"

namespace slicereg {

struct DourenConfig {
    Quat I = Quat::i();
    double tol = 1e-9;
};

using cplx = std::complex<double>;

inline double douren_T(const DourenConfig& cfg, const Quat& J) { return std::min(dist(J, cfg.I), 1.0); }

// -1 + 2J + (1-t) e^{2πJs} + t e^{-2πJs}
inline Quat arc_point(double t, const Quat& J, double s) {
    if (t < 0 || t > 1 || s < 0 || s > 0.5) fail(ErrorCode::BadInput, "arc parameter out of range");
    double th = 2 * std::numbers::pi * s;
    return Quat(-1.0) + 2.0 * J + (1 - t) * (Quat(std::cos(th)) + std::sin(th) * J) +
           t * (Quat(std::cos(th)) - std::sin(th) * J);
}

// In w = z - 2I the cut of arg_t is (-inf, -2] plus the half ellipse
// -1 + cos θ + i (1-2t) sin θ, θ in [0, π].
inline double arc_distance(double t, cplx w) {
    double e = 1 - 2 * t;
    if (std::abs(e) == 1) {
        // half circle |w + 1| = 1 on the side of sign(e)
        cplx c = w + 1.0;
        if (c.imag() * e >= 0) return std::abs(std::abs(c) - 1);
        return std::min(std::abs(w), std::abs(w + 2.0));
    }
    auto E = [e](double th) { return cplx(-1 + std::cos(th), e * std::sin(th)); };
    double best = 1e300, bt = 0;
    const int n = 64;
    for (int k = 0; k <= n; ++k) {
        double th = std::numbers::pi * k / n;
        double d = std::norm(w - E(th));
        if (d < best) { best = d; bt = th; }
    }
    // Newton on the arc parameter for the squared distance
    for (int it = 0; it < 30; ++it) {
        cplx p = E(bt), dp(-std::sin(bt), e * std::cos(bt)), ddp(-std::cos(bt), -e * std::sin(bt));
        cplx r = p - w;
        double g = (std::conj(r) * dp).real();
        double h = std::norm(dp) + (std::conj(r) * ddp).real();
        if (h <= 0) break;
        double nt = std::clamp(bt - g / h, 0.0, std::numbers::pi);
        if (std::abs(nt - bt) < 1e-15) { bt = nt; break; }
        bt = nt;
    }
    return std::min(std::sqrt(best), std::abs(w - E(bt)));
}

inline double cut_distance(double t, cplx w) {
    double ray = w.real() <= -2 ? std::abs(w.imag()) : std::abs(w - cplx(-2, 0));
    return std::min(ray, arc_distance(t, w));
}

inline double arg_branch(double t, cplx w, double tol = 1e-9) {
    if (cut_distance(t, w) <= tol) fail(ErrorCode::OnCut, "point on the branch cut");
    double u = w.real(), v = w.imag();
    const double pi = std::numbers::pi;
    if (u > -2 && u < 0) {
        double h = (1 - 2 * t) * std::sqrt(std::max(0.0, 1 - (u + 1) * (u + 1)));
        if (v == 0) return t < 0.5 ? -pi : pi;
        if (t < 0.5 && v > 0 && v < h) return std::arg(w) - 2 * pi;
        if (t > 0.5 && v < 0 && v > h) return std::arg(w) + 2 * pi;
    }
    if (v == 0 && u < 0) return pi; // unreachable: the ray is cut
    return std::arg(w);
}

// φ_t(z) = ln|z - 2i| + i arg_t(z - 2i)
inline cplx phi(double t, cplx z, double tol = 1e-9) {
    cplx w = z - cplx(0, 2);
    return {std::log(std::abs(w)), arg_branch(t, w, tol)};
}

inline double douren_clearance(const DourenConfig& cfg, const Quat& q) {
    auto s = slice_decompose(q);
    if (s.real) return 1e300;
    return cut_distance(douren_T(cfg, s.unit.q()), cplx(s.x, s.y - 2));
}

inline DomainPtr douren_domain(const DourenConfig& cfg) {
    auto d = std::make_shared<DomainSpec>();
    d->label = "douren";
    d->preset = "douren";
    d->params = {cfg.I.x, cfg.I.y, cfg.I.z};
    d->contains = [cfg](const Quat& q) { return douren_clearance(cfg, q) > 0; };
    d->clearance = [cfg](const Quat& q) { return douren_clearance(cfg, q); };
    d->boundary_tol = cfg.tol;
    d->symmetric = false;
    d->slice_domain = true;
    d->xmin = -4; d->xmax = 3; d->ymax = 4.5;
    d->hint_units = {cfg.I, -cfg.I};
    return d;
}

// f at x + yJ from φ_t at x ± yI, t = T(J)
inline SphericalData douren_spherical(const DourenConfig& cfg, const Quat& q, double t_override = -1) {
    auto s = slice_decompose(q);
    if (s.real) {
        cplx v = phi(0, cplx(s.x, 0), cfg.tol);
        cplx dv = 1.0 / (cplx(s.x, 0) - cplx(0, 2));
        return {embed(v, cfg.I), embed(dv, cfg.I)};
    }
    double t = t_override >= 0 ? t_override : douren_T(cfg, s.unit.q());
    cplx A = phi(t, cplx(s.x, s.y), cfg.tol);
    cplx B = phi(t, cplx(s.x, -s.y), cfg.tol);
    Quat a = embed(A, cfg.I), b = embed(B, cfg.I);
    return {0.5 * (a + b), (cfg.I * (b - a)) / (2 * s.y)};
}

inline SliceFunction douren_f(const DourenConfig& cfg = {}) {
    SliceFunction f;
    f.domain = douren_domain(cfg);
    f.backing = Backing::ClosedForm;
    f.name = "douren";
    f.sph = [cfg](const Quat& q) { return douren_spherical(cfg, q); };
    f.raw = [cfg](const Quat& q) { return douren_spherical(cfg, q).at(q); };
    f.cullen_hook = [cfg](const Quat& q) {
        // d/dz of φ_t is 1/(z - 2i) on every branch
        auto s = slice_decompose(q);
        Quat J = s.real ? cfg.I : s.unit.q();
        cplx z(s.x, s.y);
        cplx a = 1.0 / (z - cplx(0, 2)), b = 1.0 / (std::conj(z) - cplx(0, 2));
        // derivative of ½(A+B) + (JI/2)(B-A) along x
        Quat A = embed(a, cfg.I), B = embed(b, cfg.I);
        return 0.5 * (A + B) + 0.5 * (J * cfg.I) * (B - A);
    };
    return f;
}

// f_t = ext(φ_t) with a fixed t on its symmetric domain
inline SliceFunction douren_ft(const DourenConfig& cfg, double t) {
    auto d = std::make_shared<DomainSpec>();
    d->label = "douren_t";
    d->contains = [t](const Quat& q) {
        auto s = slice_decompose(q);
        return s.real || cut_distance(t, cplx(s.x, s.y - 2)) > 0;
    };
    d->clearance = [t](const Quat& q) {
        auto s = slice_decompose(q);
        return s.real ? 1e300 : cut_distance(t, cplx(s.x, s.y - 2));
    };
    d->boundary_tol = cfg.tol;
    d->symmetric = true;
    SliceFunction f;
    f.domain = d;
    f.backing = Backing::ClosedForm;
    f.name = "f_t";
    f.sph = [cfg, t](const Quat& q) { return douren_spherical(cfg, q, t); };
    f.raw = [cfg, t](const Quat& q) { return douren_spherical(cfg, q, t).at(q); };
    return f;
}

inline cplx phi0_pbar() { return phi(0, cplx(-1, -2)); }

// closed-form cap values on C+ (sign = +1) and C- (sign = -1)
inline SphericalData douren_cap_values(const DourenConfig& cfg, int sign) {
    Quat ph = embed(phi0_pbar(), cfg.I);
    const double pi = std::numbers::pi;
    return {0.5 * (ph - sign * pi * cfg.I), 0.25 * (cfg.I * ph - Quat(sign * pi))};
}

struct DourenFixtures {
    DourenConfig cfg;
    SliceFunction f, D, g, ell, m, h;
    Quat p, pbar, p0, p1, I0;
    CapId Cplus, Cminus;
};

// g = f - v, v = f°_s(p) + im(p̃) f'_s(p), p̃ = -1 + 2Jt
inline SliceFunction douren_g(const DourenConfig& cfg, const SliceFunction& f, const Quat& Jt) {
    Quat p = Quat(-1) + 2.0 * cfg.I;
    auto d = spherical_data(f, p);
    Quat v = d.value + (2.0 * Jt) * d.derivative;
    auto g = minus_constant(f, v);
    g.name = "g";
    return g;
}

inline Quat default_I0(const DourenConfig& cfg) {
    double a = 2 * std::numbers::pi / 5;
    return std::cos(a) * cfg.I + std::sin(a) * orthogonal_unit(cfg.I);
}

inline DourenFixtures douren_fixtures(const DourenConfig& cfg = {}, std::optional<Quat> I0opt = std::nullopt) {
    DourenFixtures fx;
    fx.cfg = cfg;
    fx.f = douren_f(cfg);
    fx.p = Quat(-1) + 2.0 * cfg.I;
    fx.pbar = fx.p.conj();
    fx.I0 = I0opt ? ImaginaryUnit(*I0opt).q() : default_I0(cfg);
    if (dist(fx.I0, cfg.I) <= 0.5 || dist(fx.I0, -cfg.I) < 1e-9)
        fail(ErrorCode::BadInput, "I0 must satisfy |I0 - I| > 1/2 and I0 != -I");

    auto f0 = douren_ft(cfg, 0), f1 = douren_ft(cfg, 1);
    fx.D = add(f1, f0, -1.0);
    fx.D.name = "D";

    fx.g = douren_g(cfg, fx.f, cfg.I);
    fx.ell = star_product(from_poly(QPolyD::linear(fx.pbar)), fx.g);
    fx.ell.domain = fx.f.domain;
    fx.ell.name = "ell";
    fx.p0 = Quat(-1) + 2.0 * fx.I0;
    Quat gp0 = fx.g(fx.p0);
    fx.p1 = gp0.inv() * fx.p0 * gp0;
    fx.m = star_product(fx.g, from_poly(QPolyD::linear(fx.p1)));
    fx.m.domain = fx.f.domain;
    fx.m.name = "m";

    // h = (q - p)^{-*} * g = S^{-1} ell, singular on -1 + 2S
    auto ell = fx.ell;
    auto hd = minus(fx.f.domain, [](const Quat& q) { return std::hypot(q.w + 1, im_norm(q) - 2); }, "sphere");
    auto hdom = std::make_shared<DomainSpec>(*hd);
    hdom->boundary_tol = 1e-12;
    fx.h = detail::composite(hdom, [ell](const Quat& q) {
        auto s = slice_decompose(q);
        cplx z(s.x, s.y);
        cplx S = (z + 1.0) * (z + 1.0) + 4.0;
        return stem_divide(detail::sdata(ell, q), S, s.y);
    }, "h");

    fx.Cplus = cap_component(*fx.f.domain, fx.p);
    fx.Cminus = cap_component(*fx.f.domain, fx.pbar);
    return fx;
}

// One-sided limits of f_I across α_{0,I} at angle θ, Richardson-extrapolated.
inline double douren_jump(const DourenConfig& cfg, double theta, double delta = 1e-5) {
    auto f = douren_f(cfg);
    cplx c(-1, 2);
    cplx n = std::polar(1.0, theta);
    auto jump = [&](double d) {
        cplx zin = c + (1 - d) * n, zout = c + (1 + d) * n;
        Quat a = f(embed(zin, cfg.I)), b = f(embed(zout, cfg.I));
        return dot(b - a, cfg.I);
    };
    double j1 = jump(delta), j2 = jump(delta / 2);
    return 2 * j2 - j1;
}

} // namespace slicereg
