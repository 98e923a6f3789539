#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include "domains.hpp"
#include "poly.hpp"

namespace slicereg {

// f(q) = value + im(q) derivative on a cap
struct SphericalData {
    Quat value;
    Quat derivative;

    Quat at(const Quat& q) const { return value + q.im() * derivative; }
};

enum class Backing { Polynomial, Rational, Series, ClosedForm, Evaluator, Composite };

inline const char* to_string(Backing b) {
    switch (b) {
    case Backing::Polynomial: return "poly";
    case Backing::Rational: return "rational";
    case Backing::Series: return "series";
    case Backing::ClosedForm: return "closed-form";
    case Backing::Evaluator: return "evaluator";
    case Backing::Composite: return "composite";
    }
    return "?";
}

class SliceFunction {
public:
    using Eval = std::function<Quat(const Quat&)>;
    using Sph = std::function<SphericalData(const Quat&)>;

    DomainPtr domain = whole_space();
    Eval raw;         // evaluator without domain checks
    Sph sph;          // closed-form spherical data, optional
    Eval cullen_hook; // closed-form Cullen derivative, optional
    Backing backing = Backing::Evaluator;
    std::shared_ptr<const QPolyD> poly;
    std::shared_ptr<const QRational> rational;
    bool certified = false;
    std::string name = "f";

    Quat operator()(const Quat& q) const {
        domain->require(q);
        return raw(q);
    }
    Quat eval_unchecked(const Quat& q) const { return raw(q); }
    bool exact() const { return poly || rational; }
};

// polynomial: (x + yI)^n = alpha_n + I beta_n, so b = sum alpha a, y d = sum beta a
inline SphericalData poly_spherical(const QPolyD& f, double x, double y) {
    auto pw = slice_powers(x, y, std::max(0, f.degree()));
    Quat b, c;
    for (size_t n = 0; n < f.c.size(); ++n) {
        b += pw[n].first * f.c[n];
        c += pw[n].second * f.c[n];
    }
    if (y == 0) {
        Quat d;
        for (size_t n = 1; n < f.c.size(); ++n) d += double(n) * pw[n - 1].first * f.c[n];
        return {b, d};
    }
    return {b, c / y};
}

inline QPolyD cullen_poly(const QPolyD& f) {
    std::vector<Quat> d;
    for (size_t n = 1; n < f.c.size(); ++n) d.push_back(double(n) * f.c[n]);
    return QPolyD(d);
}

inline SphericalData rational_spherical(const QRational& r, double x, double y) {
    auto pw = slice_powers(x, y, std::max(0, r.den.degree()));
    double al = 0, be = 0;
    for (size_t n = 0; n < r.den.c.size(); ++n) {
        al += pw[n].first * r.den.c[n];
        be += pw[n].second * r.den.c[n];
    }
    double m = al * al + be * be;
    if (m <= 1e-300) fail(ErrorCode::SingularDenominator, "denominator vanishes on the sphere");
    if (y == 0) {
        Quat v = r.num.eval(Quat(x)) / al;
        double h = 1e-6 * std::max(1.0, std::abs(x));
        Quat d = (r.eval(Quat(x + h)) - r.eval(Quat(x - h))) / (2 * h);
        return {v, d};
    }
    auto ns = poly_spherical(r.num, x, y);
    Quat nb = ns.value, nc = y * ns.derivative;
    // (al + J be)^{-1} (nb + J nc)
    Quat b = (al * nb + be * nc) / m;
    Quat c = (al * nc - be * nb) / m;
    return {b, c / y};
}

inline SliceFunction from_poly(const QPolyD& p, DomainPtr dom = whole_space()) {
    SliceFunction f;
    auto sp = std::make_shared<const QPolyD>(p);
    f.domain = std::move(dom);
    f.poly = sp;
    f.backing = Backing::Polynomial;
    f.certified = true;
    f.name = "poly";
    f.raw = [sp](const Quat& q) { return sp->eval(q); };
    f.sph = [sp](const Quat& q) {
        auto s = slice_decompose(q);
        return poly_spherical(*sp, s.x, s.y);
    };
    auto dp = std::make_shared<const QPolyD>(cullen_poly(p));
    f.cullen_hook = [dp](const Quat& q) { return dp->eval(q); };
    return f;
}

// Ω = H minus the spheres where the denominator vanishes
inline DomainPtr rational_domain(const QRational& r) {
    auto roots = real_roots(r.den);
    if (roots.empty()) return whole_space();
    std::vector<std::pair<double, double>> spheres;
    for (auto& z : roots) spheres.emplace_back(z.real(), std::abs(z.imag()));
    auto distance = [spheres](const Quat& q) {
        double best = 1e300;
        for (auto& [x, y] : spheres) best = std::min(best, std::hypot(q.w - x, im_norm(q) - y));
        return best;
    };
    auto d = minus(whole_space(), distance, "poles");
    auto dd = std::make_shared<DomainSpec>(*d);
    dd->boundary_tol = 1e-12;
    return dd;
}

inline SliceFunction from_rational(const QRational& r0) {
    QRational r = r0.reduced();
    SliceFunction f;
    auto sp = std::make_shared<const QRational>(r);
    f.domain = rational_domain(r);
    f.rational = sp;
    f.backing = Backing::Rational;
    f.certified = true;
    f.name = "rational";
    f.raw = [sp](const Quat& q) { return sp->eval(q); };
    f.sph = [sp](const Quat& q) {
        auto s = slice_decompose(q);
        return rational_spherical(*sp, s.x, s.y);
    };
    return f;
}

inline SliceFunction from_evaluator(SliceFunction::Eval fn, DomainPtr dom, std::string name = "f") {
    SliceFunction f;
    f.raw = std::move(fn);
    f.domain = std::move(dom);
    f.name = std::move(name);
    return f;
}

// f(x + yJ) = Re F(z) + J Im F(z) for F holomorphic with F(conj z) = conj F(z)
inline SliceFunction slice_preserving(std::function<std::complex<double>(std::complex<double>)> F, DomainPtr dom,
                                      std::string name) {
    SliceFunction f;
    f.domain = std::move(dom);
    f.backing = Backing::ClosedForm;
    f.name = std::move(name);
    f.sph = [F](const Quat& q) {
        auto s = slice_decompose(q);
        auto v = F({s.x, s.y});
        if (s.y == 0) {
            double h = 1e-6 * std::max(1.0, std::abs(s.x));
            return SphericalData{Quat(v.real()), Quat(((F({s.x, h})).imag()) / h)};
        }
        return SphericalData{Quat(v.real()), Quat(v.imag() / s.y)};
    };
    f.raw = [F](const Quat& q) {
        auto s = slice_decompose(q);
        auto v = F({s.x, s.y});
        return Quat(v.real()) + v.imag() * s.unit.q();
    };
    return f;
}

inline SliceFunction constant(const Quat& c) { return from_poly(QPolyD::constant(c)); }
inline SliceFunction identity() { return from_poly(QPolyD(std::vector<Quat>{Quat(), Quat(1)})); }

// ---------------------------------------------------------------------------

// Representation formula from two distinct units of one sphere.
inline SphericalData spherical_from_pair(const Quat& fJ, const Quat& fK, const Quat& J, const Quat& K, double y) {
    Quat d = J - K;
    if (norm(d) < 1e-14) fail(ErrorCode::SameUnit, "J and K coincide");
    Quat di = d.inv();
    Quat b = di * (J * fJ - K * fK);
    Quat c = di * (fJ - fK);
    return {b, c / y};
}

inline SphericalData spherical_data_pair(const SliceFunction& f, double x, double y, const Quat& J,
                                         const Quat& K) {
    if (y <= 0) fail(ErrorCode::OnRealAxis, "pair formula needs y > 0");
    return spherical_from_pair(f(Quat(x) + y * J), f(Quat(x) + y * K), J, K, y);
}

inline Quat cullen_numeric(const SliceFunction& f, const Quat& q) {
    // slice restrictions are holomorphic, so the x-derivative is the Cullen derivative
    double h = 1e-3 * std::max(1.0, norm(q));
    if (f.domain->clearance) h = std::min(h, 0.2 * std::abs(f.domain->clearance(q)));
    auto D = [&](double hh) {
        return (f.raw(q - Quat(2 * hh)) - 8.0 * f.raw(q - Quat(hh)) + 8.0 * f.raw(q + Quat(hh)) -
                f.raw(q + Quat(2 * hh))) / (12 * hh);
    };
    Quat d1 = D(h), d2 = D(h / 2);
    return d2 + (d2 - d1) / 15.0;
}

inline Quat cullen_derivative(const SliceFunction& f, const Quat& q) {
    f.domain->require(q);
    if (f.cullen_hook) return f.cullen_hook(q);
    return cullen_numeric(f, q);
}

// Two units of the cap of p, as far apart as a sampled geodesic allows.
inline std::pair<Quat, Quat> local_pair(const DomainSpec& dom, double x, double y, const Quat& I) {
    if (dom.symmetric) return {I, -I};
    Quat u1 = orthogonal_unit(I);
    Quat u2 = I * u1;
    const double pi = std::numbers::pi;
    double angles[] = {pi, 2 * pi / 3, pi / 2, pi / 3, pi / 4, pi / 6, pi / 9, pi / 14, pi / 20,
                       pi / 32, pi / 60, pi / 120, pi / 300, pi / 1000};
    for (double a : angles) {
        for (int dir = 0; dir < 6; ++dir) {
            double th = dir * pi / 3;
            Quat axis = std::cos(th) * u1 + std::sin(th) * u2;
            Quat K = std::cos(a) * I + std::sin(a) * axis;
            K = K / norm(K);
            if (sphere_path_inside(dom, x, y, I, K, std::max(a / 64, 2e-4))) return {I, K};
        }
    }
    fail(ErrorCode::CapTooSmall, "no second unit of the cap found");
}

inline SphericalData spherical_data_numeric(const SliceFunction& f, const Quat& p) {
    auto s = slice_decompose(p);
    if (s.real) return {f(p), cullen_derivative(f, p)};
    f.domain->require(p);
    auto [J, K] = local_pair(*f.domain, s.x, s.y, s.unit.q());
    return spherical_data_pair(f, s.x, s.y, J, K);
}

inline SphericalData spherical_data(const SliceFunction& f, const Quat& p) {
    f.domain->require(p);
    if (f.sph) return f.sph(p);
    return spherical_data_numeric(f, p);
}

// Pair chosen among interior cap grid members for the widest separation.
inline SphericalData spherical_data(const SliceFunction& f, const CapId& cap) {
    if (f.sph) return f.sph(cap.point(cap.representative));
    if (cap.whole_sphere())
        return spherical_data_pair(f, cap.x, cap.y, cap.representative, -cap.representative);
    auto m = cap.members(true, 2000);
    if (m.size() < 2) m = cap.members(false, 2000);
    if (m.size() < 2) fail(ErrorCode::CapTooSmall, "cap has fewer than two grid members");
    auto far = [&](const Quat& a) {
        size_t bi = 0;
        double bd = -1;
        for (size_t k = 0; k < m.size(); ++k)
            if (double d = dist(a, m[k]); d > bd) { bd = d; bi = k; }
        return m[bi];
    };
    Quat A = far(cap.representative);
    Quat B = far(A);
    return spherical_data_pair(f, cap.x, cap.y, A, B);
}

inline Quat spherical_value(const SliceFunction& f, const Quat& p) { return spherical_data(f, p).value; }
inline Quat spherical_derivative(const SliceFunction& f, const Quat& p) {
    if (slice_decompose(p).real) fail(ErrorCode::OnRealAxis, "spherical derivative is defined off R");
    return spherical_data(f, p).derivative;
}

// Builds f from holomorphic restrictions on L_J and L_K.
inline SliceFunction extend_from_slices(SliceFunction::Eval r, SliceFunction::Eval s, const Quat& J0,
                                        const Quat& K0, DomainPtr dom = whole_space(),
                                        double trace_tol = 1e-10) {
    ImaginaryUnit J(J0), K(K0);
    if (dist(J.q(), K.q()) < 1e-12) fail(ErrorCode::SameUnit, "J = K");
    // real traces have to agree
    for (double x : {-0.9, -0.3, 0.0, 0.4, 0.8}) {
        if (!dom->inside(Quat(x))) continue;
        Quat a = r(Quat(x)), b = s(Quat(x));
        if (dist(a, b) > trace_tol * std::max(1.0, norm(a)))
            fail(ErrorCode::MismatchedRealTrace, "restrictions disagree on the real axis");
    }
    Quat Jq = J.q(), Kq = K.q();
    SliceFunction f;
    f.domain = std::move(dom);
    f.name = "extension";
    f.sph = [r, s, Jq, Kq](const Quat& q) {
        auto c = slice_decompose(q);
        if (c.real) {
            Quat v = r(q);
            double h = 1e-4 * std::max(1.0, std::abs(c.x));
            Quat d = (r(Quat(c.x + h)) - r(Quat(c.x - h))) / (2 * h);
            return SphericalData{v, d};
        }
        return spherical_from_pair(r(Quat(c.x) + c.y * Jq), s(Quat(c.x) + c.y * Kq), Jq, Kq, c.y);
    };
    auto sph = f.sph;
    f.raw = [sph, r](const Quat& q) {
        if (slice_decompose(q).real) return r(q);
        return sph(q).at(q);
    };
    return f;
}

// df_p(v) = v_par f'_c(p) + v_perp f'_s(p)
inline Quat differential(const SliceFunction& f, const Quat& p, const Quat& v) {
    auto s = slice_decompose(p);
    Quat fc = cullen_derivative(f, p);
    if (s.real) return v * fc;
    const Quat& I = s.unit.q();
    Quat par = Quat(v.w) + dot(v, I) * I;
    Quat perp = v - par;
    return par * fc + perp * spherical_data(f, p).derivative;
}

inline bool is_differential_singular(const SliceFunction& f, const Quat& p, double tol = 1e-10) {
    auto s = slice_decompose(p);
    Quat fc = cullen_derivative(f, p);
    if (s.real) return norm(fc) <= tol;
    Quat fs = spherical_data(f, p).derivative;
    double scale = std::max(1.0, norm(fc) * norm(fs));
    if (norm(fc) <= tol || norm(fs) <= tol) return true;
    Quat a = fc * fs.conj();
    return std::hypot(a.w, dot(a, s.unit.q())) <= tol * scale;
}

} // namespace slicereg
