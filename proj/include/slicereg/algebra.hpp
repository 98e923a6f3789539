#pragma once

#include "slicefn.hpp"

namespace slicereg {

// Pointwise *-product of spherical data at a point with |im q| = y.
inline SphericalData star_data(const SphericalData& f, const SphericalData& g, double y) {
    // im(q)^2 = -y^2
    return {f.value * g.value - (y * y) * (f.derivative * g.derivative),
            f.value * g.derivative + f.derivative * g.value};
}

inline SphericalData conj_data(const SphericalData& f) { return {f.value.conj(), f.derivative.conj()}; }

// f^s = |f°|^2 + im(q)^2 |f'|^2 + 2 im(q) <f°, f'>
inline SphericalData sym_data(const SphericalData& f, double y) {
    return {Quat(f.value.norm2() - y * y * f.derivative.norm2()), Quat(2 * dot(f.value, f.derivative))};
}

inline Quat Phi(const Quat& a, const Quat& b) {
    double na = a.norm2(), nb = b.norm2();
    double r = 2 * dot(a, b);
    double den = (na - nb) * (na - nb) + r * r;
    if (den == 0) fail(ErrorCode::SingularDenominator, "Phi(a, b) with vanishing denominator");
    return (na * a.conj() + b.conj() * a * b.conj()) / den;
}

inline SphericalData recip_data(const SphericalData& f, double y, double tol = 1e-14) {
    if (y == 0) return {f.value.inv(), Quat()};
    double s0 = f.value.norm2() - y * y * f.derivative.norm2();
    double s1 = 2 * y * dot(f.value, f.derivative);
    double scale = f.value.norm2() + y * y * f.derivative.norm2();
    if (std::hypot(s0, s1) <= tol * scale)
        fail(ErrorCode::SingularDenominator, "point lies on a zero sphere of f^s");
    Quat yd = y * f.derivative;
    return {Phi(f.value, yd), -Phi(yd, f.value) / y};
}

namespace detail {

inline SliceFunction composite(DomainPtr dom, SliceFunction::Sph sph, std::string name) {
    SliceFunction h;
    h.domain = std::move(dom);
    h.backing = Backing::Composite;
    h.name = std::move(name);
    h.sph = sph;
    h.raw = [sph](const Quat& q) { return sph(q).at(q); };
    return h;
}

inline DomainPtr common_domain(const SliceFunction& f, const SliceFunction& g) {
    if (f.domain == g.domain) return f.domain;
    if (f.domain->preset == "whole") return g.domain;
    if (g.domain->preset == "whole") return f.domain;
    return intersection(f.domain, g.domain);
}

// spherical data without the domain check; callers have checked
inline SphericalData sdata(const SliceFunction& f, const Quat& q) {
    if (f.sph) return f.sph(q);
    return spherical_data_numeric(f, q);
}

inline QRational as_rational(const SliceFunction& f) {
    if (f.rational) return *f.rational;
    return {*f.poly, RealPoly<double>(std::vector<double>{1.0})};
}

} // namespace detail

inline SliceFunction star_product(const SliceFunction& f, const SliceFunction& g) {
    if (f.poly && g.poly) return from_poly(star(*f.poly, *g.poly));
    if (f.exact() && g.exact()) {
        auto a = detail::as_rational(f), b = detail::as_rational(g);
        return from_rational({star(a.num, b.num), a.den * b.den});
    }
    auto dom = detail::common_domain(f, g);
    return detail::composite(dom, [f, g](const Quat& q) {
        auto s = slice_decompose(q);
        return star_data(detail::sdata(f, q), detail::sdata(g, q), s.y);
    }, f.name + "*" + g.name);
}

inline SliceFunction regular_conjugate(const SliceFunction& f) {
    if (f.poly) return from_poly(f.poly->conj(), f.domain);
    if (f.rational) return from_rational({f.rational->num.conj(), f.rational->den});
    return detail::composite(f.domain, [f](const Quat& q) { return conj_data(detail::sdata(f, q)); },
                             f.name + "^c");
}

inline SliceFunction symmetrize(const SliceFunction& f) {
    if (f.poly) return from_poly(QPolyD::from_real(f.poly->sym()), f.domain);
    if (f.rational) {
        auto& r = *f.rational;
        return from_rational({QPolyD::from_real(r.num.sym()), r.den * r.den});
    }
    return detail::composite(f.domain, [f](const Quat& q) {
        return sym_data(detail::sdata(f, q), slice_decompose(q).y);
    }, f.name + "^s");
}

// f^{-*}; exact backings give (f^c / f^s) as a rational function
inline SliceFunction reciprocal(const SliceFunction& f) {
    if (f.exact()) {
        auto r = detail::as_rational(f);
        if (r.num.is_zero()) fail(ErrorCode::IdenticallyZero, "reciprocal of zero");
        auto s = r.num.sym();
        return from_rational({r.num.conj().times_real(r.den), s});
    }
    return detail::composite(f.domain, [f](const Quat& q) {
        return recip_data(detail::sdata(f, q), slice_decompose(q).y);
    }, f.name + "^-*");
}

inline SliceFunction quotient(const SliceFunction& f, const SliceFunction& g) {
    return star_product(reciprocal(f), g);
}

// f*g(p) = f(p) g(f(p)^{-1} p f(p)), zero when f(p) = 0
inline Quat star_at(const SliceFunction& f, const SliceFunction& g, const Quat& p) {
    Quat fp = f(p);
    if (norm(fp) == 0) return Quat();
    return fp * g(fp.inv() * p * fp);
}

// f^{-*}*g(p) = f(T)^{-1} g(T) with T = f^c(p)^{-1} p f^c(p)
inline Quat quotient_at(const SliceFunction& f, const SliceFunction& g, const Quat& p) {
    Quat fc = regular_conjugate(f)(p);
    if (norm(fc) == 0) fail(ErrorCode::SingularDenominator, "f^c(p) = 0");
    Quat T = fc.inv() * p * fc;
    Quat fT = f(T);
    if (norm(fT) == 0) fail(ErrorCode::SingularDenominator, "f vanishes at the transformed point");
    return fT.inv() * g(T);
}

// g - c for a constant c, keeps closed-form spherical data
inline SliceFunction minus_constant(const SliceFunction& f, const Quat& c) {
    if (f.poly) return from_poly(*f.poly - QPolyD::constant(c), f.domain);
    auto h = detail::composite(f.domain, [f, c](const Quat& q) {
        auto d = detail::sdata(f, q);
        return SphericalData{d.value - c, d.derivative};
    }, f.name + "-c");
    return h;
}

inline SliceFunction add(const SliceFunction& f, const SliceFunction& g, double sign = 1.0) {
    if (f.poly && g.poly) {
        return from_poly(sign > 0 ? *f.poly + *g.poly : *f.poly - *g.poly);
    }
    auto dom = detail::common_domain(f, g);
    return detail::composite(dom, [f, g, sign](const Quat& q) {
        auto a = detail::sdata(f, q), b = detail::sdata(g, q);
        return SphericalData{a.value + sign * b.value, a.derivative + sign * b.derivative};
    }, f.name + (sign > 0 ? "+" : "-") + g.name);
}

} // namespace slicereg
