#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "algebra.hpp"

namespace slicereg {

enum class Provenance { Exact, Polished, Scanned };

inline const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Polished: return "polished";
    case Provenance::Scanned: return "scanned";
    }
    return "?";
}

struct IsolatedZero {
    Quat point;
    CapRef cap;
    int classical = 1;
    int isolated = 1;
    Provenance provenance = Provenance::Polished;
    bool near_threshold = false;
};

struct SphericalZero {
    double x = 0, y = 0;
    CapRef cap;
    int multiplicity = 2; // 2m
    Provenance provenance = Provenance::Polished;
    bool near_threshold = false;
};

struct GhostDivisor {
    Quat point;
    CapRef cap;
};

struct ZeroReport {
    std::vector<IsolatedZero> isolated;
    std::vector<SphericalZero> spherical;
    std::vector<GhostDivisor> ghosts;
};

// cap-vanishing threshold for f'_s relative to the value scale
inline constexpr double kCapZeroTol = 1e-8;

// ---------------------------------------------------------------------------
// Normal form on one sphere: f = S^m (q-p1)*...*(q-pn)*g, S = (q-x)^2+y^2.

template <class T>
struct NormalForm {
    int m = 0;
    std::vector<Quaternion<T>> chain;
    QPoly<T> rest;
};

struct ExactZero {
    bool operator()(const mpq_class& v, const mpq_class&) const { return v == 0; }
};
struct FloatZero {
    double tol = 1e-9;
    bool operator()(double v, double scale) const { return std::abs(v) <= tol * std::max(scale, 1e-300); }
};

template <class T>
T coeff_scale(const QPoly<T>& f) {
    T s(0);
    for (auto& a : f.c) s += a.norm2();
    return s;
}

// value and y*derivative of f on the sphere x + yS
template <class T>
std::pair<Quaternion<T>, Quaternion<T>> sphere_stem(const QPoly<T>& f, const T& x, const T& y) {
    auto pw = slice_powers(x, y, std::max(0, f.degree()));
    Quaternion<T> b, c;
    for (size_t n = 0; n < f.c.size(); ++n) {
        b += f.c[n] * pw[n].first;
        c += f.c[n] * pw[n].second;
    }
    return {b, c};
}

template <class T, class Z>
NormalForm<T> normal_form(QPoly<T> f, const T& x, const T& y, Z is_zero, int max_factors = 1 << 20) {
    if (f.is_zero()) fail(ErrorCode::IdenticallyZero, "zero polynomial has no normal form");
    NormalForm<T> nf;
    RealPoly<T> S = sphere_poly(x, T(y * y));
    while (f.degree() >= 2 && 2 * (nf.m + 1) <= max_factors) {
        auto [Q, R] = f.divmod(S);
        T sc = coeff_scale(f), r = coeff_scale(R);
        if (!is_zero(r, sc)) break;
        f = Q;
        ++nf.m;
    }
    while (f.degree() >= 1 && 2 * nf.m + (int)nf.chain.size() < max_factors) {
        auto [b, c] = sphere_stem(f, x, y);
        T nb = b.norm2(), nc = c.norm2();
        T s0 = nb - nc;
        T s1 = b.w * c.w + b.x * c.x + b.y * c.y + b.z * c.z;
        T sc = nb + nc;
        if (!is_zero(T(s0 * s0 + 4 * s1 * s1), T(sc * sc)) || is_zero(nc, sc)) break;
        // b + U c = 0 on the zero
        Quaternion<T> U = -(b * c.conj()) / nc;
        U.w = T(0);
        Quaternion<T> p(x, T(y * U.x), T(y * U.y), T(y * U.z));
        auto [g, rem] = f.left_divide_linear(p);
        nf.chain.push_back(p);
        f = g;
    }
    nf.rest = f;
    return nf;
}

inline NormalForm<mpq_class> normal_form_exact(const QPolyQ& f, const mpq_class& x, const mpq_class& y) {
    return normal_form(f, x, y, ExactZero{});
}

// ---------------------------------------------------------------------------

struct RootCluster {
    std::complex<double> z;
    int multiplicity;
};

// roots of f^s grouped with exact multiplicities, then merged within radius
inline std::vector<RootCluster> sym_roots(const RealPoly<double>& s, double cluster_radius = 1e-7) {
    std::vector<RootCluster> out;
    auto parts = squarefree_decomposition(to_exact(s));
    for (size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].degree() < 1) continue;
        for (auto z : real_roots(to_double(parts[k]))) {
            if (std::abs(z.imag()) <= 1e-10 * std::max(1.0, std::abs(z))) z = {z.real(), 0.0};
            out.push_back({z, int(k + 1)});
        }
    }
    std::vector<RootCluster> merged;
    for (auto& r : out) {
        bool done = false;
        for (auto& m : merged) {
            if (std::abs(m.z - r.z) <= cluster_radius * std::max(1.0, std::abs(r.z))) {
                m.z = (m.z * double(m.multiplicity) + r.z * double(r.multiplicity)) /
                      double(m.multiplicity + r.multiplicity);
                m.multiplicity += r.multiplicity;
                done = true;
                break;
            }
        }
        if (!done) merged.push_back(r);
    }
    return merged;
}

inline ZeroReport poly_zeros(const QPolyD& f, double cluster_radius = 1e-7) {
    if (f.is_zero()) fail(ErrorCode::IdenticallyZero, "zero polynomial");
    ZeroReport rep;
    auto roots = sym_roots(f.sym(), cluster_radius);
    double fscale = std::sqrt(coeff_scale(f));
    std::sort(roots.begin(), roots.end(), [](auto& a, auto& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    // spheres first, then real points, each left to right
    for (auto& r : roots) {
        if (r.z.imag() <= 0) continue;
        double x = r.z.real(), y = r.z.imag();
        auto nf = normal_form(f, x, y, FloatZero{1e-16}, r.multiplicity);
        auto [b, c] = sphere_stem(f, x, y);
        double rel = norm(c) / std::max(fscale * std::max(1.0, std::pow(std::hypot(x, y), f.degree())), 1e-300);
        bool near = rel > kCapZeroTol / 10 && rel < kCapZeroTol * 10;
        CapRef cap{x, y, 0, true, false};
        if (nf.m > 0) rep.spherical.push_back({x, y, cap, 2 * nf.m, Provenance::Polished, near});
        if (!nf.chain.empty()) {
            Quat p1 = nf.chain.front();
            int lead = 0;
            for (auto& p : nf.chain) {
                if (dist(p, p1) <= 1e-7 * std::max(1.0, norm(p1))) ++lead; else break;
            }
            Provenance pv = f.eval(p1).is_zero() ? Provenance::Exact : Provenance::Polished;
            rep.isolated.push_back({p1, cap, nf.m + lead, (int)nf.chain.size(), pv, near});
        }
    }
    for (auto& r : roots) {
        if (r.z.imag() != 0) continue;
        double x = r.z.real();
        int c = 0;
        QPolyD g = f;
        while (c < r.multiplicity / 2) {
            auto [q, rem] = g.left_divide_linear(Quat(x));
            g = q;
            ++c;
        }
        Provenance pv = f.eval(Quat(x)).is_zero() ? Provenance::Exact : Provenance::Polished;
        rep.isolated.push_back({Quat(x), real_axis_ref(x), c, c, pv, false});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Pointwise divisibility and factor extraction on caps.

inline std::vector<Quat> cap_probes(const CapId& cap, size_t n = 40) {
    auto m = cap.members(true, n);
    if (m.size() < 20) m = cap.members(false, n);
    m.insert(m.begin(), cap.representative);
    return m;
}

inline bool divides_near(const SliceFunction& f, const Quat& pt, const CapId& cap, double tol = kCapZeroTol) {
    if (!same_sphere(pt, Quat(cap.x) + cap.y * cap.representative, 1e-9 * std::max(1.0, cap.y)))
        fail(ErrorCode::DifferentSpheres, "point is not on the cap's sphere");
    auto probes = cap_probes(cap);
    Quat im = pt.im();
    double scale = 0, worst = 0;
    for (auto& J : probes) {
        auto d = spherical_data(f, cap.point(J));
        scale = std::max(scale, norm(d.value) + cap.y * norm(d.derivative));
        worst = std::max(worst, norm(d.value + im * d.derivative));
    }
    // when f vanishes on the cap its size is read just off the sphere
    double delta = std::min(0.1 * cap.y, 0.05);
    for (int k = 0; k < 4; ++k) {
        Quat q = cap.point(cap.representative) + embed(std::polar(delta, k * std::numbers::pi / 2), cap.representative);
        if (f.domain->inside(q)) scale = std::max(scale, norm(f.eval_unchecked(q)));
    }
    return worst <= tol * std::max(scale, 1e-300);
}

// p in Z(f^c) iff f°_s(p) = f'_s(p) im(p)
inline bool conjugate_vanishes_at(const SliceFunction& f, const Quat& p, double tol = 1e-9) {
    auto d = spherical_data(f, p);
    Quat r = d.value - d.derivative * p.im();
    return norm(r) <= tol * std::max(1.0, norm(d.value) + im_norm(p) * norm(d.derivative));
}

// H ⊗ C division by a complex slice-preserving value s
inline SphericalData stem_divide(const SphericalData& f, std::complex<double> s, double y) {
    double a = s.real(), bb = s.imag(), m = std::norm(s);
    if (m == 0) fail(ErrorCode::ZeroDivision, "division by vanishing slice-preserving factor");
    if (y == 0) return {f.value / a, f.derivative / a};
    Quat c = y * f.derivative;
    return {(a * f.value + bb * c) / m, ((a * c - bb * f.value) / m) / y};
}

// Mean value over a circle in the upper half-plane of the stem (value, y*derivative).
inline SphericalData circle_mean(const SliceFunction::Sph& g, double x, double y, const Quat& I, double r,
                                 int n = 32) {
    Quat b, c;
    for (int k = 0; k < n; ++k) {
        double th = 2 * std::numbers::pi * (k + 0.5) / n;
        double xx = x + r * std::cos(th), yy = y + r * std::sin(th);
        auto d = g(Quat(xx) + yy * I);
        b += d.value;
        c += yy * d.derivative;
    }
    return {b / double(n), (c / double(n)) / y};
}

namespace detail {

inline SliceFunction sphere_quotient(const SliceFunction& num, double x0, double y0, const std::string& name) {
    auto g = [num](const Quat& q) { return sdata(num, q); };
    SliceFunction::Sph raw_sph = [g, x0, y0](const Quat& q) {
        auto s = slice_decompose(q);
        std::complex<double> z(s.x, s.y);
        std::complex<double> S = (z - x0) * (z - x0) + y0 * y0;
        return stem_divide(g(q), S, s.y);
    };
    double r = std::min(0.1 * y0, 0.05);
    SliceFunction::Sph sph = [raw_sph, x0, y0, r](const Quat& q) {
        auto s = slice_decompose(q);
        if (std::hypot(s.x - x0, s.y - y0) < 0.5 * r && !s.real)
            return circle_mean(raw_sph, s.x, s.y, s.unit.q(), r);
        return raw_sph(q);
    };
    return composite(num.domain, sph, name);
}

} // namespace detail

// h with f = [(q-x0)^2+y0^2] h near the cap
inline SliceFunction factor_out_sphere(const SliceFunction& f, double x0, double y0, const CapId& cap,
                                       double tol = kCapZeroTol) {
    if (f.poly) {
        auto [Q, R] = f.poly->divmod(sphere_poly(x0, y0 * y0));
        if (std::sqrt(coeff_scale(R)) > tol * std::max(1.0, std::sqrt(coeff_scale(*f.poly))))
            fail(ErrorCode::NotVanishingOnCap, "sphere factor does not divide");
        return from_poly(Q, f.domain);
    }
    if (!divides_near(f, Quat(x0) + y0 * cap.representative, cap, tol) ||
        !divides_near(f, Quat(x0) - y0 * cap.representative, cap, tol))
        fail(ErrorCode::NotVanishingOnCap, "f does not vanish on the cap");
    return detail::sphere_quotient(f, x0, y0, f.name + "/S");
}

// g with f = (q - p)*g near the cap
inline SliceFunction factor_out_point(const SliceFunction& f, const Quat& p, const std::optional<CapId>& cap,
                                      double tol = kCapZeroTol) {
    auto s = slice_decompose(p);
    if (f.poly) {
        auto [g, rem] = f.poly->left_divide_linear(p);
        if (norm(rem) > tol * std::max(1.0, std::sqrt(coeff_scale(*f.poly))))
            fail(ErrorCode::NotDivisible, "q - p is not a left factor");
        return from_poly(g, f.domain);
    }
    if (s.real) {
        if (norm(f(p)) > tol * std::max(1.0, norm(f(p + Quat(1e-3)))))
            fail(ErrorCode::NotDivisible, "f(p) != 0 at the real point");
        double x0 = s.x;
        auto inner = f;
        SliceFunction::Sph raw_sph = [inner, x0](const Quat& q) {
            auto c = slice_decompose(q);
            return stem_divide(detail::sdata(inner, q), std::complex<double>(c.x - x0, c.y), c.y);
        };
        double r = 0.05;
        // near x0 use the slice Cauchy integral of the quotient on a circle around x0
        SliceFunction::Sph sph = [raw_sph, x0, r](const Quat& q) {
            auto c = slice_decompose(q);
            if (std::hypot(c.x - x0, c.y) >= 0.5 * r) return raw_sph(q);
            Quat I = c.real ? Quat::i() : c.unit.q();
            const int n = 64;
            auto val = [&](std::complex<double> z) {
                Quat acc;
                for (int k = 0; k < n; ++k) {
                    double th = 2 * std::numbers::pi * (k + 0.5) / n;
                    std::complex<double> e(std::cos(th), std::sin(th));
                    std::complex<double> sp = x0 + r * e;
                    std::complex<double> w = (r * e) / (sp - z) / double(n);
                    Quat fs = raw_sph(embed(sp, I)).at(embed(sp, I));
                    acc += embed(w, I) * fs;
                }
                return acc;
            };
            std::complex<double> z(c.x, c.y);
            Quat fz = val(z);
            if (c.real) {
                std::complex<double> h(0, 1e-4);
                Quat d = (val(z + 1e-4) - val(z - 1e-4)) / 2e-4;
                return SphericalData{fz, d};
            }
            Quat fzb = val(std::conj(z));
            return SphericalData{(fz + fzb) / 2.0, (I.inv() * (fz - fzb)) / (2 * c.y)};
        };
        return detail::composite(f.domain, sph, f.name + "/(q-x)");
    }
    if (!cap) fail(ErrorCode::BadInput, "non-real factor needs a cap");
    if (!divides_near(f, p, *cap, tol)) fail(ErrorCode::NotDivisible, "q - p does not divide f near the cap");
    // (q-p)^{-*} * f = S^{-1} (q - pbar) * f
    auto ell = star_product(from_poly(QPolyD::linear(p.conj())), f);
    ell.domain = f.domain;
    return detail::sphere_quotient(ell, s.x, s.y, "(q-p)^-*" + f.name);
}

struct Multiplicities {
    int classical = 0;
    int spherical = 0; // 2m
    int isolated = 0;  // n
    std::vector<Quat> chain;
};

inline Multiplicities multiplicities(const SliceFunction& f, const Quat& p, const std::optional<CapId>& cap,
                                     double tol = kCapZeroTol, int max_depth = 6) {
    auto s = slice_decompose(p);
    Multiplicities out;
    if (f.poly) {
        if (f.poly->is_zero()) fail(ErrorCode::IdenticallyZero, "f = 0");
        if (s.real) {
            QPolyD g = *f.poly;
            for (;;) {
                auto [q, rem] = g.left_divide_linear(p);
                if (norm(rem) > 1e-9 * std::max(1.0, std::sqrt(coeff_scale(g))) || g.degree() < 1) break;
                g = q;
                ++out.classical;
            }
            out.isolated = out.classical;
            return out;
        }
        auto k = 2 * f.poly->degree();
        auto nf = normal_form(*f.poly, s.x, s.y, FloatZero{1e-16}, k);
        out.spherical = 2 * nf.m;
        out.isolated = (int)nf.chain.size();
        out.chain = nf.chain;
        int lead = 0;
        for (auto& c : nf.chain) {
            if (dist(c, p) <= 1e-7 * std::max(1.0, norm(p))) ++lead; else break;
        }
        out.classical = nf.m + lead;
        return out;
    }
    if (s.real) {
        SliceFunction g = f;
        while (out.classical < max_depth && norm(g(p)) <= tol * std::max(1.0, norm(g(p + Quat(1e-2))))) {
            g = factor_out_point(g, p, std::nullopt, tol);
            ++out.classical;
        }
        out.isolated = out.classical;
        return out;
    }
    if (!cap) fail(ErrorCode::BadInput, "non-real point needs a cap");
    SliceFunction g = f;
    int m = 0;
    while (m < max_depth && divides_near(g, p, *cap, tol) && divides_near(g, p.conj(), *cap, tol)) {
        g = factor_out_sphere(g, s.x, s.y, *cap, tol);
        ++m;
    }
    if (m == max_depth) fail(ErrorCode::IdenticallyZero, "f vanishes to every tested order on the cap");
    out.spherical = 2 * m;
    for (int it = 0; it < max_depth; ++it) {
        auto d = spherical_data(g, cap->point(cap->representative));
        double y = s.y;
        Quat c = y * d.derivative;
        double nb = d.value.norm2(), nc = c.norm2();
        double sc = nb + nc;
        if (sc == 0 || std::hypot(nb - nc, 2 * dot(d.value, c)) > tol * sc || nc <= tol * tol * sc) break;
        Quat U = -(d.value * c.conj()) / nc;
        Quat pi = Quat(s.x) + y * (U.im() / im_norm(U));
        if (!divides_near(g, pi, *cap, tol)) break;
        out.chain.push_back(pi);
        g = factor_out_point(g, pi, cap, tol);
    }
    out.isolated = (int)out.chain.size();
    int lead = 0;
    for (auto& c : out.chain) {
        if (dist(c, p) <= 1e-6 * std::max(1.0, norm(p))) ++lead; else break;
    }
    out.classical = m + lead;
    return out;
}

// ---------------------------------------------------------------------------
// Lattice scan of f^s on representative slices, Newton polish, cap solve.

inline std::vector<Quat> scan_units(const DomainSpec& dom) {
    std::vector<Quat> u = dom.hint_units;
    if (dom.symmetric) {
        if (u.empty()) u.push_back(Quat::i());
        return u;
    }
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    double ico[12][3] = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : ico) {
        Quat q(0, v[0], v[1], v[2]);
        u.push_back(q / norm(q));
    }
    for (Quat q : {Quat::i(), -Quat::i(), Quat::j(), -Quat::j(), Quat::k(), -Quat::k()}) u.push_back(q);
    return u;
}

inline ZeroReport zero_scan(const SliceFunction& f, int resolution = 48, double tol = kCapZeroTol) {
    const DomainSpec& dom = *f.domain;
    ZeroReport rep;
    auto units = scan_units(dom);
    int nx = resolution, ny = resolution;
    double hx = (dom.xmax - dom.xmin) / nx, hy = dom.ymax / ny;

    auto fs = [&](double x, double y, const Quat& U) -> std::optional<std::complex<double>> {
        Quat q = Quat(x) + y * U;
        if (!dom.inside(q)) return std::nullopt;
        try {
            auto d = spherical_data(f, q);
            return std::complex<double>(d.value.norm2() - y * y * d.derivative.norm2(), 2 * y * dot(d.value, d.derivative));
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    struct Found { double x, y; Quat U; };
    std::vector<Found> finds;
    for (auto& U : units) {
        std::vector<double> mag((nx + 1) * (ny + 1), -1);
        for (int a = 0; a <= nx; ++a)
            for (int b = 1; b <= ny; ++b) {
                auto v = fs(dom.xmin + a * hx, b * hy, U);
                if (v) mag[a * (ny + 1) + b] = std::abs(*v);
            }
        for (int a = 0; a <= nx; ++a)
            for (int b = 1; b <= ny; ++b) {
                double m0 = mag[a * (ny + 1) + b];
                if (m0 < 0) continue;
                bool local = true;
                for (int da = -1; da <= 1 && local; ++da)
                    for (int db = -1; db <= 1 && local; ++db) {
                        int aa = a + da, bb = b + db;
                        if ((da == 0 && db == 0) || aa < 0 || aa > nx || bb < 1 || bb > ny) continue;
                        double m1 = mag[aa * (ny + 1) + bb];
                        if (m1 >= 0 && m1 < m0) local = false;
                    }
                if (!local) continue;
                // Newton on the holomorphic slice restriction of f^s
                std::complex<double> z(dom.xmin + a * hx, b * hy);
                bool ok = false;
                for (int it = 0; it < 60; ++it) {
                    auto v = fs(z.real(), z.imag(), U);
                    if (!v) break;
                    double h = 1e-6 * std::max(1.0, std::abs(z));
                    auto vp = fs(z.real() + h, z.imag(), U), vm = fs(z.real() - h, z.imag(), U);
                    if (!vp || !vm) break;
                    std::complex<double> dv = (*vp - *vm) / (2 * h);
                    if (std::abs(dv) == 0) break;
                    std::complex<double> step = *v / dv;
                    if (std::abs(step) > 0.5 * std::max(hx, hy) * 4) step *= 0.5 * std::max(hx, hy) * 4 / std::abs(step);
                    z -= step;
                    if (z.imag() <= 0) break;
                    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) { ok = true; break; }
                }
                if (!ok) {
                    auto v = fs(z.real(), z.imag(), U);
                    ok = v && z.imag() > 0 && std::abs(*v) < 1e-10;
                }
                if (ok) finds.push_back({z.real(), z.imag(), U});
            }
    }
    // real axis: minima of |f| along x
    {
        int n = 8 * resolution;
        std::vector<double> mag(n + 1, -1);
        for (int a = 0; a <= n; ++a) {
            Quat q(dom.xmin + a * (dom.xmax - dom.xmin) / n);
            if (dom.inside(q)) try { mag[a] = norm(f(q)); } catch (const Error&) {}
        }
        for (int a = 1; a < n; ++a) {
            if (mag[a] < 0 || mag[a - 1] < 0 || mag[a + 1] < 0 || mag[a] > mag[a - 1] || mag[a] > mag[a + 1]) continue;
            double lo = dom.xmin + (a - 1) * (dom.xmax - dom.xmin) / n, hi = lo + 2 * (dom.xmax - dom.xmin) / n;
            for (int it = 0; it < 200; ++it) {
                double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (norm(f(Quat(m1))) < norm(f(Quat(m2)))) hi = m2; else lo = m1;
            }
            double x = 0.5 * (lo + hi);
            double sc = std::max(1.0, mag[a - 1]);
            if (norm(f(Quat(x))) <= 1e-7 * sc) {
                bool dup = false;
                for (auto& z : rep.isolated) dup = dup || (z.cap.real_axis && std::abs(z.point.w - x) < 1e-6);
                if (!dup) {
                    int c = 1;
                    try { c = multiplicities(f, Quat(x), std::nullopt, tol).classical; } catch (const Error&) {}
                    rep.isolated.push_back({Quat(x), real_axis_ref(x), c, c, Provenance::Scanned, false});
                }
            }
        }
    }
    // classify every sphere find on its cap, filling each sphere's grid once
    std::vector<CapId> filled;
    for (auto& fd : finds) {
        Quat q = Quat(fd.x) + fd.y * fd.U;
        CapId cap;
        bool have = false;
        for (auto& c : filled) {
            if (std::abs(c.x - fd.x) > 1e-7 || std::abs(c.y - fd.y) > 1e-7 || !dom.inside(q)) continue;
            if (auto r = relocate(dom, c, fd.U)) { cap = *r; have = true; }
            break;
        }
        if (!have) {
            try { cap = cap_component(dom, q); } catch (const Error&) { continue; }
            filled.push_back(cap);
        }
        bool dup = false;
        auto same = [&](const CapRef& c) {
            return std::abs(c.x - fd.x) < 1e-6 && std::abs(c.y - fd.y) < 1e-6 && c.index == cap.index;
        };
        for (auto& z : rep.isolated) dup = dup || same(z.cap);
        for (auto& z : rep.spherical) dup = dup || same(z.cap);
        for (auto& z : rep.ghosts) dup = dup || same(z.cap);
        if (dup) continue;
        auto d = spherical_data(f, q);
        double scale = std::max(norm(d.value) + fd.y * norm(d.derivative), 1e-300);
        double rel = fd.y * norm(d.derivative) / std::max(scale, 1.0);
        bool near = rel > kCapZeroTol / 10 && rel < kCapZeroTol * 10;
        if (fd.y * norm(d.derivative) <= tol * std::max(1.0, scale) && norm(d.value) <= tol * std::max(1.0, scale)) {
            int m2 = 2;
            try { m2 = std::max(2, multiplicities(f, q, cap, tol).spherical); } catch (const Error&) {}
            rep.spherical.push_back({fd.x, fd.y, ref(cap), m2, Provenance::Scanned, near});
            continue;
        }
        Quat im = -(d.value * d.derivative.inv());
        Quat P = Quat(fd.x) + fd.y * (im.im() / im_norm(im));
        bool in_cap = false;
        try { in_cap = cap.contains_unit(dom, P.im() / im_norm(P)); } catch (const Error&) {}
        if (in_cap && norm(f(P)) <= 1e-9 * std::max(1.0, scale)) {
            int c = 1, n = 1;
            try {
                auto mu = multiplicities(f, P, cap, tol);
                c = std::max(1, mu.classical);
                n = std::max(1, mu.isolated);
            } catch (const Error&) {}
            rep.isolated.push_back({P, ref(cap), c, n, Provenance::Polished, near});
        } else {
            rep.ghosts.push_back({P, ref(cap)});
        }
    }
    return rep;
}

} // namespace slicereg
