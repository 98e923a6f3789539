#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "zeros.hpp"

namespace slicereg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNoiseFloor = 1e-12;

struct LaurentSeries {
    Quat center;
    int nmin = 0;
    std::vector<Quat> coeffs; // a_nmin .. a_nmax
    double R1 = 0, R2 = kInf;
    bool essential = false;
    int pole_order = 0;
    double contour_radius = 0;

    int nmax() const { return nmin + (int)coeffs.size() - 1; }
    Quat a(int n) const {
        if (n < nmin || n > nmax()) return Quat();
        return coeffs[n - nmin];
    }
};

struct SphericalSeries {
    double x0 = 0, y0 = 0;
    int kmin = 0;              // even
    std::vector<Quat> coeffs;  // a_kmin ..
    CapRef cap;
    CassiniRegion cassini;

    Quat a(int k) const {
        if (k < kmin || k >= kmin + (int)coeffs.size()) return Quat();
        return coeffs[k - kmin];
    }
};

// H ⊗ C element re + i im, with i a central complex unit
struct HC {
    Quat re, im;
    HC operator+(const HC& o) const { return {re + o.re, im + o.im}; }
    HC operator-(const HC& o) const { return {re - o.re, im - o.im}; }
    friend HC operator*(std::complex<double> s, const HC& h) {
        return {s.real() * h.re - s.imag() * h.im, s.imag() * h.re + s.real() * h.im};
    }
};

namespace detail {

// largest radius (from start, halving) whose circle around c in L_I lies in the domain
inline double probe_radius(const SliceFunction& f, const Quat& c, const Quat& I, double start, int samples = 96) {
    for (double r = start; r > 1e-6; r /= 2) {
        bool ok = segment_connected(*f.domain, c + embed(std::polar(0.5 * r, 0.0), I), c + embed(r, I));
        for (double s : {0.5, 1.0}) {
            Quat prev = c + embed(std::polar(s * r, 0.0), I);
            for (int k = 1; k <= samples && ok; ++k) {
                Quat q = c + embed(std::polar(s * r, 2 * std::numbers::pi * k / samples), I);
                ok = segment_connected(*f.domain, prev, q, 6);
                prev = q;
            }
        }
        if (ok) return r;
    }
    return 0;
}

inline void classify_tail(LaurentSeries& L) {
    double scale = 0;
    for (int n = L.nmin; n <= L.nmax(); ++n)
        scale = std::max(scale, norm(L.a(n)) * std::pow(L.contour_radius, n));
    double noise = kNoiseFloor * std::max(scale, 1e-300);
    auto significant = [&](int n) { return norm(L.a(n)) * std::pow(L.contour_radius, n) > noise; };
    int run = 0, best = 0, deepest = 0;
    for (int n = -1; n >= L.nmin; --n) {
        if (significant(n)) { ++run; deepest = -n; } else run = 0;
        best = std::max(best, run);
    }
    L.essential = best >= 8;
    L.pole_order = deepest;
    // radii from the decay over the window
    double up = 0;
    int last_pos = -1;
    for (int n = 1; n <= L.nmax(); ++n)
        if (significant(n)) { up = std::max(up, std::pow(norm(L.a(n)), 1.0 / n)); last_pos = n; }
    // a series that stops well above the noise floor terminates; one that fades into it has a finite radius
    bool stops = last_pos < 0 || (last_pos < L.nmax() - 4 &&
                                  norm(L.a(last_pos)) * std::pow(L.contour_radius, last_pos) > 1e6 * noise);
    L.R2 = stops ? kInf : 1.0 / up;
    double lo = 0;
    if (L.essential)
        for (int m = 1; m <= -L.nmin; ++m)
            if (significant(-m)) lo = std::max(lo, std::pow(norm(L.a(-m)), 1.0 / m));
    L.R1 = lo;
    // quadrature noise would be amplified by |q-p|^n away from the contour
    for (int n = L.nmin; n <= L.nmax(); ++n)
        if (!significant(n)) L.coeffs[n - L.nmin] = Quat();
}

} // namespace detail

// Laurent coefficients of f_I at p by the trapezoid rule on a circle in L_I.
inline LaurentSeries laurent_coeffs(const SliceFunction& f, const Quat& p, int nmin, int nmax, double r1 = -1,
                                    double r2 = -1, int nodes = 2048) {
    if (nmax < nmin) fail(ErrorCode::BadInput, "empty window");
    auto s = slice_decompose(p);
    Quat I = s.real ? Quat::i() : s.unit.q();
    if (r2 <= 0) {
        double start = s.real ? 1.0 : std::min(1.0, 0.9 * s.y);
        r2 = detail::probe_radius(f, p, I, start);
        if (r2 <= 0) fail(ErrorCode::NoAnnulus, "no punctured disc around p lies in the domain");
        r1 = 0;
    }
    if (r1 < 0) r1 = 0;
    double r = r1 > 0 ? std::sqrt(r1 * r2) : 0.5 * r2;
    std::vector<Quat> vals(nodes);
    for (int k = 0; k < nodes; ++k) {
        double th = 2 * std::numbers::pi * k / nodes;
        Quat q = p + embed(std::polar(r, th), I);
        if (!f.domain->inside(q)) fail(ErrorCode::NoAnnulus, "contour leaves the domain");
        vals[k] = f.eval_unchecked(q);
    }
    LaurentSeries L;
    L.center = p;
    L.nmin = nmin;
    L.contour_radius = r;
    for (int n = nmin; n <= nmax; ++n) {
        Quat acc;
        for (int k = 0; k < nodes; ++k) {
            double th = 2 * std::numbers::pi * k / nodes;
            acc += embed(std::polar(std::pow(r, -n), -n * th), I) * vals[k];
        }
        L.coeffs.push_back(acc / double(nodes));
    }
    detail::classify_tail(L);
    return L;
}

// ((q-p)^{*n})(q) for any integer n
inline Quat laurent_power(const Quat& p, int n, const Quat& q) {
    auto power = [](const Quat& c, int k) {
        QPolyD r = QPolyD::constant(Quat(1));
        for (int j = 0; j < k; ++j) r = star(r, QPolyD::linear(c));
        return r;
    };
    if (n >= 0) return power(p, n).eval(q);
    auto S = QPolyD::from_real(QPolyD::linear(p).sym());
    Quat s = S.eval(q);
    Quat sn(1);
    for (int j = 0; j < -n; ++j) sn = sn * s;
    return sn.inv() * power(p.conj(), -n).eval(q);
}

inline Quat eval_series(const LaurentSeries& L, const Quat& q) {
    auto st = sigma_tau_omega(q, L.center);
    if (!(st.sigma < L.R2) || !(st.tau > L.R1))
        fail(ErrorCode::OutsideConvergenceRegion, "q is outside the Laurent region");
    Quat sum;
    double scale = 0;
    for (int n = L.nmin; n <= L.nmax(); ++n) {
        Quat t = laurent_power(L.center, n, q) * L.a(n);
        sum += t;
        scale = std::max(scale, norm(t));
    }
    // geometric tail estimate beyond the window
    double tail = 0;
    if (std::isfinite(L.R2)) {
        double rho = st.sigma / L.R2;
        tail += norm(laurent_power(L.center, L.nmax(), q) * L.a(L.nmax())) * rho / (1 - rho);
    }
    if (L.R1 > 0) {
        double rho = L.R1 / st.tau;
        tail += norm(laurent_power(L.center, L.nmin, q) * L.a(L.nmin)) * rho / (1 - rho);
    }
    if (tail > 1e-12 * std::max(1.0, scale)) fail(ErrorCode::MaxTermsExceeded, "window too short for the tail bound");
    return sum;
}

namespace detail {

inline Quat sphere_value(double x0, double y0, const Quat& q) {
    Quat s = q - Quat(x0);
    return s * s + Quat(y0 * y0);
}

// stem F(z) = value + i (y derivative), extended to the lower half-plane by conjugation
inline HC stem(const SliceFunction& f, const Quat& U, std::complex<double> z) {
    bool lower = z.imag() < 0;
    double x = z.real(), y = std::abs(z.imag());
    auto d = sdata(f, Quat(x) + y * U);
    HC F{d.value, y * d.derivative};
    if (lower) F.im = -F.im;
    return F;
}

} // namespace detail

// Coefficients a_k of f = sum S^n [a_2n + q a_2n+1] around x0 + y0 S.
inline SphericalSeries spherical_coeffs(const SliceFunction& f, double x0, double y0, const CapId& cap, int depth = 32,
                                        int nmin = 0, double rho = -1, int nodes = 256) {
    if (y0 <= 0) fail(ErrorCode::OnRealAxis, "sphere must be non-real");
    SphericalSeries out;
    out.x0 = x0;
    out.y0 = y0;
    out.kmin = 2 * nmin;
    out.cap = ref(cap);
    if (f.poly && nmin >= 0) {
        auto S = sphere_poly(x0, y0 * y0);
        QPolyD h = *f.poly;
        for (int n = 0; n < depth; ++n) {
            auto [Q, R] = h.divmod(S);
            out.coeffs.push_back(R.c.size() > 0 ? R.c[0] : Quat());
            out.coeffs.push_back(R.c.size() > 1 ? R.c[1] : Quat());
            h = Q;
            if (h.is_zero()) break;
        }
        out.cassini = {x0, y0, 0, kInf};
        return out;
    }
    const Quat& U = cap.representative;
    if (rho <= 0) {
        // largest |S| radius whose ring of preimages stays in the domain
        double R = 0.9 * y0;
        for (; R > 1e-4; R *= 0.7) {
            // both preimage rings (z1 and the mirror of 2x0 - z1) must be joined inside
            bool ok = true;
            for (double sc : {1.0, 0.5}) {
                for (int side : {1, -1}) {
                    auto at = [&](int k) {
                        std::complex<double> w = std::polar(sc * R * R, 2 * std::numbers::pi * k / 64);
                        std::complex<double> z1 = x0 + std::complex<double>(0, 1) * std::sqrt(y0 * y0 - w);
                        double xx = side > 0 ? z1.real() : 2 * x0 - z1.real();
                        return Quat(xx) + z1.imag() * U;
                    };
                    for (int k = 0; k < 64 && ok; ++k) ok = segment_connected(*f.domain, at(k), at(k + 1), 6);
                }
            }
            if (ok) break;
        }
        if (R <= 1e-4) fail(ErrorCode::CapTooSmall, "no Cassini ring around the cap lies in the domain");
        rho = R * R;
    }
    std::vector<HC> A(nodes), B(nodes);
    std::vector<std::complex<double>> W(nodes);
    for (int k = 0; k < nodes; ++k) {
        std::complex<double> w = std::polar(rho, 2 * std::numbers::pi * k / nodes);
        std::complex<double> z1 = x0 + std::complex<double>(0, 1) * std::sqrt(y0 * y0 - w);
        std::complex<double> z2 = 2 * x0 - z1;
        HC F1 = detail::stem(f, U, z1), F2 = detail::stem(f, U, z2);
        HC Bk = (1.0 / (z1 - z2)) * (F1 - F2);
        A[k] = F1 - z1 * Bk;
        B[k] = Bk;
        W[k] = w;
    }
    for (int n = nmin; n < nmin + depth; ++n) {
        HC a{}, b{};
        for (int k = 0; k < nodes; ++k) {
            std::complex<double> s = std::pow(W[k], -n) / double(nodes);
            a = a + s * A[k];
            b = b + s * B[k];
        }
        out.coeffs.push_back(a.re);
        out.coeffs.push_back(b.re);
    }
    double R = std::sqrt(rho);
    out.cassini = {x0, y0, nmin < 0 ? 0.5 * R : 0.0, R};
    return out;
}

inline Quat eval_series(const SphericalSeries& s, const Quat& q) {
    if (!s.cassini.contains(q)) fail(ErrorCode::OutsideConvergenceRegion, "q is outside the Cassini region");
    Quat S = detail::sphere_value(s.x0, s.y0, q);
    int nmin = s.kmin / 2;
    int nmax = nmin + (int)(s.coeffs.size() + 1) / 2 - 1;
    Quat Sn(1);
    if (nmin < 0) {
        Quat Si = S.inv();
        for (int j = 0; j < -nmin; ++j) Sn = Sn * Si;
    } else {
        for (int j = 0; j < nmin; ++j) Sn = Sn * S;
    }
    Quat sum, last;
    double scale = 0;
    for (int n = nmin; n <= nmax; ++n) {
        Quat t = Sn * (s.a(2 * n) + q * s.a(2 * n + 1));
        sum += t;
        scale = std::max(scale, norm(t));
        last = t;
        Sn = Sn * S;
    }
    if (std::isfinite(s.cassini.r2)) {
        double rho = norm(S) / (s.cassini.r2 * s.cassini.r2);
        double tail = norm(last) * rho / (1 - rho);
        if (tail > 1e-12 * std::max(1.0, scale)) fail(ErrorCode::MaxTermsExceeded, "series tail above 1e-12");
    }
    return sum;
}

// ---------------------------------------------------------------------------

enum class SingularityKind { Removable, Pole, Essential };

inline const char* to_string(SingularityKind k) {
    switch (k) {
    case SingularityKind::Removable: return "removable";
    case SingularityKind::Pole: return "pole";
    case SingularityKind::Essential: return "essential";
    }
    return "?";
}

struct SingularityReport {
    SingularityKind kind = SingularityKind::Removable;
    int order = 0;           // ord_f(p)
    int spherical_order = 0; // -2m of the cap
    int cap_order = 0;       // n = max order over the cap
    int isolated = 0;        // n - m, the power of (q - p) in the normal form
    CapRef cap;
};

inline SingularityReport classify_singularity(const SliceFunction& f, const Quat& p, const CapId& cap, int window = 16,
                                              int cap_probes_count = 6) {
    SingularityReport rep;
    rep.cap = ref(cap);
    auto L = laurent_coeffs(f, p, -window, 8);
    auto s = slice_decompose(p);
    if (L.essential) {
        rep.kind = SingularityKind::Essential;
        rep.order = L.pole_order;
    } else {
        rep.order = L.pole_order;
    }
    // other cap points decide removability and the cap order
    int cap_max = rep.order;
    bool any_essential = L.essential;
    auto probes = cap.members(true, 200);
    std::vector<Quat> pick;
    for (size_t k = 0; k < probes.size() && (int)pick.size() < cap_probes_count; k += std::max<size_t>(1, probes.size() / cap_probes_count))
        pick.push_back(probes[k]);
    for (auto& J : pick) {
        Quat pt = cap.point(J);
        if (dist(pt, p) < 1e-6) continue;
        try {
            auto Lj = laurent_coeffs(f, pt, -window, 4);
            cap_max = std::max(cap_max, Lj.pole_order);
            any_essential = any_essential || Lj.essential;
        } catch (const Error&) {}
    }
    rep.cap_order = cap_max;
    rep.isolated = cap_max - rep.order;
    if (!L.essential) rep.kind = (rep.order == 0 && cap_max == 0) ? SingularityKind::Removable : SingularityKind::Pole;
    if (!any_essential) {
        try {
            auto S = spherical_coeffs(f, s.x, s.y, cap, 4, -4);
            double scale = 0;
            for (auto& a : S.coeffs) scale = std::max(scale, norm(a));
            int m = 0;
            for (int n = -4; n < 0 && m == 0; ++n)
                if (norm(S.a(2 * n)) > 1e-8 * scale || norm(S.a(2 * n + 1)) > 1e-8 * scale) m = n;
            rep.spherical_order = -2 * m;
        } catch (const Error&) {}
    }
    return rep;
}

// exp((q^2+1)^{-1}) on the tube around [0, i] of relative radius 1/2, minus the unit sphere
inline DomainPtr essential_tube() { return gamma_tube({Quat(), Quat::i()}, 0.5); }

inline SliceFunction essential_fixture() {
    auto dom = minus(essential_tube(), [](const Quat& q) { return std::hypot(q.w, im_norm(q) - 1); }, "S");
    return slice_preserving([](std::complex<double> z) { return std::exp(1.0 / (z * z + 1.0)); }, dom, "exp_essential");
}

} // namespace slicereg
