#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "slicefn.hpp"

namespace slicereg {

// Gauss-Legendre nodes and weights on [-1, 1]
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1; }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

struct Circle {
    std::complex<double> center;
    double radius = 1;
    int orientation = 1;
};

// Union of circles in L_I, integrated with composite Gauss panels.
struct Contour {
    Quat I = Quat::i();
    std::vector<Circle> circles;
    int panels = 16;
    int order = 16;

    int nodes() const { return (int)circles.size() * panels * order; }

    struct Node {
        std::complex<double> s, ds; // point and weighted tangent
    };
    std::vector<Node> quadrature() const {
        auto [gx, gw] = gauss_legendre(order);
        std::vector<Node> out;
        for (auto& c : circles) {
            double h = 2 * std::numbers::pi / panels;
            for (int p = 0; p < panels; ++p)
                for (int k = 0; k < order; ++k) {
                    double th = h * (p + 0.5 * (gx[k] + 1));
                    std::complex<double> e = std::polar(1.0, c.orientation * th);
                    std::complex<double> s = c.center + c.radius * e;
                    std::complex<double> ds = std::complex<double>(0, c.orientation) * c.radius * e * (0.5 * h * gw[k]);
                    out.push_back({s, ds});
                }
        }
        return out;
    }
};

inline Contour circle_contour(const Quat& I, std::complex<double> center, double r, int nodes = 256) {
    Contour c;
    c.I = ImaginaryUnit(I).q();
    c.circles.push_back({center, r, 1});
    c.order = 16;
    c.panels = std::max(1, nodes / 16);
    return c;
}

using SliceMap = std::function<Quat(const Quat&)>;

// ∫ g(s) ds f(s) with f = F + G J and g = H + J K, each term a complex integral in L_I
inline Quat nc_line_integral(const SliceMap& g, const Contour& C, const SliceMap& f) {
    const Quat& I = C.I;
    Quat J = orthogonal_unit(I);
    Quat IJ = I * J;
    std::complex<double> t1, t2, t3, t4;
    for (auto& n : C.quadrature()) {
        Quat sq = embed(n.s, I);
        Quat fv = f(sq), gv = g(sq);
        std::complex<double> F(fv.w, dot(fv, I)), G(dot(fv, J), dot(fv, IJ));
        // g = a + bI + cJ + dIJ = (a + bI) + J (c - dI)
        std::complex<double> H(gv.w, dot(gv, I)), K(dot(gv, J), -dot(gv, IJ));
        t1 += H * n.ds * F;
        t2 += H * n.ds * G;
        t3 += K * n.ds * F;
        t4 += K * n.ds * G;
    }
    return embed(t1, I) + embed(t2, I) * J + J * embed(t3, I) + J * embed(t4, I) * J;
}

// f(z) = (2πI)^{-1} ∫ ds (s - z)^{-1} f(s)
inline Quat slicewise_cauchy(const SliceMap& f, const Contour& C, const Quat& z) {
    std::complex<double> zc = project(z, C.I);
    if (norm(z - embed(zc, C.I)) > 1e-12 * std::max(1.0, norm(z)))
        fail(ErrorCode::BadInput, "probe not on the contour's slice");
    Quat acc;
    const std::complex<double> twopii(0, 2 * std::numbers::pi);
    for (auto& n : C.quadrature()) {
        if (std::abs(n.s - zc) < 1e-12) fail(ErrorCode::ProbeOutsideValidated, "probe on the contour");
        acc += embed(n.ds / (twopii * (n.s - zc)), C.I) * f(embed(n.s, C.I));
    }
    return acc;
}

inline Quat slicewise_cauchy(const SliceFunction& f, const Contour& C, const Quat& z) {
    return slicewise_cauchy([&](const Quat& s) { return f(s); }, C, z);
}

// (s - q)^{-*} = (|s|^2 - q 2re(s) + q^2)^{-1} (s̄ - q)
inline Quat cauchy_kernel(const Quat& s, const Quat& q) {
    Quat d = Quat(s.norm2()) - q * (2 * s.w) + q * q;
    return d.inv() * (s.conj() - q);
}

// boundary data f̃ supplied directly on L_I
inline Quat local_cauchy(const SliceMap& ftilde, const Contour& C, const Quat& q) {
    Quat acc;
    Quat inv2piI = (2 * std::numbers::pi * C.I).inv();
    for (auto& n : C.quadrature()) {
        Quat s = embed(n.s, C.I);
        acc += cauchy_kernel(s, q) * inv2piI * embed(n.ds, C.I) * ftilde(s);
    }
    return acc;
}

inline Quat local_cauchy(const SliceFunction& f, const Contour& C, const Quat& q) {
    if (!f.domain->symmetric) fail(ErrorCode::NotSymmetric, "use the cap-data variant on non-symmetric domains");
    return local_cauchy([&](const Quat& s) { return f(s); }, C, q);
}

// f̃(x + yJ) = f°_s(x + |y|J0) + yJ f'_s(x + |y|J0) for s in any slice
inline SliceMap cap_boundary_data(const SliceFunction& f, const Quat& J0) {
    return [f, J0](const Quat& s) {
        auto c = slice_decompose(s);
        if (c.real) return f(s);
        auto d = spherical_data(f, Quat(c.x) + c.y * J0);
        return d.value + s.im() * d.derivative;
    };
}

// Symmetric set whose J0-slice is a union of discs in the upper half-plane.
struct CapCauchy {
    SliceFunction f;
    Quat J0;
    std::vector<Circle> discs; // centers with Im > 0, in L_{J0} coordinates
    double eps = 0;            // validated angular radius around J0
    int nodes_per_circle = 512;

    Contour contour() const {
        Contour C;
        C.I = J0;
        for (auto& d : discs) {
            C.circles.push_back({d.center, d.radius, 1});
            C.circles.push_back({std::conj(d.center), d.radius, 1});
        }
        C.order = 16;
        C.panels = nodes_per_circle / 16;
        return C;
    }
};

// Bisects ε downward from start until the boundary data is cap-consistent.
inline CapCauchy validate_cap_cauchy(const SliceFunction& f, const Quat& J0, std::vector<Circle> discs,
                                     double start = std::numbers::pi / 2, double tol = 1e-8) {
    CapCauchy cc{f, ImaginaryUnit(J0).q(), std::move(discs), 0};
    for (auto& d : cc.discs)
        if (d.center.imag() - d.radius <= 0) fail(ErrorCode::BadInput, "discs must lie in the upper half-plane");
    auto ft = cap_boundary_data(f, cc.J0);
    Quat u1 = orthogonal_unit(cc.J0), u2 = cc.J0 * u1;
    for (double eps = start; eps > 1e-4; eps /= 2) {
        bool ok = true;
        for (auto& d : cc.discs) {
            for (int k = 0; k < 24 && ok; ++k) {
                std::complex<double> z = d.center + d.radius * std::polar(1.0, 2 * std::numbers::pi * k / 24);
                for (int dir = 0; dir < 6 && ok; ++dir) {
                    double th = dir * std::numbers::pi / 3;
                    Quat axis = std::cos(th) * u1 + std::sin(th) * u2;
                    for (double frac : {1.0, 0.5}) {
                        Quat J = std::cos(frac * eps) * cc.J0 + std::sin(frac * eps) * axis;
                        Quat q = Quat(z.real()) + z.imag() * J;
                        if (!f.domain->inside(q)) { ok = false; break; }
                        Quat a = f.eval_unchecked(q), b = ft(q);
                        if (dist(a, b) > tol * std::max(1.0, norm(a))) { ok = false; break; }
                    }
                }
            }
        }
        if (ok) {
            cc.eps = eps;
            return cc;
        }
    }
    fail(ErrorCode::CapTooSmall, "no cap-consistent cone around J0");
}

inline Quat local_cauchy(const CapCauchy& cc, const Quat& q) {
    auto c = slice_decompose(q);
    bool ok = c.real;
    if (!c.real) {
        double ang = std::acos(std::clamp(dot(c.unit.q(), cc.J0), -1.0, 1.0));
        bool in_disc = false;
        for (auto& d : cc.discs) in_disc = in_disc || std::abs(std::complex<double>(c.x, c.y) - d.center) < d.radius;
        ok = in_disc && ang < cc.eps;
    }
    if (!ok) fail(ErrorCode::ProbeOutsideValidated, "probe outside the validated cone");
    return local_cauchy(cap_boundary_data(cc.f, cc.J0), cc.contour(), q);
}

// ∫_{∂U} C(q, w) n(w) f(w) dσ over the boundary of the symmetric ball B(c, R)
inline Quat volume_cauchy(const SliceMap& f, double c, double R, const Quat& q, int n_curve = 64, int n_polar = 24,
                          int n_azimuth = 48) {
    if (dist(q, Quat(c)) >= R) fail(ErrorCode::ProbeOutsideValidated, "probe outside the ball");
    auto [px, pw] = gauss_legendre(n_curve);
    auto [tx, tw] = gauss_legendre(n_polar);
    Quat acc;
    const double pref = R / (4 * std::numbers::pi * std::numbers::pi);
    for (int a = 0; a < n_polar; ++a) {
        double ct = tx[a], st = std::sqrt(1 - ct * ct);
        for (int b = 0; b < n_azimuth; ++b) {
            double ph = 2 * std::numbers::pi * (b + 0.5) / n_azimuth;
            Quat I(0, st * std::cos(ph), st * std::sin(ph), ct);
            double wI = tw[a] * 2 * std::numbers::pi / n_azimuth;
            for (int k = 0; k < n_curve; ++k) {
                double phi = 0.5 * std::numbers::pi * (px[k] + 1);
                double wphi = 0.5 * std::numbers::pi * pw[k];
                double x = c + R * std::cos(phi), y = R * std::sin(phi);
                Quat w = Quat(x) + y * I;
                Quat n = Quat(std::cos(phi)) + std::sin(phi) * I;
                Quat Sq = (q - Quat(x)) * (q - Quat(x)) + Quat(y * y);
                Quat kern = Sq.inv() * (Quat(x) - y * I - q);
                acc += (pref * wphi * wI) * (kern * n * f(w));
            }
        }
    }
    return acc;
}

inline Quat volume_cauchy(const SliceFunction& f, double c, double R, const Quat& q) {
    if (!f.domain->symmetric) fail(ErrorCode::NotSymmetric, "volume formula needs a symmetric ball in the domain");
    return volume_cauchy([&](const Quat& w) { return f(w); }, c, R, q);
}

} // namespace slicereg
