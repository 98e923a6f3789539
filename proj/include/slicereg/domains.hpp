#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "quaternion.hpp"

namespace slicereg {

enum class Membership { Inside, OnBoundary, Outside };

struct DomainSpec {
    std::string label = "H";
    std::function<bool(const Quat&)> contains;
    // distance to the boundary or to a cut; empty when not known
    std::function<double(const Quat&)> clearance;
    bool symmetric = true;
    bool slice_domain = true;
    double boundary_tol = 1e-9;
    // bounding box in the half-plane picture: x in [xmin,xmax], 0 <= y <= ymax
    double xmin = -4, xmax = 4, ymax = 4;
    // units whose slices are scanned first
    std::vector<Quat> hint_units;
    // preset name and parameters, kept for serialization
    std::string preset = "whole";
    std::vector<double> params;

    Membership classify(const Quat& q) const {
        if (clearance) {
            double c = clearance(q);
            if (std::abs(c) <= boundary_tol) return Membership::OnBoundary;
        }
        return (!contains || contains(q)) ? Membership::Inside : Membership::Outside;
    }
    bool inside(const Quat& q) const { return classify(q) == Membership::Inside; }
    void require(const Quat& q) const {
        switch (classify(q)) {
        case Membership::Inside: return;
        case Membership::OnBoundary: fail(ErrorCode::OnBoundary, "point within tolerance of the boundary");
        case Membership::Outside: fail(ErrorCode::NotInDomain, "point outside the domain");
        }
    }
};

using DomainPtr = std::shared_ptr<const DomainSpec>;

inline DomainPtr whole_space(double box = 4.0) {
    auto d = std::make_shared<DomainSpec>();
    d->contains = [](const Quat&) { return true; };
    d->xmin = -box; d->xmax = box; d->ymax = box;
    return d;
}

inline DomainPtr ball(const Quat& c, double r) {
    if (r <= 0) fail(ErrorCode::BadInput, "ball radius must be positive");
    auto d = std::make_shared<DomainSpec>();
    d->label = "ball";
    d->preset = "ball";
    d->params = {c.w, c.x, c.y, c.z, r};
    d->contains = [c, r](const Quat& q) { return dist(q, c) < r; };
    d->clearance = [c, r](const Quat& q) { return r - dist(q, c); };
    d->symmetric = c.im_norm2() == 0;
    d->slice_domain = im_norm(c) < r;
    d->xmin = c.w - r - im_norm(c);
    d->xmax = c.w + r + im_norm(c);
    d->ymax = im_norm(c) + r;
    return d;
}

// r1^2 < |(q - x0)^2 + y0^2| < r2^2
struct CassiniRegion {
    double x0 = 0, y0 = 0, r1 = 0, r2 = 1;

    double modulus(const Quat& q) const {
        Quat s = q - Quat(x0);
        return norm(s * s + Quat(y0 * y0));
    }
    bool contains(const Quat& q) const {
        double m = modulus(q);
        return r1 * r1 < m && m < r2 * r2;
    }
};

inline DomainPtr cassini(const CassiniRegion& c) {
    if (c.r1 < 0 || c.r2 <= c.r1) fail(ErrorCode::BadInput, "need 0 <= r1 < r2");
    auto d = std::make_shared<DomainSpec>();
    d->label = "cassini";
    d->preset = "cassini";
    d->params = {c.x0, c.y0, c.r1, c.r2};
    d->contains = [c](const Quat& q) { return c.contains(q); };
    d->clearance = [c](const Quat& q) {
        double m = c.modulus(q);
        return std::min(m - c.r1 * c.r1, c.r2 * c.r2 - m);
    };
    d->symmetric = true;
    d->slice_domain = c.r2 > c.y0; // reals reach |S| >= y0^2
    double reach = std::sqrt(c.r2 * c.r2 + c.y0 * c.y0) + 1;
    d->xmin = c.x0 - reach; d->xmax = c.x0 + reach; d->ymax = reach;
    return d;
}

// Union of balls around a path sampled in one slice; ball radius scales with |im|.
inline DomainPtr gamma_tube(const std::vector<Quat>& samples, double eps) {
    if (samples.empty() || eps <= 0) fail(ErrorCode::BadInput, "tube needs samples and eps > 0");
    Quat q0 = samples.front();
    double y0 = 0;
    for (auto& s : samples) y0 = std::max(y0, im_norm(s));
    if (im_norm(q0) > 0) y0 = im_norm(q0);
    struct Seg { Quat a, b; };
    std::vector<Seg> segs;
    for (size_t k = 0; k + 1 < samples.size(); ++k) segs.push_back({samples[k], samples[k + 1]});
    if (samples.size() == 1) segs.push_back({samples[0], samples[0]});
    bool meets_real = false;
    for (auto& s : samples) meets_real = meets_real || im_norm(s) == 0;

    auto radius = [eps, y0](const Quat& p) {
        double yi = im_norm(p);
        return yi == 0 || y0 == 0 ? eps : eps * yi / y0;
    };
    auto contains = [segs, radius, eps](const Quat& q) {
        for (auto& s : segs) {
            // |q - p(u)| - r(p(u)) is convex on sign-constant pieces; golden search
            auto g = [&](double u) {
                Quat p = s.a + u * (s.b - s.a);
                return dist(q, p) - radius(p);
            };
            if (g(0) < 0 || g(1) < 0) return true;
            double lo = 0, hi = 1;
            for (int it = 0; it < 80; ++it) {
                double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                if (g(m1) < g(m2)) hi = m2; else lo = m1;
            }
            if (g(0.5 * (lo + hi)) < 0) return true;
            // real crossings carry the full eps ball
            if (dot(s.a.im(), s.b.im()) < 0) {
                double na = im_norm(s.a), nb = im_norm(s.b);
                double u = na / (na + nb);
                Quat p = s.a + u * (s.b - s.a);
                if (dist(q, Quat(p.w)) < eps) return true;
            }
        }
        return false;
    };
    auto d = std::make_shared<DomainSpec>();
    d->label = "tube";
    d->preset = "tube";
    d->params = {eps};
    for (auto& s : samples) { d->params.push_back(s.w); d->params.push_back(s.x); d->params.push_back(s.y); d->params.push_back(s.z); }
    d->contains = contains;
    d->symmetric = false;
    d->slice_domain = meets_real;
    double lo = 1e300, hi = -1e300, ym = 0;
    for (auto& s : samples) {
        lo = std::min(lo, s.w); hi = std::max(hi, s.w); ym = std::max(ym, im_norm(s));
    }
    double pad = eps * std::max(1.0, ym / std::max(y0, 1e-300));
    d->xmin = lo - pad; d->xmax = hi + pad; d->ymax = ym + pad;
    auto s0 = slice_decompose(samples.back());
    if (!s0.real) d->hint_units.push_back(s0.unit.q());
    return d;
}

inline DomainPtr intersection(const DomainPtr& a, const DomainPtr& b) {
    auto d = std::make_shared<DomainSpec>();
    d->label = a->label + "&" + b->label;
    d->preset = "intersection";
    d->contains = [a, b](const Quat& q) {
        return (!a->contains || a->contains(q)) && (!b->contains || b->contains(q));
    };
    if (a->clearance || b->clearance) {
        d->clearance = [a, b](const Quat& q) {
            double c = 1e300;
            if (a->clearance) c = std::min(c, std::abs(a->clearance(q)));
            if (b->clearance) c = std::min(c, std::abs(b->clearance(q)));
            return c;
        };
    }
    d->symmetric = a->symmetric && b->symmetric;
    d->slice_domain = a->slice_domain && b->slice_domain;
    d->xmin = std::max(a->xmin, b->xmin);
    d->xmax = std::min(a->xmax, b->xmax);
    d->ymax = std::min(a->ymax, b->ymax);
    d->hint_units = a->hint_units;
    d->hint_units.insert(d->hint_units.end(), b->hint_units.begin(), b->hint_units.end());
    return d;
}

// Removes a closed set given by a predicate (for instance a sphere of singularities).
inline DomainPtr minus(const DomainPtr& a, std::function<double(const Quat&)> distance_to_removed,
                       const std::string& label) {
    auto d = std::make_shared<DomainSpec>(*a);
    d->label = a->label + "\\" + label;
    auto in = a->contains;
    d->contains = [in, distance_to_removed](const Quat& q) {
        return (!in || in(q)) && distance_to_removed(q) > 0;
    };
    auto cl = a->clearance;
    d->clearance = [cl, distance_to_removed](const Quat& q) {
        double c = distance_to_removed(q);
        if (cl) c = std::min(c, std::abs(cl(q)));
        return c;
    };
    return d;
}

// ---------------------------------------------------------------------------
// Geodesic grid on the unit sphere of imaginary units.

struct GeodesicGrid {
    std::vector<std::array<double, 3>> v;
    std::vector<int> offs, nbr; // CSR adjacency
    double step = 0;            // typical edge angle

    Quat unit(int k) const { return Quat(0, v[k][0], v[k][1], v[k][2]); }
};

inline std::shared_ptr<const GeodesicGrid> geodesic_grid(int level) {
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<const GeodesicGrid>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(level); it != cache.end()) return it->second;

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::array<double, 3>> V = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                            {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                                            {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<int, 3>> F = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
                                         {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                         {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
                                         {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    auto normalize = [](std::array<double, 3> a) {
        double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
        return std::array<double, 3>{a[0] / n, a[1] / n, a[2] / n};
    };
    for (auto& p : V) p = normalize(p);
    for (int l = 0; l < level; ++l) {
        std::unordered_map<long long, int> mid;
        auto midpoint = [&](int a, int b) {
            long long key = (long long)std::min(a, b) * 4000000LL + std::max(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            std::array<double, 3> m{V[a][0] + V[b][0], V[a][1] + V[b][1], V[a][2] + V[b][2]};
            V.push_back(normalize(m));
            int id = (int)V.size() - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> G;
        G.reserve(F.size() * 4);
        for (auto& f : F) {
            int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
            G.push_back({f[0], a, c});
            G.push_back({f[1], b, a});
            G.push_back({f[2], c, b});
            G.push_back({a, b, c});
        }
        F.swap(G);
    }
    std::vector<std::vector<int>> adj(V.size());
    for (auto& f : F)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            adj[a].push_back(b);
        }
    auto g = std::make_shared<GeodesicGrid>();
    g->v = std::move(V);
    g->offs.push_back(0);
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        g->nbr.insert(g->nbr.end(), a.begin(), a.end());
        g->offs.push_back((int)g->nbr.size());
    }
    g->step = 1.1071487177940904 / std::pow(2.0, level);
    cache.emplace(level, g);
    return g;
}

inline int grid_level_for(double angular_step) {
    int L = 0;
    while (1.1071487177940904 / std::pow(2.0, L) > angular_step && L < 9) ++L;
    return L;
}

inline constexpr double kDefaultCapStep = 0.5 * std::numbers::pi / 180.0;

struct CapData {
    std::shared_ptr<const GeodesicGrid> grid;
    std::vector<int> label; // component per vertex, -1 outside
    int component = 0;
    bool whole_sphere = false;
};

// A connected component of (x + yS) ∩ Ω.
struct CapId {
    double x = 0, y = 0;
    int index = 0;
    Quat representative = Quat::i();
    std::shared_ptr<const CapData> data;

    Quat point(const Quat& unit) const { return Quat(x) + y * unit; }
    bool whole_sphere() const { return !data || data->whole_sphere; }

    // grid units of this cap, optionally only those whose neighbours are all members
    std::vector<Quat> members(bool interior_only = false, size_t max_count = 0) const {
        std::vector<Quat> out;
        if (whole_sphere()) {
            size_t n = max_count ? max_count : 200;
            const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (size_t k = 0; k < n; ++k) {
                double z = 1 - 2 * (k + 0.5) / n, r = std::sqrt(1 - z * z);
                out.emplace_back(0, r * std::cos(ga * k), r * std::sin(ga * k), z);
            }
            return out;
        }
        const auto& g = *data->grid;
        std::vector<int> idx;
        for (size_t k = 0; k < g.v.size(); ++k) {
            if (data->label[k] != data->component) continue;
            if (interior_only) {
                bool ok = true;
                for (int e = g.offs[k]; e < g.offs[k + 1]; ++e) ok = ok && data->label[g.nbr[e]] == data->component;
                if (!ok) continue;
            }
            idx.push_back((int)k);
        }
        if (max_count && idx.size() > max_count) {
            std::vector<int> thin;
            double stride = double(idx.size()) / max_count;
            for (size_t k = 0; k < max_count; ++k) thin.push_back(idx[size_t(k * stride)]);
            idx.swap(thin);
        }
        for (int k : idx) out.push_back(g.unit(k));
        return out;
    }

    size_t size() const {
        if (whole_sphere()) return 0;
        return (size_t)std::count(data->label.begin(), data->label.end(), data->component);
    }

    // does the unit J lie in this cap (nearest member vertex test)
    // grid component reached from J, -1 if none
    int locate(const DomainSpec& dom, const Quat& J) const;
    bool contains_unit(const DomainSpec& dom, const Quat& J) const {
        if (!dom.inside(point(J))) return false;
        if (whole_sphere()) return true;
        return locate(dom, J) == data->component;
    }
};

inline bool operator==(const CapId& a, const CapId& b) {
    return a.x == b.x && a.y == b.y && a.index == b.index;
}

// Serializable reference to a cap or to the real axis.
struct CapRef {
    double x = 0, y = 0;
    int index = 0;
    bool whole_sphere = true;
    bool real_axis = false;
};

inline CapRef ref(const CapId& c) { return {c.x, c.y, c.index, c.whole_sphere(), false}; }
inline CapRef real_axis_ref(double x) { return {x, 0, 0, false, true}; }

// Flood fill of the sphere through p on a geodesic grid.
// Two units on the sphere of x + yS are joined through the domain when
// clearance balls cover the connecting arc; the factor 2 guards against
// clearances that are only estimates.
inline bool sphere_arc_connected(const DomainSpec& dom, double x, double y, const Quat& Ja, const Quat& Jb,
                                 int depth = 8) {
    auto pt = [&](const Quat& J) { return Quat(x) + y * J; };
    if (!dom.clearance) return dom.inside(pt(Ja)) && dom.inside(pt(Jb));
    double ca = std::abs(dom.clearance(pt(Ja))), cb = std::abs(dom.clearance(pt(Jb)));
    if (ca <= dom.boundary_tol || cb <= dom.boundary_tol) return false;
    if (ca + cb > 2 * y * dist(Ja, Jb)) return true;
    if (depth == 0) return false;
    Quat m = Ja + Jb;
    if (norm(m) < 1e-12) return false;
    m = m / norm(m);
    if (!dom.inside(pt(m))) return false;
    return sphere_arc_connected(dom, x, y, Ja, m, depth - 1) && sphere_arc_connected(dom, x, y, m, Jb, depth - 1);
}

// Straight segment from a to b inside the domain, by the same covering test.
inline bool segment_connected(const DomainSpec& dom, const Quat& a, const Quat& b, int depth = 8) {
    if (!dom.clearance) return dom.inside(a) && dom.inside(b);
    double ca = std::abs(dom.clearance(a)), cb = std::abs(dom.clearance(b));
    if (ca <= dom.boundary_tol || cb <= dom.boundary_tol) return false;
    if (!dom.inside(a) || !dom.inside(b)) return false;
    if (ca + cb > 2 * dist(a, b)) return true;
    if (depth == 0) return false;
    Quat m = 0.5 * (a + b);
    return segment_connected(dom, a, m, depth - 1) && segment_connected(dom, m, b, depth - 1);
}

inline CapId cap_component(const DomainSpec& dom, const Quat& p, double angular_step = kDefaultCapStep) {
    auto s = slice_decompose(p);
    if (s.real) fail(ErrorCode::OnRealAxis, "caps are defined for non-real points");
    dom.require(p);
    CapId cap;
    cap.x = s.x;
    cap.y = s.y;
    cap.representative = s.unit.q();
    auto data = std::make_shared<CapData>();
    if (dom.symmetric) {
        data->whole_sphere = true;
        cap.data = data;
        return cap;
    }
    data->grid = geodesic_grid(grid_level_for(angular_step));
    const auto& g = *data->grid;
    size_t n = g.v.size();
    std::vector<char> in(n);
    for (size_t k = 0; k < n; ++k) in[k] = dom.inside(cap.point(g.unit((int)k)));
    data->label.assign(n, -1);
    int comps = 0;
    for (size_t k = 0; k < n; ++k) {
        if (!in[k] || data->label[k] >= 0) continue;
        std::queue<int> qu;
        qu.push((int)k);
        data->label[k] = comps;
        while (!qu.empty()) {
            int a = qu.front();
            qu.pop();
            for (int e = g.offs[a]; e < g.offs[a + 1]; ++e) {
                int b = g.nbr[e];
                if (in[b] && data->label[b] < 0 &&
                    sphere_arc_connected(dom, cap.x, cap.y, g.unit(a), g.unit(b))) {
                    data->label[b] = comps;
                    qu.push(b);
                }
            }
        }
        ++comps;
    }
    if (comps == 0) fail(ErrorCode::CapTooSmall, "no grid vertex of the sphere lies in the domain");
    if (comps == 1 && std::all_of(in.begin(), in.end(), [](char c) { return c; })) data->whole_sphere = true;
    cap.data = data;
    int comp = cap.locate(dom, cap.representative);
    if (comp < 0) fail(ErrorCode::CapTooSmall, "cap of p is finer than the grid step");
    data->component = comp;
    cap.index = comp;
    return cap;
}

inline int CapId::locate(const DomainSpec& dom, const Quat& J) const {
    const auto& g = *data->grid;
    double cmin = std::cos(3 * g.step);
    int bi = -1;
    double best = -2;
    for (size_t k = 0; k < g.v.size(); ++k) {
        if (data->label[k] < 0) continue;
        double c = g.v[k][0] * J.x + g.v[k][1] * J.y + g.v[k][2] * J.z;
        if (c > cmin && c > best && sphere_arc_connected(dom, x, y, J, g.unit((int)k), 12)) { best = c; bi = (int)k; }
    }
    return bi < 0 ? -1 : data->label[bi];
}

// The cap of x + yJ on a grid already filled for the same sphere.
inline std::optional<CapId> relocate(const DomainSpec& dom, const CapId& c, const Quat& J) {
    if (c.whole_sphere()) {
        CapId r = c;
        r.representative = J;
        return r;
    }
    int comp = c.locate(dom, J);
    if (comp < 0) return std::nullopt;
    CapId r = c;
    auto d = std::make_shared<CapData>(*c.data);
    d->component = comp;
    r.data = d;
    r.index = comp;
    r.representative = J;
    return r;
}

struct SigmaTauOmega {
    double sigma, tau, omega;
};

inline SigmaTauOmega sigma_tau_omega(const Quat& q, const Quat& p) {
    double dre = q.w - p.w;
    double nq = im_norm(q), np = im_norm(p);
    double omega = std::hypot(dre, nq + np);
    // coplanar with the real axis when the imaginary parts are parallel
    Quat a = q.im(), b = p.im();
    Quat cr = a * b - Quat(-dot(a, b));
    bool same_slice = norm(cr) <= 1e-14 * std::max(1.0, nq * np);
    if (same_slice) {
        double d = dist(q, p);
        return {d, d, omega};
    }
    return {omega, std::hypot(dre, nq - np), omega};
}

inline bool cassini_contains(const CassiniRegion& r, const Quat& q) { return r.contains(q); }

// Great-circle path from I to J sampled at the given step stays in the domain.
inline bool sphere_path_inside(const DomainSpec& dom, double x, double y, const Quat& I, const Quat& J,
                               double step = kDefaultCapStep) {
    double c = std::clamp(dot(I, J), -1.0, 1.0);
    double ang = std::acos(c);
    int n = std::max(2, (int)std::ceil(ang / step));
    Quat perp = J - c * I;
    double pn = norm(perp);
    if (pn < 1e-15) perp = orthogonal_unit(I); else perp = perp / pn;
    Quat prev = I;
    for (int k = 1; k <= n; ++k) {
        double a = ang * k / n;
        Quat u = std::cos(a) * I + std::sin(a) * perp;
        if (!sphere_arc_connected(dom, x, y, prev, u, 6)) return false;
        prev = u;
    }
    return true;
}

} // namespace slicereg
