#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "douren.hpp"
#include "integral.hpp"
#include "series.hpp"

namespace slicereg {

using json = nlohmann::json;

// infinite radii travel as the string "inf"
inline json num_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}
inline double num_from_json(const json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        fail(ErrorCode::BadInput, "bad number: " + s);
    }
    return j.get<double>();
}

inline void to_json(json& j, const Quat& q) { j = json::array({q.w, q.x, q.y, q.z}); }
inline void from_json(const json& j, Quat& q) {
    if (j.is_number()) { q = Quat(j.get<double>()); return; }
    if (!j.is_array() || j.size() != 4) fail(ErrorCode::BadInput, "quaternion must be [w,x,y,z]");
    q = Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

inline void to_json(json& j, const QPolyD& p) { j = json{{"coeffs", p.c}}; }
inline void from_json(const json& j, QPolyD& p) {
    const json& c = j.is_object() ? j.at("coeffs") : j;
    p = QPolyD(c.get<std::vector<Quat>>());
}

inline void to_json(json& j, const CapRef& c) {
    j = json{{"x", c.x}, {"y", c.y}, {"index", c.index}, {"whole_sphere", c.whole_sphere}, {"real_axis", c.real_axis}};
}
inline void from_json(const json& j, CapRef& c) {
    c.x = j.at("x");
    c.y = j.at("y");
    c.index = j.at("index");
    c.whole_sphere = j.at("whole_sphere");
    c.real_axis = j.at("real_axis");
}

inline Provenance provenance_from(const std::string& s) {
    if (s == "exact") return Provenance::Exact;
    if (s == "polished") return Provenance::Polished;
    if (s == "scanned") return Provenance::Scanned;
    fail(ErrorCode::BadInput, "unknown provenance " + s);
}

inline void to_json(json& j, const IsolatedZero& z) {
    j = json{{"point", z.point},         {"cap", z.cap},
             {"classical", z.classical}, {"isolated", z.isolated},
             {"provenance", to_string(z.provenance)}, {"near_threshold", z.near_threshold}};
}
inline void from_json(const json& j, IsolatedZero& z) {
    z.point = j.at("point");
    z.cap = j.at("cap");
    z.classical = j.at("classical");
    z.isolated = j.at("isolated");
    z.provenance = provenance_from(j.at("provenance"));
    z.near_threshold = j.at("near_threshold");
}
inline void to_json(json& j, const SphericalZero& z) {
    j = json{{"x", z.x}, {"y", z.y}, {"cap", z.cap}, {"multiplicity", z.multiplicity},
             {"provenance", to_string(z.provenance)}, {"near_threshold", z.near_threshold}};
}
inline void from_json(const json& j, SphericalZero& z) {
    z.x = j.at("x");
    z.y = j.at("y");
    z.cap = j.at("cap");
    z.multiplicity = j.at("multiplicity");
    z.provenance = provenance_from(j.at("provenance"));
    z.near_threshold = j.at("near_threshold");
}
inline void to_json(json& j, const GhostDivisor& g) { j = json{{"point", g.point}, {"cap", g.cap}}; }
inline void from_json(const json& j, GhostDivisor& g) {
    g.point = j.at("point");
    g.cap = j.at("cap");
}
inline void to_json(json& j, const ZeroReport& r) {
    j = json{{"isolated", r.isolated}, {"spherical", r.spherical}, {"ghosts", r.ghosts}};
}
inline void from_json(const json& j, ZeroReport& r) {
    r.isolated = j.at("isolated").get<std::vector<IsolatedZero>>();
    r.spherical = j.at("spherical").get<std::vector<SphericalZero>>();
    r.ghosts = j.at("ghosts").get<std::vector<GhostDivisor>>();
}

inline void to_json(json& j, const Multiplicities& m) {
    j = json{{"classical", m.classical}, {"spherical", m.spherical}, {"isolated", m.isolated}, {"chain", m.chain}};
}
inline void from_json(const json& j, Multiplicities& m) {
    m.classical = j.at("classical");
    m.spherical = j.at("spherical");
    m.isolated = j.at("isolated");
    m.chain = j.at("chain").get<std::vector<Quat>>();
}

inline void to_json(json& j, const NormalForm<double>& n) {
    j = json{{"m", n.m}, {"chain", n.chain}, {"rest", n.rest}};
}
inline void from_json(const json& j, NormalForm<double>& n) {
    n.m = j.at("m");
    n.chain = j.at("chain").get<std::vector<Quat>>();
    n.rest = j.at("rest").get<QPolyD>();
}

inline void to_json(json& j, const LaurentSeries& L) {
    j = json{{"center", L.center},
             {"window", {L.nmin, L.nmax()}},
             {"coeffs", L.coeffs},
             {"R1", num_to_json(L.R1)},
             {"R2", num_to_json(L.R2)},
             {"essential", L.essential},
             {"pole_order", L.pole_order},
             {"contour_radius", L.contour_radius}};
}
inline void from_json(const json& j, LaurentSeries& L) {
    L.center = j.at("center");
    L.nmin = j.at("window").at(0);
    L.coeffs = j.at("coeffs").get<std::vector<Quat>>();
    if ((int)L.coeffs.size() != j.at("window").at(1).get<int>() - L.nmin + 1)
        fail(ErrorCode::BadInput, "window does not match the coefficient count");
    L.R1 = num_from_json(j.at("R1"));
    L.R2 = num_from_json(j.at("R2"));
    L.essential = j.value("essential", false);
    L.pole_order = j.value("pole_order", 0);
    L.contour_radius = j.value("contour_radius", 0.0);
}

inline void to_json(json& j, const CassiniRegion& c) {
    j = json{{"x0", c.x0}, {"y0", c.y0}, {"r1", num_to_json(c.r1)}, {"r2", num_to_json(c.r2)}};
}
inline void from_json(const json& j, CassiniRegion& c) {
    c.x0 = j.at("x0");
    c.y0 = j.at("y0");
    c.r1 = num_from_json(j.at("r1"));
    c.r2 = num_from_json(j.at("r2"));
}

inline void to_json(json& j, const SphericalSeries& s) {
    j = json{{"x0", s.x0}, {"y0", s.y0}, {"kmin", s.kmin}, {"coeffs", s.coeffs}, {"cap", s.cap}, {"cassini", s.cassini}};
}
inline void from_json(const json& j, SphericalSeries& s) {
    s.x0 = j.at("x0");
    s.y0 = j.at("y0");
    s.kmin = j.at("kmin");
    s.coeffs = j.at("coeffs").get<std::vector<Quat>>();
    s.cap = j.at("cap");
    s.cassini = j.at("cassini");
}

inline void to_json(json& j, const SingularityReport& r) {
    j = json{{"kind", to_string(r.kind)},   {"order", r.order},       {"spherical_order", r.spherical_order},
             {"cap_order", r.cap_order}, {"isolated", r.isolated}, {"cap", r.cap}};
}
inline void from_json(const json& j, SingularityReport& r) {
    auto k = j.at("kind").get<std::string>();
    if (k == "removable") r.kind = SingularityKind::Removable;
    else if (k == "pole") r.kind = SingularityKind::Pole;
    else if (k == "essential") r.kind = SingularityKind::Essential;
    else fail(ErrorCode::BadInput, "unknown singularity kind " + k);
    r.order = j.at("order");
    r.spherical_order = j.at("spherical_order");
    r.cap_order = j.at("cap_order");
    r.isolated = j.at("isolated");
    r.cap = j.at("cap");
}

inline void to_json(json& j, const SphericalData& d) { j = json{{"value", d.value}, {"derivative", d.derivative}}; }
inline void from_json(const json& j, SphericalData& d) {
    d.value = j.at("value");
    d.derivative = j.at("derivative");
}

// ---------------------------------------------------------------------------
// domains and function specs

inline DomainPtr domain_from_json(const json& j) {
    if (j.is_null()) return whole_space();
    auto preset = j.value("preset", std::string("whole"));
    auto p = j.value("params", std::vector<double>{});
    auto need = [&](size_t n) {
        if (p.size() < n) fail(ErrorCode::BadInput, "domain " + preset + " needs " + std::to_string(n) + " params");
    };
    if (preset == "whole") return whole_space(p.empty() ? 4.0 : p[0]);
    if (preset == "ball") {
        need(5);
        return ball(Quat(p[0], p[1], p[2], p[3]), p[4]);
    }
    if (preset == "cassini") {
        need(4);
        return cassini({p[0], p[1], p[2], p[3]});
    }
    if (preset == "tube") {
        need(5);
        std::vector<Quat> s;
        for (size_t k = 1; k + 3 < p.size(); k += 4) s.emplace_back(p[k], p[k + 1], p[k + 2], p[k + 3]);
        return gamma_tube(s, p[0]);
    }
    if (preset == "douren") {
        DourenConfig cfg;
        if (p.size() >= 3) cfg.I = ImaginaryUnit(Quat(0, p[0], p[1], p[2])).q();
        return douren_domain(cfg);
    }
    fail(ErrorCode::BadInput, "domain preset " + preset + " cannot be rebuilt from JSON");
}

inline json domain_to_json(const DomainSpec& d) {
    return json{{"preset", d.preset}, {"params", d.params}, {"label", d.label}, {"symmetric", d.symmetric}};
}

inline SliceFunction from_laurent(const LaurentSeries& L) {
    auto d = std::make_shared<DomainSpec>();
    d->label = "laurent";
    d->preset = "laurent";
    d->symmetric = false;
    d->contains = [L](const Quat& q) {
        auto st = sigma_tau_omega(q, L.center);
        return st.sigma < L.R2 && st.tau > L.R1;
    };
    SliceFunction f;
    f.domain = d;
    f.backing = Backing::Series;
    f.name = "series";
    f.raw = [L](const Quat& q) { return eval_series(L, q); };
    return f;
}

inline DourenConfig douren_config_from(const json& j) {
    DourenConfig cfg;
    if (j.contains("I")) cfg.I = ImaginaryUnit(j.at("I").get<Quat>()).q();
    if (j.contains("tol")) cfg.tol = j.at("tol");
    return cfg;
}

inline SliceFunction function_from_json(const json& j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "poly") {
        auto p = j.get<QPolyD>();
        return from_poly(p, domain_from_json(j.value("domain", json())));
    }
    if (kind == "rational") {
        QRational r;
        r.num = j.at("num").get<QPolyD>();
        auto den = j.at("den");
        r.den = RealPoly<double>((den.is_object() ? den.at("coeffs") : den).get<std::vector<double>>());
        return from_rational(r);
    }
    if (kind == "series") return from_laurent(j.at("series").get<LaurentSeries>());
    if (kind == "essential") return essential_fixture();
    if (kind == "douren") {
        auto cfg = douren_config_from(j);
        auto which = j.value("fixture", std::string("f"));
        if (which == "f") return douren_f(cfg);
        std::optional<Quat> I0;
        if (j.contains("I0")) I0 = j.at("I0").get<Quat>();
        auto fx = douren_fixtures(cfg, I0);
        if (which == "D") return fx.D;
        if (which == "g") {
            if (j.contains("J")) return douren_g(cfg, fx.f, ImaginaryUnit(j.at("J").get<Quat>()).q());
            return fx.g;
        }
        if (which == "ell") return fx.ell;
        if (which == "m") return fx.m;
        if (which == "h") return fx.h;
        fail(ErrorCode::BadInput, "unknown douren fixture " + which);
    }
    fail(ErrorCode::BadInput, "unknown function kind " + kind);
}

} // namespace slicereg
