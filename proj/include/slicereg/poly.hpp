#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gmpxx.h>

#include "quaternion.hpp"

namespace slicereg {

template <class T>
inline bool is_zero_scalar(const T& v) { return v == 0; }

// Real polynomial, ascending coefficients.
template <class T>
struct RealPoly {
    std::vector<T> c;

    RealPoly() = default;
    explicit RealPoly(std::vector<T> v) : c(std::move(v)) { trim(); }

    void trim() { while (!c.empty() && is_zero_scalar(c.back())) c.pop_back(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const T& lead() const { return c.back(); }

    template <class S>
    S eval(const S& z) const {
        S r = S(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + S(*it);
        return r;
    }

    RealPoly derivative() const {
        std::vector<T> d;
        for (size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * T(static_cast<long>(k)));
        return RealPoly(d);
    }

    friend RealPoly operator*(const RealPoly& a, const RealPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return RealPoly(r);
    }
    friend RealPoly operator+(const RealPoly& a, const RealPoly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return RealPoly(r);
    }
    friend RealPoly operator-(const RealPoly& a, const RealPoly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return RealPoly(r);
    }

    // long division, returns {quotient, remainder}
    std::pair<RealPoly, RealPoly> divmod(const RealPoly& d) const {
        if (d.is_zero()) fail(ErrorCode::ZeroDivision, "division by zero polynomial");
        std::vector<T> r = c;
        int n = degree(), m = d.degree();
        if (n < m) return {RealPoly{}, *this};
        std::vector<T> q(n - m + 1, T(0));
        for (int k = n - m; k >= 0; --k) {
            T coef = r[k + m] / d.lead();
            q[k] = coef;
            for (int j = 0; j <= m; ++j) r[k + j] -= coef * d.c[j];
            r[k + m] = T(0);
        }
        r.resize(m);
        return {RealPoly(q), RealPoly(r)};
    }

    RealPoly monic() const {
        RealPoly r = *this;
        if (r.is_zero()) return r;
        T l = r.lead();
        for (auto& v : r.c) v /= l;
        return r;
    }

    friend bool operator==(const RealPoly& a, const RealPoly& b) { return a.c == b.c; }
};

using RealPolyQ = RealPoly<mpq_class>;

inline RealPolyQ gcd(RealPolyQ a, RealPolyQ b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Yun: returns factors f_1, f_2, ... with p = lc * prod f_k^k, each squarefree
inline std::vector<RealPolyQ> squarefree_decomposition(const RealPolyQ& p) {
    std::vector<RealPolyQ> out;
    if (p.degree() < 1) return out;
    RealPolyQ dp = p.derivative();
    RealPolyQ a = gcd(p, dp);
    RealPolyQ b = p.divmod(a).first;
    RealPolyQ c = dp.divmod(a).first;
    RealPolyQ d = c - b.derivative();
    while (b.degree() >= 1) {
        RealPolyQ g = gcd(b, d);
        out.push_back(g);
        b = b.divmod(g).first;
        c = d.divmod(g).first;
        d = c - b.derivative();
    }
    return out;
}

inline RealPolyQ to_exact(const RealPoly<double>& p) {
    std::vector<mpq_class> v;
    for (double d : p.c) v.emplace_back(d);
    return RealPolyQ(v);
}

inline RealPoly<double> to_double(const RealPolyQ& p) {
    std::vector<double> v;
    for (auto& q : p.c) v.push_back(q.get_d());
    return RealPoly<double>(v);
}

// Roots of a real polynomial: balanced companion matrix, then Newton polish.
inline std::vector<std::complex<double>> real_roots(const RealPoly<double>& p) {
    std::vector<std::complex<double>> roots;
    int n = p.degree();
    if (n < 1) return roots;
    if (n == 1) {
        roots.emplace_back(-p.c[0] / p.c[1], 0.0);
        return roots;
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -p.c[i] / p.lead();
    // Parlett-Reinsch balancing with powers of two
    for (bool done = false; !done;) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0, cl = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) { r += std::abs(C(i, j)); cl += std::abs(C(j, i)); }
            if (r == 0 || cl == 0) continue;
            double f = 1, s = r + cl;
            while (cl < r / 2) { cl *= 4; r /= 4; f *= 2; }
            while (cl >= r * 2) { cl /= 4; r *= 4; f /= 2; }
            if ((cl + r) / f < 0.95 * s) {
                done = false;
                C.row(i) /= f;
                C.col(i) *= f;
            }
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    auto dp = p.derivative();
    for (int k = 0; k < n; ++k) {
        std::complex<double> z = es.eigenvalues()[k];
        for (int it = 0; it < 2; ++it) {
            auto fz = p.eval(z);
            auto dz = dp.eval(z);
            if (std::abs(dz) == 0) break;
            auto nz = z - fz / dz;
            if (std::abs(p.eval(nz)) <= std::abs(fz)) z = nz;
        }
        roots.push_back(z);
    }
    return roots;
}

// Polynomial with right quaternion coefficients: f(q) = sum q^n a_n.
template <class T>
struct QPoly {
    using Q = Quaternion<T>;
    std::vector<Q> c;

    QPoly() = default;
    explicit QPoly(std::vector<Q> v) : c(std::move(v)) { trim(); }
    static QPoly constant(const Q& a) { return QPoly(std::vector<Q>{a}); }
    // q - p
    static QPoly linear(const Q& p) { return QPoly(std::vector<Q>{-p, Q(T(1))}); }
    static QPoly from_real(const RealPoly<T>& r) {
        std::vector<Q> v;
        for (auto& a : r.c) v.emplace_back(a);
        return QPoly(v);
    }

    void trim() { while (!c.empty() && c.back().is_zero()) c.pop_back(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    Q eval(const Q& q) const {
        Q r;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = q * r + *it;
        return r;
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Q> r(std::max(a.c.size(), b.c.size()));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return QPoly(r);
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        std::vector<Q> r(std::max(a.c.size(), b.c.size()));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return QPoly(r);
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

    // regular (star) product: coefficient convolution
    friend QPoly star(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Q> r(a.c.size() + b.c.size() - 1);
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return QPoly(r);
    }

    QPoly conj() const {
        std::vector<Q> r;
        for (auto& a : c) r.push_back(a.conj());
        return QPoly(r);
    }

    // f * f^c; the imaginary parts cancel pairwise so only real parts are summed
    RealPoly<T> sym() const {
        if (is_zero()) return {};
        std::vector<T> r(2 * c.size() - 1, T(0));
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < c.size(); ++j) {
                const Q& a = c[i];
                const Q& b = c[j];
                r[i + j] += a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
            }
        return RealPoly<T>(r);
    }

    QPoly times_real(const RealPoly<T>& d) const { return star(*this, from_real(d)); }

    // division by a real polynomial, {quotient, remainder}
    std::pair<QPoly, QPoly> divmod(const RealPoly<T>& d) const {
        if (d.is_zero()) fail(ErrorCode::ZeroDivision, "division by zero polynomial");
        std::vector<Q> r = c;
        int n = degree(), m = d.degree();
        if (n < m) return {QPoly{}, *this};
        std::vector<Q> q(n - m + 1);
        for (int k = n - m; k >= 0; --k) {
            Q coef = r[k + m] / d.lead();
            q[k] = coef;
            for (int j = 0; j <= m; ++j) r[k + j] -= coef * d.c[j];
            r[k + m] = Q();
        }
        r.resize(m);
        return {QPoly(q), QPoly(r)};
    }

    // g with f = (q - p) * g; the remainder f(p)-type term is returned too
    std::pair<QPoly, Q> left_divide_linear(const Q& p) const {
        if (is_zero()) return {QPoly{}, Q()};
        int n = degree();
        if (n == 0) return {QPoly{}, c[0]};
        std::vector<Q> g(n);
        g[n - 1] = c[n];
        for (int k = n - 1; k >= 1; --k) g[k - 1] = c[k] + p * g[k];
        Q rem = c[0] + p * g[0];
        return {QPoly(g), rem};
    }

    // g with f = g * (q - p)
    std::pair<QPoly, Q> right_divide_linear(const Q& p) const {
        if (is_zero()) return {QPoly{}, Q()};
        int n = degree();
        if (n == 0) return {QPoly{}, c[0]};
        std::vector<Q> g(n);
        g[n - 1] = c[n];
        for (int k = n - 1; k >= 1; --k) g[k - 1] = c[k] + g[k] * p;
        Q rem = c[0] + g[0] * p;
        return {QPoly(g), rem};
    }
};

using QPolyD = QPoly<double>;
using QPolyQ = QPoly<mpq_class>;
using QuatQ = Quaternion<mpq_class>;

inline QuatQ to_exact(const Quat& q) { return {mpq_class(q.w), mpq_class(q.x), mpq_class(q.y), mpq_class(q.z)}; }
inline Quat to_double(const QuatQ& q) { return {q.w.get_d(), q.x.get_d(), q.y.get_d(), q.z.get_d()}; }

inline QPolyQ to_exact(const QPolyD& p) {
    std::vector<QuatQ> v;
    for (auto& a : p.c) v.push_back(to_exact(a));
    return QPolyQ(v);
}
inline QPolyD to_double(const QPolyQ& p) {
    std::vector<Quat> v;
    for (auto& a : p.c) v.push_back(to_double(a));
    return QPolyD(v);
}

// (q - x)^2 + y^2 as a real polynomial; y2 is y squared
template <class T>
RealPoly<T> sphere_poly(const T& x, const T& y2) {
    return RealPoly<T>(std::vector<T>{T(x * x + y2), T(-2 * x), T(1)});
}

// (x + y i)^n = alpha_n + i beta_n for n = 0..N
template <class T>
std::vector<std::pair<T, T>> slice_powers(const T& x, const T& y, int N) {
    std::vector<std::pair<T, T>> out;
    T a(1), b(0);
    for (int n = 0; n <= N; ++n) {
        out.emplace_back(a, b);
        T na = a * x - b * y;
        T nb = a * y + b * x;
        a = na;
        b = nb;
    }
    return out;
}

} // namespace slicereg

namespace slicereg {

// num / den with a real denominator: value den(q)^{-1} num(q)
struct QRational {
    QPolyD num;
    RealPoly<double> den{std::vector<double>{1.0}};

    Quat eval(const Quat& q) const {
        Quat d = den.eval(q);
        if (norm(d) <= 1e-300) fail(ErrorCode::SingularDenominator, "denominator vanishes");
        return d.inv() * num.eval(q);
    }

    // strip real factors shared by numerator and denominator (exact gcd over Q)
    QRational reduced() const {
        RealPolyQ g = to_exact(den);
        auto comp = [&](int which) {
            std::vector<double> v;
            for (auto& a : num.c) v.push_back(which == 0 ? a.w : which == 1 ? a.x : which == 2 ? a.y : a.z);
            return to_exact(RealPoly<double>(v));
        };
        for (int k = 0; k < 4 && g.degree() > 0; ++k) {
            auto c = comp(k);
            if (!c.is_zero()) g = gcd(g, c);
        }
        if (g.degree() < 1) return *this;
        auto gd = to_double(g);
        return {num.divmod(gd).first, den.divmod(gd).first};
    }
};

} // namespace slicereg
