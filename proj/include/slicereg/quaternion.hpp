#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <random>

#include "errors.hpp"

namespace slicereg {

// Real quaternion w + x i + y j + z k. T is double for numerics and
// mpq_class for the exact polynomial paths.
template <class T>
struct Quaternion {
    T w{}, x{}, y{}, z{};

    Quaternion() = default;
    Quaternion(T w_) : w(w_), x(0), y(0), z(0) {}
    Quaternion(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quaternion i() { return {T(0), T(1), T(0), T(0)}; }
    static Quaternion j() { return {T(0), T(0), T(1), T(0)}; }
    static Quaternion k() { return {T(0), T(0), T(0), T(1)}; }

    Quaternion conj() const { return {w, -x, -y, -z}; }
    T re() const { return w; }
    Quaternion im() const { return {T(0), x, y, z}; }
    T norm2() const { return w * w + x * x + y * y + z * z; }
    T im_norm2() const { return x * x + y * y + z * z; }

    Quaternion& operator+=(const Quaternion& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }
    Quaternion& operator-=(const Quaternion& o) { w -= o.w; x -= o.x; y -= o.y; z -= o.z; return *this; }
    Quaternion& operator*=(const Quaternion& o) { *this = *this * o; return *this; }
    Quaternion& operator*=(const T& s) { w *= s; x *= s; y *= s; z *= s; return *this; }
    Quaternion& operator/=(const T& s) { w /= s; x /= s; y /= s; z /= s; return *this; }

    friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
    friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
    friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {T(a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z),
                T(a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y),
                T(a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x),
                T(a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w)};
    }
    friend Quaternion operator*(Quaternion a, const T& s) { return a *= s; }
    friend Quaternion operator*(const T& s, Quaternion a) { return a *= s; }
    friend Quaternion operator/(Quaternion a, const T& s) { return a /= s; }
    friend bool operator==(const Quaternion& a, const Quaternion& b) {
        return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
    }
    friend bool operator!=(const Quaternion& a, const Quaternion& b) { return !(a == b); }

    bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }

    Quaternion inv() const {
        T n = norm2();
        if (n == 0) fail(ErrorCode::ZeroDivision, "inverse of zero quaternion");
        return conj() / n;
    }
};

using Quat = Quaternion<double>;

inline double norm(const Quat& q) { return std::sqrt(q.norm2()); }
inline double im_norm(const Quat& q) { return std::sqrt(q.im_norm2()); }
inline Quat operator/(const Quat& a, const Quat& b) { return a * b.inv(); }

inline double dist(const Quat& a, const Quat& b) { return norm(a - b); }

// Euclidean inner product on R^4
inline double dot(const Quat& a, const Quat& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

inline std::ostream& operator<<(std::ostream& os, const Quat& q) {
    return os << "[" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << "]";
}

// Imaginary unit: purely imaginary, norm one.
class ImaginaryUnit {
public:
    ImaginaryUnit() : v_(Quat::i()) {}
    explicit ImaginaryUnit(const Quat& q, double tol = 1e-12) {
        if (std::abs(q.w) > tol || std::abs(norm(q) - 1.0) > tol)
            fail(ErrorCode::NotUnit, "not an imaginary unit");
        v_ = q.im() / im_norm(q);
    }
    static ImaginaryUnit normalize(const Quat& q) {
        double n = im_norm(q);
        if (n == 0) fail(ErrorCode::NotUnit, "zero imaginary part");
        ImaginaryUnit u;
        u.v_ = q.im() / n;
        return u;
    }
    const Quat& q() const { return v_; }
    operator const Quat&() const { return v_; }
    ImaginaryUnit operator-() const { ImaginaryUnit u; u.v_ = -v_; return u; }

private:
    Quat v_;
};

inline Quat operator*(const ImaginaryUnit& a, const Quat& b) { return a.q() * b; }
inline Quat operator*(const Quat& a, const ImaginaryUnit& b) { return a * b.q(); }

// q = x + y I with y >= 0. On the real axis unit is unset.
struct SliceCoords {
    double x = 0, y = 0;
    bool real = true;
    ImaginaryUnit unit;

    Quat point() const { return Quat(x) + y * unit.q(); }
};

// real-axis threshold relative to |q|
inline constexpr double kRealAxisTol = 1e-14;

inline SliceCoords slice_decompose(const Quat& q) {
    SliceCoords s;
    s.x = q.w;
    double n = im_norm(q);
    if (n <= kRealAxisTol * std::max(1.0, norm(q))) {
        s.y = 0;
        s.real = true;
        return s;
    }
    s.y = n;
    s.real = false;
    s.unit = ImaginaryUnit::normalize(q);
    return s;
}

inline bool same_sphere(const Quat& p, const Quat& q, double tol = 1e-12) {
    return std::abs(p.w - q.w) <= tol && std::abs(im_norm(p) - im_norm(q)) <= tol;
}

// complex number a + b i placed into L_I
inline Quat embed(std::complex<double> c, const Quat& I) { return Quat(c.real()) + c.imag() * I; }

// coordinates of q in L_I; the component orthogonal to L_I is dropped
inline std::complex<double> project(const Quat& q, const Quat& I) { return {q.w, dot(q.im(), I)}; }

// Any unit orthogonal to I.
inline Quat orthogonal_unit(const Quat& I) {
    Quat t = std::abs(I.x) < 0.9 ? Quat::i() : Quat::j();
    Quat u = t - dot(t, I) * I;
    return u / norm(u);
}

template <class Rng>
Quat random_unit(Rng& rng) {
    std::normal_distribution<double> n(0, 1);
    for (;;) {
        Quat q(0, n(rng), n(rng), n(rng));
        double r = norm(q);
        if (r > 1e-6) return q / r;
    }
}

template <class Rng>
Quat random_quat(Rng& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return Quat(u(rng), u(rng), u(rng), u(rng));
}

// exp on quaternions, used by the essential-singularity fixture
inline Quat exp(const Quat& q) {
    double v = im_norm(q);
    double e = std::exp(q.w);
    if (v == 0) return Quat(e);
    return Quat(e * std::cos(v)) + (e * std::sin(v) / v) * q.im();
}

} // namespace slicereg
