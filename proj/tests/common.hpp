#pragma once

#include <gtest/gtest.h>

#include <random>

#include "slicereg/json_io.hpp"

namespace sr = slicereg;
using sr::Quat;

inline const Quat I_ = Quat::i(), J_ = Quat::j(), K_ = Quat::k();

#define EXPECT_QNEAR(a, b, tol) EXPECT_LE(sr::dist((a), (b)), (tol)) << "got " << (a) << " want " << (b)

#define EXPECT_ERR(expr, want_code)                                                                                 \
    do {                                                                                                       \
        try {                                                                                                  \
            (void)(expr);                                                                                      \
            ADD_FAILURE() << "no error from " #expr;                                                           \
        } catch (const sr::Error& e) {                                                                         \
            EXPECT_EQ(e.code(), want_code) << e.what();                                                             \
        }                                                                                                      \
    } while (0)

inline sr::QPolyD P(std::vector<Quat> c) { return sr::QPolyD(std::move(c)); }

// plain Horner with right coefficients, independent of QPoly::eval
inline Quat horner(const std::vector<Quat>& a, const Quat& q) {
    Quat r;
    for (auto it = a.rbegin(); it != a.rend(); ++it) r = q * r + *it;
    return r;
}
