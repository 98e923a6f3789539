// Walk through the main operations on a few small fixtures.
#include <iostream>

#include "slicereg/json_io.hpp"

using namespace slicereg;

int main() {
    const Quat i = Quat::i(), j = Quat::j();

    // (q - i) * (q - j) = q^2 - q(i + j) + k vanishes only at i
    auto f = star(QPolyD::linear(i), QPolyD::linear(j));
    std::cout << "f = " << json(f).dump() << "\n";
    std::cout << "f(j) = " << f.eval(j) << "\n";
    std::cout << "zeros: " << json(poly_zeros(f)).dump(2) << "\n";

    // pointwise algebra on a non-polynomial function
    auto d = douren_f();
    Quat p = Quat(-1) + 2.0 * i;
    std::cout << "douren f(p) = " << d(p) << "\n";
    auto cap = cap_component(*d.domain, p);
    auto data = spherical_data(d, cap);
    std::cout << "cap of p: " << cap.size() << " grid units, spherical value " << data.value << ", derivative "
              << data.derivative << "\n";
    auto other = cap_component(*d.domain, p.conj());
    std::cout << "cap of conj(p): spherical value " << spherical_data(d, other).value << "\n";

    // a Laurent expansion and the Cauchy formula on a slice
    auto r = reciprocal(from_poly(QPolyD::linear(i)));
    auto L = laurent_coeffs(r, i, -3, 3);
    std::cout << "Laurent window of (q - i)^-* at i: " << json(L)["coeffs"].dump() << "\n";

    auto sq = from_poly(QPolyD(std::vector<Quat>{Quat(), Quat(), Quat(1)}));
    auto C = circle_contour(i, {0, 0}, 1);
    std::cout << "Cauchy reconstruction of q^2 at j/2 from L_i data: " << local_cauchy(sq, C, j / 2) << "\n";
}
