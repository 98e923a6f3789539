#include <cstdlib>
#include <iostream>

#include "slicereg/selftest.hpp"

int main(int argc, char** argv) {
    uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    int failed = 0;
    for (auto& r : slicereg::run_selftest(seed, {})) {
        std::cout << slicereg::format_result(r) << std::endl;
        failed += !r.pass;
    }
    std::cout << "summary: " << 12 - failed << "/12 criteria passed" << std::endl;
    return failed ? 1 : 0;
}
