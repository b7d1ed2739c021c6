#include "iwsurv/fixtures.hpp"

#include "iwsurv/errors.hpp"

#include <array>
#include <string>

namespace iwsurv {

namespace {

constexpr std::array<double, 50> kA{
    0.2776, 0.2931, 0.3384, 0.4321, 0.4739, 0.4771, 0.5331, 0.5424,
    0.5482, 0.5571, 0.6139, 0.6451, 0.6523, 0.6587, 0.7166, 0.7838,
    0.8466, 0.8892, 0.9278, 0.9651, 1.008, 1.051, 1.123, 1.203,
    1.213, 1.366, 1.529, 1.795, 1.947, 2.093, 2.143, 2.189,
    2.246, 2.453, 2.526, 2.858, 2.924, 3.381, 3.383, 3.587,
    4.964, 5.101, 5.139, 6.753, 10.11, 11.37, 12.68, 16.88,
    17.25, 19.07,
};

constexpr std::array<double, 50> kB{
    0.7228, 0.7955, 0.8202, 0.8333, 0.8535, 0.8641, 0.8650, 0.9124,
    0.9245, 0.9300, 0.9598, 0.9706, 1.017, 1.017, 1.031, 1.033,
    1.047, 1.052, 1.059, 1.083, 1.102, 1.121, 1.150, 1.152,
    1.156, 1.158, 1.175, 1.183, 1.187, 1.203, 1.204, 1.211,
    1.218, 1.226, 1.247, 1.270, 1.305, 1.320, 1.338, 1.347,
    1.356, 1.359, 1.365, 1.389, 1.473, 1.567, 1.637, 1.823,
    1.897, 4.637,
};

constexpr std::array<double, 15> kC{
    0.35, 0.59, 0.96, 0.99, 1.69, 1.97, 2.07, 2.58,
    2.71, 2.90, 3.67, 3.99, 5.35, 13.77, 25.50,
};

} // namespace

std::span<const double> fixture_values(FixtureId id) {
    switch (id) {
    case FixtureId::A: return kA;
    case FixtureId::B: return kB;
    case FixtureId::C: return kC;
    }
    throw DomainError("unknown fixture");
}

Sample fixture(FixtureId id) {
    const auto v = fixture_values(id);
    const char* names[] = {"A", "B", "C"};
    return Sample(std::vector<double>(v.begin(), v.end()), names[static_cast<int>(id)]);
}

FixtureId parse_fixture_id(std::string_view name) {
    if (name == "A" || name == "a") return FixtureId::A;
    if (name == "B" || name == "b") return FixtureId::B;
    if (name == "C" || name == "c") return FixtureId::C;
    throw DomainError("unknown fixture '" + std::string(name) + "' (expected A, B or C)");
}

} // namespace iwsurv
