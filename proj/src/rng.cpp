#include "fairsched/rng.hpp"

#include <cmath>

namespace fairsched {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double Rng::exponential(double mean) {
    // 1 - u is in (0, 1], so the log argument never hits zero.
    return -mean * std::log(1.0 - uniform01());
}

double Rng::normal() {
    double u1 = 1.0 - uniform01(); // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double Rng::weibull(double shape, double scale) {
    // u = 0 would produce a zero-size draw; sizes must be strictly positive.
    double u = uniform01();
    while (u == 0.0) u = uniform01();
    return scale * std::pow(-std::log1p(-u), 1.0 / shape);
}

} // namespace fairsched
