#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace splitsd {

using Vec = std::vector<double>;

// Seeded random source with hand-coded transforms so that a given seed
// produces the same stream on every standard library. std:: distributions
// are implementation-defined; these are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Box-Muller, cosine branch only
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    Vec normal_vec(int dim, double stddev = 1.0) {
        Vec v(static_cast<std::size_t>(dim));
        for (auto& x : v) x = stddev * normal();
        return v;
    }

    // uniform on the unit sphere in R^dim (dim = 1 gives +-1)
    Vec unit_sphere(int dim) {
        for (;;) {
            Vec v = normal_vec(dim);
            double s = 0.0;
            for (double x : v) s += x * x;
            if (s > 1e-24) {
                const double inv = 1.0 / std::sqrt(s);
                for (auto& x : v) x *= inv;
                return v;
            }
        }
    }

    // integer in [0, n); modulo bias is ~2^-60 for the n used here
    std::uint64_t integer(std::uint64_t n) {
        return engine_() % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace splitsd
