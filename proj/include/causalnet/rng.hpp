#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace causalnet {

// splitmix64 step (Steele, Lea & Flood); used only to derive seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of the index-th substream spawned from a root seed. Substreams are
// what make replicate-parallel runs reproducible: replicate k always sees
// the stream seeded by substream_seed(root, k) no matter the schedule.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t s = root + (index + 1) * 0x9e3779b97f4a7c15ULL;
    return splitmix64(s);
}

// Deterministic random source. std::mt19937_64 output is fixed by the
// standard; all distributions below are implemented here because the
// std::*_distribution classes are not bit-portable across libraries.
class rng_t {
public:
    explicit rng_t(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    // uniform on {0, ..., n-1}, unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            throw std::invalid_argument("rng_t::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = u64();
        while (v >= limit)
            v = u64();
        return v % n;
    }

    // uniform on [0, 1) with 53-bit resolution
    double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller (cosine branch only)
    double normal() {
        const double u1 = 1.0 - real01();  // (0, 1]
        const double u2 = real01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_ * u2);
    }

    // gamma(shape, scale) by Marsaglia-Tsang; shape < 1 boosted via U^(1/shape)
    double gamma(double shape, double scale) {
        if (shape <= 0.0 || scale <= 0.0)
            throw std::invalid_argument("rng_t::gamma: shape and scale must be positive");
        if (shape < 1.0) {
            const double u = 1.0 - real01();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = 1.0 - real01();
            if (u < 1.0 - 0.0331 * x * x * x * x)
                return scale * d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return scale * d * v;
        }
    }

    // Poisson by Knuth's product method; large means split into chunks so
    // exp(-lambda) stays representable
    std::int64_t poisson(double lambda) {
        if (lambda < 0.0)
            throw std::invalid_argument("rng_t::poisson: lambda must be nonnegative");
        std::int64_t total = 0;
        while (lambda > 500.0) {
            total += poisson_small(500.0);
            lambda -= 500.0;
        }
        return total + poisson_small(lambda);
    }

    // NB2 draw with mean mu and dispersion theta via the gamma-Poisson mixture
    std::int64_t negative_binomial(double mu, double theta) {
        if (mu < 0.0 || theta <= 0.0)
            throw std::invalid_argument("rng_t::negative_binomial: bad parameters");
        if (mu == 0.0)
            return 0;
        return poisson(gamma(theta, mu / theta));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    // first k entries of a seeded permutation of {0, ..., n-1}
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n)
            k = n;
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i)
            idx[i] = i;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(idx[i], idx[i + below(n - i)]);
        idx.resize(k);
        return idx;
    }

private:
    std::int64_t poisson_small(double lambda) {
        const double l = std::exp(-lambda);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= real01();
        } while (p > l);
        return k - 1;
    }

    static constexpr double pi_ = 3.14159265358979323846;
    std::mt19937_64 engine_;
};

}  // namespace causalnet
