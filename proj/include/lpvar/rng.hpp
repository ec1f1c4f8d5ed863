#pragma once

// Deterministic splittable randomness and the exact samplers for the
// generalized Gaussian g, the vector G with its l_p norm S, cone-measure
// points G/S on the l_p sphere, and uniform points of B_p^n.

#include <cstdint>

#include <Eigen/Dense>

#include "lpvar/specfun.hpp"

namespace lpvar {

// Stateless 64-bit scramble (splitmix64 finalizer).
inline std::uint64_t scramble64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return scramble64(a ^ scramble64(b + 0x632be59bd9b4e019ULL));
}

// Handle identifying one reproducible random stream. Identical
// (seed, stream_id) pairs reproduce identical sequences; distinct stream_ids
// give statistically independent streams. Copy freely; the handle is state-free.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngStream substream(std::uint64_t k) const {
        return RngStream{seed, mix64(stream_id, k)};
    }
};

// xoshiro256++ engine seeded from an RngStream handle.
class RngEngine {
  public:
    explicit RngEngine(RngStream stream);

    std::uint64_t next_u64();
    double next_double();  // uniform on [0, 1)
    double next_open();    // uniform on (0, 1)
    double next_normal();  // standard normal, Marsaglia polar method
    double next_gamma(double shape); // Gamma(shape, 1), exact

  private:
    std::uint64_t s_[4];
};

struct GSample {
    Eigen::VectorXd g;
    double s; // l_p norm of g
};

struct ConePoint {
    Eigen::VectorXd y; // point on the boundary of B_p^n, ||y||_p = 1
    PExponent p;
};

// l_p norm with max-rescaling so that very large p does not overflow.
double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p);

// Exact Gamma(shape, 1) draw; shape < 1 handled by the boost transform
// W = W' * U^(1/shape) with W' ~ Gamma(shape + 1).
double sample_gamma(RngEngine& eng, double shape);

// One generalized-Gaussian draw with density exp(-|t|^p) / (2 Gamma(1+1/p)).
// |g| = W'^(1/p) * U with W' ~ Gamma(1 + 1/p), U uniform; sign symmetric.
double sample_gg(RngEngine& eng, const PExponent& p);

// n i.i.d. generalized-Gaussian coordinates together with S = ||G||_p.
GSample sample_gs(RngEngine& eng, const PExponent& p, int n);

// Cone-measure point G/S on the boundary of B_p^n.
ConePoint sample_cone(RngEngine& eng, const PExponent& p, int n);

// Uniform point of B_p^n: U^(1/n) * (G/S) with U uniform on [0,1].
Eigen::VectorXd sample_ball_uniform(RngEngine& eng, const PExponent& p, int n);

// Uniform (Haar) direction on the Euclidean sphere S^{n-1}.
Eigen::VectorXd sample_haar_direction(RngEngine& eng, int n);

} // namespace lpvar
