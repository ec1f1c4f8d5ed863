#include "lpvar/rng.hpp"

#include <cmath>

namespace lpvar {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngEngine::RngEngine(RngStream stream) {
    // Expand (seed, stream_id) into four state words through a splitmix chain.
    std::uint64_t sm = mix64(stream.seed, ~stream.stream_id);
    for (auto& w : s_) {
        sm += 0x9e3779b97f4a7c15ULL;
        w = scramble64(sm);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngEngine::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngEngine::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngEngine::next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngEngine::next_normal() {
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RngEngine::next_gamma(double shape) {
    if (!(shape > 0.0))
        throw std::domain_error("next_gamma: shape must be positive");
    if (shape < 1.0) {
        const double w = next_gamma(shape + 1.0);
        return w * std::pow(next_open(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_open();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        acc += std::pow(std::fabs(v[i]) / m, p);
    return m * std::pow(acc, 1.0 / p);
}

double sample_gamma(RngEngine& eng, double shape) {
    return eng.next_gamma(shape);
}

double sample_gg(RngEngine& eng, const PExponent& p) {
    const double w = eng.next_gamma(1.0 + 1.0 / p.p);
    const double u = eng.next_open();
    const double mag = std::pow(w, 1.0 / p.p) * u;
    return (eng.next_u64() & 1u) ? mag : -mag;
}

GSample sample_gs(RngEngine& eng, const PExponent& p, int n) {
    if (n < 1) throw std::domain_error("sample_gs: n must be >= 1");
    GSample out;
    out.g.resize(n);
    for (int i = 0; i < n; ++i) out.g[i] = sample_gg(eng, p);
    out.s = lp_norm(out.g, p.p);
    return out;
}

ConePoint sample_cone(RngEngine& eng, const PExponent& p, int n) {
    GSample gs = sample_gs(eng, p, n);
    return ConePoint{gs.g / gs.s, p};
}

Eigen::VectorXd sample_ball_uniform(RngEngine& eng, const PExponent& p, int n) {
    ConePoint c = sample_cone(eng, p, n);
    const double r = std::pow(eng.next_double(), 1.0 / n);
    return r * c.y;
}

Eigen::VectorXd sample_haar_direction(RngEngine& eng, int n) {
    if (n < 1) throw std::domain_error("sample_haar_direction: n must be >= 1");
    Eigen::VectorXd v(n);
    double norm2;
    do {
        for (int i = 0; i < n; ++i) v[i] = eng.next_normal();
        norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    return v / std::sqrt(norm2);
}

} // namespace lpvar
