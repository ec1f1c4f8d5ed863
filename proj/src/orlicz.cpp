#include "lpvar/orlicz.hpp"

#include <cmath>

namespace lpvar {

namespace {

// Adaptive Simpson with absolute/relative mixed tolerance.
double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, fa, b, fb, m, fm, whole,
                        std::fmax(tol, 1e-300), 48);
}

constexpr int kGridCells = 512;

} // namespace

OrliczM::OrliczM(const PExponent& p) : p_(p) {
    if (p.dual_infinite)
        throw UnsupportedExponentError("OrliczM: p = 1 is not supported");
    prefactor_ = 2.0 / (p_.p * std::exp(log_gamma(1.0 + 1.0 / p_.p)));
    inner_a_ = 2.0 - 1.0 / p_.p;
    gamma_a_ = std::exp(log_gamma(inner_a_));

    // Table up to where M comfortably exceeds any value the norm bisection
    // can query through M(|x_i|/rho) <= 1 brackets; M grows linearly with
    // slope prefactor_ for large s.
    const double s_hi = 8.0 / prefactor_ + 8.0;
    grid_s_.resize(kGridCells + 1);
    grid_m_.resize(kGridCells + 1);
    grid_s_[0] = 0.0;
    grid_m_[0] = 0.0;
    for (int k = 1; k <= kGridCells; ++k) {
        grid_s_[k] = s_hi * k / kGridCells;
        const double cell = integrate(grid_s_[k - 1], grid_s_[k]);
        grid_m_[k] = grid_m_[k - 1] + cell;
    }
}

double OrliczM::integrand(double t) const {
    if (t <= 0.0) return 0.0;
    // x = t^{-p*} in log space; both pieces saturate when x is huge.
    const double lx = -p_.p_star * std::log(t);
    if (lx > 700.0) return t * gamma_a_;
    const double x = std::exp(lx);
    return t * gamma_a_ * reg_lower_inc_gamma(inner_a_, x) + std::exp(-x);
}

double OrliczM::integrate(double lo, double hi) const {
    const double tol = 1e-9 * std::fmax(1e-12, (hi - lo) * integrand(hi));
    return prefactor_ *
           adaptive_simpson([this](double t) { return integrand(t); }, lo, hi, tol);
}

double OrliczM::eval(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= grid_s_.back())
        return grid_m_.back() + integrate(grid_s_.back(), s);
    const auto it = std::upper_bound(grid_s_.begin(), grid_s_.end(), s);
    const int k = static_cast<int>(it - grid_s_.begin()) - 1;
    return grid_m_[k] + integrate(grid_s_[k], s);
}

double OrliczM::inverse(double y) const {
    if (!(y > 0.0)) throw std::domain_error("OrliczM::inverse: y must be positive");
    double hi = grid_s_.back();
    while (eval(hi) < y) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) < y ? lo : hi) = mid;
    }
    return hi;
}

double luxemburg_norm(const OrliczM& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const int n = static_cast<int>(x.size());
    const double max_abs = x.cwiseAbs().maxCoeff();
    if (max_abs == 0.0) return 0.0;

    const auto weight_sum = [&](double rho) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xi = std::fabs(x[i]);
            if (xi > 0.0) acc += m.eval(xi / rho);
        }
        return acc;
    };

    double rho_hi = max_abs * std::fmax(1.0, 1.0 / m.inverse(1.0 / n));
    while (weight_sum(rho_hi) > 1.0) rho_hi *= 2.0;
    double rho_lo = rho_hi;
    while (weight_sum(rho_lo) <= 1.0) rho_lo *= 0.5;
    while (rho_hi - rho_lo > 1e-10 * rho_hi) {
        const double mid = 0.5 * (rho_lo + rho_hi);
        (weight_sum(mid) > 1.0 ? rho_lo : rho_hi) = mid;
    }
    return rho_hi;
}

RatioEstimate orlicz_vs_mc(const OrliczM& m, int n, const Direction& dir,
                           std::int64_t n_samples, RngStream stream, int threads) {
    const MomentEstimate ephi =
        estimate_ephi(m.exponent(), n, dir, n_samples, stream, threads);
    const double norm = luxemburg_norm(m, dir.theta);
    if (norm <= 0.0) throw std::domain_error("orlicz_vs_mc: degenerate norm");
    return RatioEstimate{ephi.mean / norm, ephi.std_err / norm};
}

} // namespace lpvar
