#include "lpvar/quadoracle.hpp"

#include <cmath>

#include "lpvar/projest.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/steiner.hpp"

namespace lpvar {

namespace {

int base_grid(const QuadConfig& cfg, int n) {
    if (cfg.grid_points_per_axis > 0) return cfg.grid_points_per_axis;
    return n <= 2 ? 2048 : 512;
}

std::vector<double> midpoints(double lo, double hi, int g) {
    std::vector<double> c(g);
    const double h = (hi - lo) / g;
    for (int k = 0; k < g; ++k) c[k] = lo + (k + 0.5) * h;
    return c;
}

// Runs `level(grid)` over doubling refinements and certifies the agreement
// of the last two.
CertifiedValue certify(const QuadConfig& cfg, int n,
                       const std::function<double(int)>& level) {
    const int levels = std::max(2, cfg.refinement_levels);
    int g = base_grid(cfg, n);
    double prev = level(g);
    double cur = prev;
    double delta = 0.0;
    for (int l = 1; l < levels; ++l) {
        g *= 2;
        cur = level(g);
        delta = std::fabs(cur - prev) / std::fmax(std::fabs(cur), 1e-8);
        prev = cur;
    }
    if (delta > cfg.certify_rel_tol)
        throw OracleUncertifiedError("quadrature refinements did not converge");
    return CertifiedValue{cur, delta};
}

// Integral of y^k over the centered fiber [-m, m].
double fiber_moment(double m, int k) {
    if (k % 2) return 0.0;
    return 2.0 * std::pow(m, k + 1) / (k + 1);
}

struct BallSums {
    double f = 0.0;
    double vol = 0.0;
};

// Midpoint grid over the first n-1 axes; the last axis is integrated in
// closed form through the fiber half-length (1 - sum |x_i|^p)^{1/p}. Raw
// indicator counting converges too slowly to certify on straight facets.
BallSums ball_grid_sums(const PExponent& p, int n, const std::vector<int>& ex, int g) {
    const std::vector<double> c = midpoints(-1.0, 1.0, g);
    std::vector<double> ap(g);
    for (int k = 0; k < g; ++k) ap[k] = std::pow(std::fabs(c[k]), p.p);
    auto mono = [&](int e) {
        std::vector<double> m(g, 1.0);
        if (e != 0)
            for (int k = 0; k < g; ++k) m[k] = std::pow(c[k], e);
        return m;
    };
    const int k_last = ex[n - 1];
    const double inv_p = 1.0 / p.p;

    if (n == 2) {
        const std::vector<double> mx = mono(ex[0]);
        double f = 0.0, vol = 0.0;
        for (int i = 0; i < g; ++i) {
            const double rest = 1.0 - ap[i];
            if (rest <= 0.0) continue;
            const double m = std::pow(rest, inv_p);
            f += mx[i] * fiber_moment(m, k_last);
            vol += 2.0 * m;
        }
        return BallSums{f, vol};
    }
    const std::vector<double> mx = mono(ex[0]);
    const std::vector<double> my = mono(ex[1]);
    std::vector<double> row_f(g, 0.0), row_v(g, 0.0);
    for_each_batch(g, [&](int i) {
        double f = 0.0, vol = 0.0;
        for (int j = 0; j < g; ++j) {
            const double rest = 1.0 - ap[i] - ap[j];
            if (rest <= 0.0) continue;
            const double m = std::pow(rest, inv_p);
            f += mx[i] * my[j] * fiber_moment(m, k_last);
            vol += 2.0 * m;
        }
        row_f[i] = f;
        row_v[i] = vol;
    });
    return BallSums{pairwise_sum(row_f), pairwise_sum(row_v)};
}

} // namespace

CertifiedValue quad_moments_ball(const PExponent& p, int n,
                                 const std::vector<int>& exponents, QuadConfig cfg) {
    if (n < 2 || n > 3)
        throw std::invalid_argument("quad_moments_ball: n must be 2 or 3");
    if (static_cast<int>(exponents.size()) != n)
        throw std::invalid_argument("quad_moments_ball: one exponent per axis");
    return certify(cfg, n, [&](int g) {
        const BallSums s = ball_grid_sums(p, n, exponents, g);
        return s.f / s.vol;
    });
}

CertifiedValue quad_volume_ball(const PExponent& p, int n, QuadConfig cfg) {
    if (n < 2 || n > 3)
        throw std::invalid_argument("quad_volume_ball: n must be 2 or 3");
    const std::vector<int> zero(n, 0);
    return certify(cfg, n, [&](int g) {
        const BallSums s = ball_grid_sums(p, n, zero, g);
        const double h = 2.0 / g;
        return s.vol * std::pow(h, n - 1);
    });
}

namespace {

// Convex section of the projection along the second basis axis: smallest and
// largest t with s u + t v inside, found by golden-section plus bisection on
// the (convex) fiber depth. Returns false for an empty column.
bool projection_column(const PExponent& p, int n, const Direction& dir,
                       const Eigen::VectorXd& u, const Eigen::VectorXd& v, double s,
                       double* t_lo, double* t_hi) {
    const auto depth = [&](double t) {
        return projection_depth(p, n, dir, (s * u + t * v).eval());
    };

    double a = -2.0, b = 2.0;
    while (depth(a) <= depth(0.0)) a *= 2.0;
    while (depth(b) <= depth(0.0)) b *= 2.0;
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = depth(c), fd = depth(d);
    while (b - a > 1e-9) {
        if (fc < fd) {
            b = d; d = c; fd = fc; c = b - gr * (b - a); fc = depth(c);
        } else {
            a = c; c = d; fc = fd; d = a + gr * (b - a); fd = depth(d);
        }
    }
    const double t_min = 0.5 * (a + b);
    if (depth(t_min) > 1.0) return false;

    const auto cross = [&](double in, double out) {
        // depth(in) <= 1 < depth(out); bisect the crossing
        for (int it = 0; it < 80 && std::fabs(out - in) > 1e-10; ++it) {
            const double mid = 0.5 * (in + out);
            (depth(mid) <= 1.0 ? in : out) = mid;
        }
        return 0.5 * (in + out);
    };
    double hi = t_min + 1.0;
    while (depth(hi) <= 1.0) hi = t_min + 2.0 * (hi - t_min);
    double lo = t_min - 1.0;
    while (depth(lo) <= 1.0) lo = t_min - 2.0 * (t_min - lo);
    *t_hi = cross(t_min, hi);
    *t_lo = cross(t_min, lo);
    return true;
}

} // namespace

CertifiedValue quad_moments_projection(const PExponent& p, int n, const Direction& dir,
                                       const std::function<double(const Eigen::VectorXd&)>& f,
                                       QuadConfig cfg) {
    if (n < 2 || n > 3)
        throw std::invalid_argument("quad_moments_projection: n must be 2 or 3");
    if (dir.dim() != n)
        throw std::invalid_argument("quad_moments_projection: dimension mismatch");
    const Eigen::MatrixXd basis = hyperplane_basis(dir.theta);
    const double radius =
        std::pow(static_cast<double>(n), std::fmax(0.0, 0.5 - 1.0 / p.p));

    if (n == 2) {
        // the projection is the segment [-a, a] along the single basis vector
        const Eigen::VectorXd u = basis.col(0);
        const auto inside = [&](double s) {
            return membership_projection(p, n, dir, (s * u).eval());
        };
        double hi = radius;
        double lo = 0.0;
        while (inside(hi)) hi *= 2.0;
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
        }
        const double a = 0.5 * (lo + hi);
        return certify(cfg, n, [&](int g) {
            const std::vector<double> c = midpoints(-a, a, g);
            double acc = 0.0;
            for (int k = 0; k < g; ++k) acc += f((c[k] * u).eval());
            return acc / g;
        });
    }

    const Eigen::VectorXd u = basis.col(0);
    const Eigen::VectorXd v = basis.col(1);

    // Support interval of the projection along u: bisect the crossing of the
    // (convex) two-dimensional fiber depth. Columns shrink like a square root
    // at these endpoints, so the outer mesh is graded toward them.
    const auto col_depth = [&](double s) {
        const auto depth_t = [&](double t) {
            return projection_depth(p, n, dir, (s * u + t * v).eval());
        };
        const double gr = 0.6180339887498949;
        double a = -2.0 * radius, b = 2.0 * radius;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = depth_t(c), fd = depth_t(d);
        while (b - a > 1e-10) {
            if (fc < fd) {
                b = d; d = c; fd = fc; c = b - gr * (b - a); fc = depth_t(c);
            } else {
                a = c; c = d; fc = fd; d = a + gr * (b - a); fd = depth_t(d);
            }
        }
        return depth_t(0.5 * (a + b));
    };
    const auto support_end = [&](double dirn) {
        double in = 0.0, out = dirn * radius;
        while (col_depth(out) <= 1.0) out *= 2.0;
        for (int it = 0; it < 60 && std::fabs(out - in) > 1e-9; ++it) {
            const double mid = 0.5 * (in + out);
            (col_depth(mid) <= 1.0 ? in : out) = mid;
        }
        return 0.5 * (in + out);
    };
    const double s_pos = support_end(+1.0);
    const double s_neg = support_end(-1.0);

    return certify(cfg, n, [&](int g) {
        // smoothstep grading: cell widths vanish quadratically at both ends
        std::vector<double> edge(g + 1);
        for (int j = 0; j <= g; ++j) {
            const double xi = static_cast<double>(j) / g;
            const double w = xi * xi * (3.0 - 2.0 * xi);
            edge[j] = s_neg + (s_pos - s_neg) * w;
        }
        std::vector<double> row_f(g, 0.0), row_len(g, 0.0);
        for_each_batch(g, [&](int i) {
            const double s = 0.5 * (edge[i] + edge[i + 1]);
            const double width = edge[i + 1] - edge[i];
            double t_lo = 0.0, t_hi = 0.0;
            if (!projection_column(p, n, dir, u, v, s, &t_lo, &t_hi)) return;
            const int m = g;
            const double h = (t_hi - t_lo) / m;
            double acc = 0.0;
            Eigen::VectorXd y(n);
            for (int k = 0; k < m; ++k) {
                y = s * u + (t_lo + (k + 0.5) * h) * v;
                acc += f(y);
            }
            row_f[i] = acc * h * width;
            row_len[i] = (t_hi - t_lo) * width;
        });
        return pairwise_sum(row_f) / pairwise_sum(row_len);
    });
}

namespace {

// Symmetric graded axis mesh: cell boundaries R (j/G)^2 on each side, dense
// near zero where |t|^{p-1} has a cusp for p < 2. Returns midpoint nodes and
// density-weighted cell masses.
void graded_axis(const PExponent& p, double radius, int g,
                 std::vector<double>* nodes, std::vector<double>* weights) {
    const int half = g / 2;
    const double norm = 1.0 / (2.0 * std::exp(log_gamma(1.0 + 1.0 / p.p)));
    nodes->clear();
    weights->clear();
    nodes->reserve(2 * half);
    weights->reserve(2 * half);
    for (int side = -1; side <= 1; side += 2) {
        for (int j = 0; j < half; ++j) {
            const double b0 = radius * (static_cast<double>(j) / half) *
                              (static_cast<double>(j) / half);
            const double b1 = radius * (static_cast<double>(j + 1) / half) *
                              (static_cast<double>(j + 1) / half);
            const double t = side * 0.5 * (b0 + b1);
            const double w = (b1 - b0) * std::exp(-std::pow(std::fabs(t), p.p)) * norm;
            nodes->push_back(t);
            weights->push_back(w);
        }
    }
}

} // namespace

CertifiedValue quad_epsi(const PExponent& p, int n, const Direction& dir,
                         QuadConfig cfg) {
    if (n < 2 || n > 3)
        throw std::invalid_argument("quad_epsi: n must be 2 or 3");
    if (dir.dim() != n) throw std::invalid_argument("quad_epsi: dimension mismatch");
    const double radius = 2.0 * std::pow(std::log(1e12), 1.0 / p.p);
    const double q = p.p - 1.0;
    return certify(cfg, n, [&](int g) {
        std::vector<double> t, w;
        graded_axis(p, radius, g, &t, &w);
        const int m = static_cast<int>(t.size());
        std::vector<std::vector<double>> sig(n, std::vector<double>(m));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < m; ++k)
                sig[i][k] = signed_power(t[k], q) * dir.theta[i];
        const double wsum = pairwise_sum(w);

        std::vector<double> rows(m, 0.0);
        if (n == 2) {
            for_each_batch(m, [&](int i) {
                double acc = 0.0;
                for (int j = 0; j < m; ++j)
                    acc += w[j] * std::fabs(sig[0][i] + sig[1][j]);
                rows[i] = w[i] * acc;
            });
            return pairwise_sum(rows) / (wsum * wsum);
        }
        for_each_batch(m, [&](int i) {
            double acc_i = 0.0;
            for (int j = 0; j < m; ++j) {
                const double sij = sig[0][i] + sig[1][j];
                double acc = 0.0;
                for (int k = 0; k < m; ++k)
                    acc += w[k] * std::fabs(sij + sig[2][k]);
                acc_i += w[j] * acc;
            }
            rows[i] = w[i] * acc_i;
        });
        return pairwise_sum(rows) / (wsum * wsum * wsum);
    });
}

CertifiedValue quad_boundary_integral(const PExponent& p,
                                      const std::function<double(double, double)>& f,
                                      QuadConfig cfg) {
    // One octant arc x in [0, 2^{-1/p}], y = (1 - x^p)^{1/p} >= x, mirrored
    // about the diagonal and reflected through both axes.
    const double xm = std::pow(0.5, 1.0 / p.p);
    return certify(cfg, 2, [&](int g) {
        const std::vector<double> c = midpoints(0.0, xm, g);
        const double h = xm / g;
        double acc = 0.0;
        for (int k = 0; k < g; ++k) {
            const double x = c[k];
            const double y = std::pow(1.0 - std::pow(x, p.p), 1.0 / p.p);
            const double slope = std::pow(x / y, p.p - 1.0);
            const double ds = std::sqrt(1.0 + slope * slope) * h;
            double v = 0.0;
            for (int sx = -1; sx <= 1; sx += 2)
                for (int sy = -1; sy <= 1; sy += 2)
                    v += f(sx * x, sy * y) + f(sx * y, sy * x);
            acc += v * ds;
        }
        return acc;
    });
}

} // namespace lpvar
