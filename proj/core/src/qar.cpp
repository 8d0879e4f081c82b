#include "qvar/qar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace qvar::qar {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double check(double u, double alpha) { return u >= 0.0 ? alpha * u : (alpha - 1.0) * u; }

// Deterministic offset in (-1, 1) per row; breaks ties between data points
// that lie exactly on a common hyperplane (repeated values are common in
// rounded or integer-valued data).
double row_jitter(std::size_t i) {
    std::uint64_t z = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return 2.0 * ((static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53) - 1.0;
}

// Rows nearest a quantile-shifted least-squares plane that together span R^k.
std::vector<std::size_t> initial_basis(const RowMatrix& X, const Eigen::VectorXd& y,
                                       double alpha) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto k = static_cast<std::size_t>(X.cols());

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < k) {
        throw DegenerateFitError("design matrix is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " < " + std::to_string(k) +
                                 "); the series carries no usable variation");
    }
    const Eigen::VectorXd ls = qr.solve(y);
    Eigen::VectorXd r = y - X * ls;
    std::vector<double> sorted(r.data(), r.data() + r.size());
    std::sort(sorted.begin(), sorted.end());
    const auto q_index = std::min(n - 1, static_cast<std::size_t>(alpha * static_cast<double>(n)));
    r.array() -= sorted[q_index];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(r[static_cast<Eigen::Index>(a)]) < std::abs(r[static_cast<Eigen::Index>(b)]);
    });

    std::vector<std::size_t> basis;
    std::vector<Eigen::VectorXd> span;
    for (std::size_t idx : order) {
        Eigen::VectorXd v = X.row(static_cast<Eigen::Index>(idx)).transpose();
        const double norm = v.norm();
        for (const auto& q : span) v -= q.dot(v) * q;
        if (v.norm() > 1e-9 * norm) {
            span.push_back(v.normalized());
            basis.push_back(idx);
            if (basis.size() == k) break;
        }
    }
    if (basis.size() < k) throw DegenerateFitError("design matrix is rank deficient");
    return basis;
}

struct Breakpoint {
    double t;
    double weight;
    std::size_t row;
};

}  // namespace

CheckLossSolution solve_check_loss(std::span<const double> design, std::size_t k,
                                   std::span<const double> y_in, QuantileLevel alpha_level) {
    if (k == 0) throw std::invalid_argument("design needs at least one column");
    if (design.size() != y_in.size() * k) {
        throw std::invalid_argument("design size does not match outcome count");
    }
    const std::size_t n = y_in.size();
    if (n < k) {
        throw std::invalid_argument("check-loss regression needs at least " + std::to_string(k) +
                                    " rows, got " + std::to_string(n));
    }
    require_finite(design, "design");
    require_finite(y_in, "outcomes");

    const double alpha = alpha_level.value();
    const Eigen::Map<const RowMatrix> X(design.data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(k));
    const Eigen::Map<const Eigen::VectorXd> y(y_in.data(), static_cast<Eigen::Index>(n));

    double scale = 1.0;
    for (double v : y_in) scale = std::max(scale, std::abs(v));
    Eigen::VectorXd yp(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        yp[static_cast<Eigen::Index>(i)] = y_in[i] + 1e-9 * scale * row_jitter(i);
    }
    const double zero_tol = 1e-12 * scale;

    std::vector<std::size_t> basis = initial_basis(X, yp, alpha);
    std::vector<char> in_basis(n, 0);
    for (std::size_t b : basis) in_basis[b] = 1;

    const std::size_t max_iterations = 20 * n + 1000;
    std::size_t iterations = 0;
    Eigen::MatrixXd B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    Eigen::VectorXd yb(static_cast<Eigen::Index>(k));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    std::vector<Breakpoint> breakpoints;
    breakpoints.reserve(n);

    for (;; ++iterations) {
        if (iterations > max_iterations) {
            throw std::runtime_error("check-loss solver exceeded its iteration limit");
        }
        for (std::size_t j = 0; j < k; ++j) {
            B.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(basis[j]));
            yb[static_cast<Eigen::Index>(j)] = yp[static_cast<Eigen::Index>(basis[j])];
        }
        lu.compute(B);
        const Eigen::VectorXd theta = lu.solve(yb);
        const Eigen::MatrixXd Binv = lu.inverse();
        Eigen::VectorXd r = yp - X * theta;
        for (std::size_t b : basis) r[static_cast<Eigen::Index>(b)] = 0.0;
        // C(i, j) = x_i' delta_j where delta_j moves the plane off basis row j only.
        const Eigen::MatrixXd C = X * Binv;

        // Steepest descending edge among the 2k moves (release row j upward/downward).
        double best_g = 0.0;
        std::size_t best_j = k;
        double best_s = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double lin = 0.0;
            double zero_up = 0.0;
            double zero_down = 0.0;
            double mass = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (in_basis[i]) continue;
                const double c = C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                const double ri = r[static_cast<Eigen::Index>(i)];
                mass += std::abs(c);
                if (ri > zero_tol) {
                    lin -= alpha * c;
                } else if (ri < -zero_tol) {
                    lin += (1.0 - alpha) * c;
                } else {
                    zero_up += check(-c, alpha);
                    zero_down += check(c, alpha);
                }
            }
            const double g_up = lin + zero_up + (1.0 - alpha);
            const double g_down = -lin + zero_down + alpha;
            const double tol = 1e-11 * mass;
            if (g_up < -tol && g_up < best_g) {
                best_g = g_up;
                best_j = j;
                best_s = 1.0;
            }
            if (g_down < -tol && g_down < best_g) {
                best_g = g_down;
                best_j = j;
                best_s = -1.0;
            }
        }
        if (best_j == k) break;

        // Exact line search: the objective is convex piecewise linear along the
        // edge; its slope rises by |x_i' delta| as each residual changes sign.
        breakpoints.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (in_basis[i]) continue;
            const double ri = r[static_cast<Eigen::Index>(i)];
            if (std::abs(ri) <= zero_tol) continue;
            const double v =
                best_s * C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best_j));
            if (v == 0.0) continue;
            const double t = ri / v;
            if (t > 0.0) breakpoints.push_back({t, std::abs(v), i});
        }
        std::sort(breakpoints.begin(), breakpoints.end(),
                  [](const Breakpoint& a, const Breakpoint& b) {
                      return a.t < b.t || (a.t == b.t && a.row < b.row);
                  });
        double slope = best_g;
        std::size_t entering = n;
        for (const auto& bp : breakpoints) {
            slope += bp.weight;
            if (slope >= 0.0) {
                entering = bp.row;
                break;
            }
        }
        if (entering == n) {
            throw DegenerateFitError("check-loss objective is unbounded along a descent edge");
        }
        in_basis[basis[best_j]] = 0;
        in_basis[entering] = 1;
        basis[best_j] = entering;
    }

    // Interpolate the unperturbed outcomes through the optimal basis rows.
    for (std::size_t j = 0; j < k; ++j) {
        B.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(basis[j]));
        yb[static_cast<Eigen::Index>(j)] = y[static_cast<Eigen::Index>(basis[j])];
    }
    lu.compute(B);
    const Eigen::VectorXd theta = lu.solve(yb);

    CheckLossSolution out;
    out.theta.assign(theta.data(), theta.data() + theta.size());
    const Eigen::VectorXd fitted = X * theta;
    for (std::size_t i = 0; i < n; ++i) {
        out.objective += pinball_loss(y_in[i], fitted[static_cast<Eigen::Index>(i)], alpha_level);
    }
    out.basis = std::move(basis);
    out.iterations = iterations;
    return out;
}

QarModel fit(const Series& series, std::size_t p, QuantileLevel alpha) {
    return fit(series, p, alpha, p);
}

QarModel fit(const Series& series, std::size_t p, QuantileLevel alpha, std::size_t first_scored) {
    if (p == 0) throw std::invalid_argument("lag order must be positive");
    if (first_scored < p) throw std::invalid_argument("first scored index must be at least the lag");
    const std::size_t k = p + 1;
    if (series.size() < first_scored + k) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " is too short to fit QAR(" + std::to_string(p) + ")");
    }
    const std::size_t rows = series.size() - first_scored;
    std::vector<double> design(rows * k);
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = first_scored + r;
        design[r * k] = 1.0;
        for (std::size_t lag = 1; lag <= p; ++lag) design[r * k + lag] = series[t - lag];
        y[r] = series[t];
    }
    CheckLossSolution sol = solve_check_loss(design, k, y, alpha);

    QarModel model;
    model.alpha = alpha;
    model.lag = p;
    model.theta = std::move(sol.theta);
    model.train_loss = sol.objective;
    model.n_scored = rows;
    return model;
}

double predict(const QarModel& model, const Signal& x) {
    if (x.size() != model.lag + 1 || model.theta.size() != model.lag + 1) {
        throw std::invalid_argument("signal length " + std::to_string(x.size()) +
                                    " does not match QAR(" + std::to_string(model.lag) + ")");
    }
    return x.dot(model.theta);
}

std::vector<double> forecast_path(const QarModel& model, const Series& series,
                                  std::size_t t_start, std::size_t t_end) {
    if (t_start < model.lag) {
        throw std::out_of_range("forecast window starts before a full lag context exists");
    }
    if (t_start > t_end || t_end > series.size()) {
        throw std::out_of_range("forecast window [" + std::to_string(t_start) + ", " +
                                std::to_string(t_end) + ") outside series of length " +
                                std::to_string(series.size()));
    }
    std::vector<double> out;
    out.reserve(t_end - t_start);
    for (std::size_t t = t_start; t < t_end; ++t) {
        out.push_back(predict(model, embed(series, model.lag, t)));
    }
    return out;
}

SignCounts residual_signs(const QarModel& model, const Series& series, std::size_t first_scored) {
    double scale = 1.0;
    for (double v : series.values()) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * scale;
    SignCounts counts;
    const auto path = forecast_path(model, series, first_scored, series.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double res = series[first_scored + i] - path[i];
        if (res > tol) {
            ++counts.positive;
        } else if (res < -tol) {
            ++counts.negative;
        } else {
            ++counts.zero;
        }
    }
    return counts;
}

}  // namespace qvar::qar
