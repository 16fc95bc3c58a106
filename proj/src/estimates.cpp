#include "dispersive/estimates.hpp"

#include "dispersive/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dispersive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Beyond this k the coefficients are formed in log space.
constexpr int kDirectK = 30;

double ipow(double x, int n) {
    double r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double log_alpha(int k) { return k * std::log(34.0) + std::log1p(9.0 * k / 17.0); }

double log_beta(int k) {
    // 9 k^2 2^{3k} 17^{k-1} + 34^k = 34^k (1 + 9 k^2 4^k / 17)
    const double a = k * std::log(34.0);
    const double b = std::log(9.0) + 2 * std::log(double(k)) + 3 * k * std::log(2.0) + (k - 1) * std::log(17.0);
    return std::max(a, b) + std::log1p(std::exp(std::min(a, b) - std::max(a, b)));
}

double log_gamma(int k) {
    const double prefix = std::log(double(k)) + k * std::log(2.0) + (k - 1) * std::log(17.0);
    // bracket = 25 + 18 (k-1)^2 4^k / 17 + 17/k + k 2^{2k+2}; the 4^k terms dominate
    const double big = 2 * k * std::log(2.0) + std::log(18.0 * (k - 1) * (k - 1) / 17.0 + 4.0 * k);
    const double small = std::log(25.0 + 17.0 / k);
    return prefix + big + std::log1p(std::exp(small - big));
}

/// 1/x from log x, infinite when x == 0.
double inverse(double log_x) { return std::exp(-log_x); }

/// Largest t <= bound with pred(t) true, stepping down by ulps if rounding broke pred.
template <typename Pred>
double admissible(double bound, Pred pred) {
    double t = bound;
    for (int i = 0; i < 64 && std::isfinite(t) && t > 0 && !pred(t); ++i) t = std::nextafter(t, 0.0);
    return t;
}

}  // namespace

InequalityVerdict make_verdict(double lhs, double rhs) {
    InequalityVerdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.slack = rhs - lhs;
    v.satisfied = v.slack >= -1e-12 * (std::abs(rhs) + 1.0);
    return v;
}

InequalityVerdict gn_check(const GridFunction<double>& u, int l, double constant) {
    if (l < 1) throw ParameterError("gn_check needs l >= 1");
    const auto r = norms(u, l);
    const double top = r.seminorms[static_cast<std::size_t>(l - 1)];
    const double p = 1.0 / (2.0 * l);
    const double rhs = (r.l2 == 0.0) ? 0.0 : constant * std::pow(top, p) * std::pow(r.l2, 1.0 - p);
    return make_verdict(r.sup, rhs);
}

InterpolationCheck interpolation_check(const GridFunction<double>& u, int m, int i, double a1, double a2) {
    if (!(0 < i && i < m)) throw ParameterError("interpolation_check needs 0 < i < m");
    const auto r = norms(u, m);
    const double di = r.seminorms[static_cast<std::size_t>(i - 1)];
    const double dm = r.seminorms[static_cast<std::size_t>(m - 1)];
    const double theta = double(i) / double(m);
    const double mixed = std::pow(dm, theta) * std::pow(r.l2, 1.0 - theta);
    InterpolationCheck out;
    const double excess = di - a2 * r.l2;
    if (excess <= 0) {
        out.best_a1 = 0;
    } else {
        out.best_a1 = mixed > 0 ? excess / mixed : kInf;
    }
    out.verdict = make_verdict(di, a1 * mixed + a2 * r.l2);
    return out;
}

double calibrate_interpolation(std::span<const GridFunction<double>> corpus, int m, int i, double a2, double margin) {
    double best = 0;
    for (const auto& u : corpus) best = std::max(best, interpolation_check(u, m, i, 0.0, a2).best_a1);
    return best * margin;
}

InequalityVerdict tvm_check(double v1, double v2, int k) {
    if (k < 1) throw ParameterError("tvm_check needs k >= 1");
    const double lhs = std::abs(ipow(v1, k) - ipow(v2, k));
    const double rhs = k * ipow(2.0, k - 1) * (ipow(std::abs(v1), k - 1) + ipow(std::abs(v2), k - 1)) * std::abs(v1 - v2);
    return make_verdict(lhs, rhs);
}

double energy_balance_terms(const GridFunction<double>& u, int k, int l) {
    const auto r = norms(u, l);
    double s = 0;
    for (int j = 1; j <= l; ++j) {
        const double dj = r.seminorms[static_cast<std::size_t>(j - 1)];
        s += (2 * j + 1) * dj * dj;
    }
    const double trace = diff(u, l).left();
    s += trace * trace;

    const auto du = diff(u, 1);
    Eigen::VectorXd full = u.full();
    Eigen::VectorXd prod = full.array().pow(double(k)).matrix().cwiseProduct(du.full());
    const GridFunction<double> nonlinear(u.grid(), prod.segment(1, u.grid().size()), prod(0),
                                         prod(prod.size() - 1));
    s += 2.0 * weighted_inner(nonlinear, u);
    return s;
}

std::vector<double> energy_residual(const Trajectory<double>& u, int k, int l) {
    if (u.size() < 3) throw SizingError("energy residual needs at least three time samples");
    std::vector<double> weighted(u.size());
    for (std::size_t m = 0; m < u.size(); ++m) weighted[m] = weighted_inner(u.states[m], u.states[m]);
    std::vector<double> out;
    out.reserve(u.size() - 2);
    for (std::size_t m = 1; m + 1 < u.size(); ++m) {
        const double ddt = (weighted[m + 1] - weighted[m - 1]) / (u.times[m + 1] - u.times[m - 1]);
        out.push_back(ddt + energy_balance_terms(u.states[m], k, l));
    }
    return out;
}

double radius(const GridFunction<double>& u0, int k, int l) {
    if (k < 1 || l < 1) throw ParameterError("radius needs k, l >= 1");
    const auto r = norms(u0, 2 * l + 1);
    const double hl = r.sobolev_squared(l);
    const double top = r.sobolev_squared(2 * l + 1);
    const double L = u0.grid().length();
    const double r2 = (1 + L) * (1 + l) * (ipow(2.0, k) * ipow(hl, k + 1) + top);
    return std::sqrt(r2);
}

double alpha_k(int k) {
    if (k > kDirectK) return std::exp(log_alpha(k));
    return 9.0 * k * ipow(2, k) * ipow(17, k - 1) + ipow(34, k);
}

double beta_k(int k) {
    if (k > kDirectK) return std::exp(log_beta(k));
    return 9.0 * k * k * ipow(2, 3 * k) * ipow(17, k - 1) + ipow(34, k);
}

double gamma_k(int k) {
    if (k > kDirectK) return std::exp(log_gamma(k));
    const double kk = k;
    return kk * ipow(2, k) * ipow(17, k - 1) *
           (25.0 + 18.0 * (kk - 1) * (kk - 1) * ipow(4, k) / 17.0 + 17.0 / kk + kk * ipow(2, 2 * k + 2));
}

namespace {

/// Log-space coefficients shared by the time conditions.
struct BudgetLogs {
    double c1;     // log((1+L) 9 34^k R^{2k})
    double a32;    // log(32 (1+L) alpha R^{2k})
    double a128;   // log(128 (1+L) alpha R^{2k})
    double small;  // 9 k 34^{k-1} / alpha (R-independent)
    double b32;    // log(32 (1+L) beta R^{2k})
    double b4;     // log(4 (1+L) beta R^{2k})
    double g80;    // log(80 (1+L) gamma R^{2k})
    double g10;    // log(10 (1+L) gamma R^{2k})
};

BudgetLogs budget_logs(double R, int k, double L) {
    const double lr = R > 0 ? 2.0 * k * std::log(R) : -kInf;
    const double ll = std::log1p(L);
    const double la = k > kDirectK ? log_alpha(k) : std::log(alpha_k(k));
    const double lb = k > kDirectK ? log_beta(k) : std::log(beta_k(k));
    const double lg = k > kDirectK ? log_gamma(k) : std::log(gamma_k(k));
    BudgetLogs b{};
    b.c1 = ll + std::log(9.0) + k * std::log(34.0) + lr;
    b.a32 = std::log(32.0) + ll + la + lr;
    b.a128 = std::log(128.0) + ll + la + lr;
    b.small = std::exp(std::log(9.0 * k) + (k - 1) * std::log(34.0) - la);
    b.b32 = std::log(32.0) + ll + lb + lr;
    b.b4 = std::log(4.0) + ll + lb + lr;
    b.g80 = std::log(80.0) + ll + lg + lr;
    b.g10 = std::log(10.0) + ll + lg + lr;
    return b;
}

}  // namespace

ExistenceBudget existence_time(double R, int k, int l, double L, double horizon) {
    if (!(R >= 0) || !std::isfinite(R)) throw ParameterError("radius R must be finite and >= 0");
    if (k < 1 || l < 1) throw ParameterError("k and l must be >= 1");
    if (!(L > 0)) throw ParameterError("interval length L must be positive");
    if (!(horizon > 0)) throw ParameterError("horizon must be positive");

    ExistenceBudget b;
    b.k = k;
    b.l = l;
    b.L = L;
    b.R = R;
    b.horizon = horizon;
    b.alpha_k = alpha_k(k);
    b.beta_k = beta_k(k);
    b.gamma_k = gamma_k(k);

    const auto g = budget_logs(R, k, L);
    const double ln2 = std::log(2.0);
    const double c1 = std::exp(g.c1);
    const double a32 = std::exp(g.a32), a128 = std::exp(g.a128);
    const double b32 = std::exp(g.b32), b4 = std::exp(g.b4);
    const double g80 = std::exp(g.g80), g10 = std::exp(g.g10);

    auto& T = b.T;
    T[0] = admissible(std::min({horizon, ln2, 0.5 * inverse(g.c1)}),
                      [&](double t) { return std::exp(t) <= 2.0 && c1 * t <= 0.5; });
    T[1] = admissible(std::min(T[0], 2.0 / (c1 + 2.0)), [&](double t) { return (c1 + 2.0) * t <= 2.0; });
    T[2] = admissible(std::min({horizon, ln2 * inverse(g.a32), 0.5 / g.small}),
                      [&](double t) { return std::exp(a32 * t) <= 2.0 && g.small * t <= 0.5; });
    T[3] = admissible(std::min(T[2], 2.0 / (a128 + g.small)), [&](double t) { return (a128 + g.small) * t <= 2.0; });
    b.T0 = std::min(T[1], T[3]);
    T[4] = admissible(std::min(b.T0, ln2 * inverse(g.b32)), [&](double t) { return std::exp(b32 * t) <= 2.0; });
    T[5] = admissible(std::min(T[4], (5.0 / 16.0) * inverse(g.b4)), [&](double t) { return b4 * t <= 5.0 / 16.0; });
    T[6] = admissible(std::min(b.T0, ln2 * inverse(g.g80)), [&](double t) { return std::exp(g80 * t) <= 2.0; });
    T[7] = admissible(std::min(T[6], (5.0 / 16.0) * inverse(g.g10)), [&](double t) { return g10 * t <= 5.0 / 16.0; });
    b.T_star = std::min(T[5], T[7]);
    return b;
}

std::vector<NamedVerdict> check_budget(const ExistenceBudget& b) {
    const auto g = budget_logs(b.R, b.k, b.L);
    const double c1 = std::exp(g.c1);
    const double a32 = std::exp(g.a32), a128 = std::exp(g.a128);
    const double b32 = std::exp(g.b32), b4 = std::exp(g.b4);
    const double g80 = std::exp(g.g80), g10 = std::exp(g.g10);
    const auto& T = b.T;

    std::vector<NamedVerdict> v;
    auto add = [&](std::string name, double lhs, double rhs) { v.push_back({std::move(name), make_verdict(lhs, rhs)}); };
    add("T1: exp(T1) <= 2", std::exp(T[0]), 2.0);
    add("T1: (1+L) 9 34^k R^2k T1 <= 1/2", c1 * T[0], 0.5);
    add("T2: ((1+L) 9 34^k R^2k + 2) T2 <= 2", (c1 + 2.0) * T[1], 2.0);
    add("T3: exp(32 (1+L) alpha R^2k T3) <= 2", std::exp(a32 * T[2]), 2.0);
    add("T3: 9k 34^(k-1) / alpha T3 <= 1/2", g.small * T[2], 0.5);
    add("T4: (128 (1+L) alpha R^2k + 9k 34^(k-1)/alpha) T4 <= 2", (a128 + g.small) * T[3], 2.0);
    add("T5: exp(32 (1+L) beta R^2k T5) <= 2", std::exp(b32 * T[4]), 2.0);
    add("T6: 4 (1+L) beta R^2k T6 <= 5/16", b4 * T[5], 5.0 / 16.0);
    add("T7: exp(80 (1+L) gamma R^2k T7) <= 2", std::exp(g80 * T[6]), 2.0);
    add("T8: 10 (1+L) gamma R^2k T8 <= 5/16", g10 * T[7], 5.0 / 16.0);
    add("T1 <= horizon", T[0], b.horizon);
    add("T2 <= T1", T[1], T[0]);
    add("T3 <= horizon", T[2], b.horizon);
    add("T4 <= T3", T[3], T[2]);
    add("T5 <= T0", T[4], b.T0);
    add("T6 <= T5", T[5], T[4]);
    add("T7 <= T0", T[6], b.T0);
    add("T8 <= T7", T[7], T[6]);
    add("T0 = min(T2, T4)", std::abs(b.T0 - std::min(T[1], T[3])), 0.0);
    add("T* = min(T6, T8)", std::abs(b.T_star - std::min(T[5], T[7])), 0.0);
    return v;
}

}  // namespace dispersive
