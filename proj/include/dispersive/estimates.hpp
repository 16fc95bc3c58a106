#pragma once

#include "dispersive/grid.hpp"
#include "dispersive/linear.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace dispersive {

/// lhs <= rhs, with slack = rhs - lhs.
struct InequalityVerdict {
    double lhs = 0;
    double rhs = 0;
    bool satisfied = true;
    double slack = 0;
};

/// Builds a verdict; satisfied iff slack >= -1e-12 (|rhs| + 1).
InequalityVerdict make_verdict(double lhs, double rhs);

/// Discrete Gagliardo-Nirenberg check for u in H_0^l:
/// ||u||_inf <= c ||D^l u||^{1/(2l)} ||u||^{1-1/(2l)}, c = sqrt(2) by default.
InequalityVerdict gn_check(const GridFunction<double>& u, int l, double constant = 1.4142135623730951);

struct InterpolationCheck {
    double best_a1 = 0;         // smallest A1 that works for this u with the given A2
    InequalityVerdict verdict;  // against the supplied (A1, A2)
};

/// ||D^i u|| <= A1 ||D^m u||^{i/m} ||u||^{1-i/m} + A2 ||u||, 0 < i < m.
InterpolationCheck interpolation_check(const GridFunction<double>& u, int m, int i, double a1, double a2 = 1.0);

/// Largest best_A1 over a corpus, scaled by `margin`.
double calibrate_interpolation(std::span<const GridFunction<double>> corpus, int m, int i, double a2 = 1.0,
                               double margin = 1.0);

/// |v1^k - v2^k| <= k 2^{k-1} (|v1|^{k-1} + |v2|^{k-1}) |v1 - v2|.
InequalityVerdict tvm_check(double v1, double v2, int k);

/// Energy balance of the weighted multiplier 2(1+x)u at interior time samples:
/// d/dt (1+x, u^2) + sum_j (2j+1) ||D^j u||^2 + (D^l u(0))^2 + 2 (u^k Du, (1+x) u).
/// Entry m-1 belongs to sample m, m = 1..M-1.
std::vector<double> energy_residual(const Trajectory<double>& u, int k, int l);

/// Same balance with the time derivative supplied directly (zero for a frozen state).
double energy_balance_terms(const GridFunction<double>& u, int k, int l);

/// Smallest R with (1+L)(1+l)(2^k ||u0||_{H^l}^{2(k+1)} + ||u0||_{H^{2l+1}}^2) <= R^2.
double radius(const GridFunction<double>& u0, int k, int l);

/// The constants and time conditions of the local existence argument.
struct ExistenceBudget {
    int k = 1;
    int l = 1;
    double L = 1;
    double R = 0;
    double horizon = 1;
    double alpha_k = 0;
    double beta_k = 0;
    double gamma_k = 0;
    std::array<double, 8> T{};  // T[0] = T1 .. T[7] = T8
    double T0 = 0;
    double T_star = 0;
};

double alpha_k(int k);
double beta_k(int k);
double gamma_k(int k);

/// Largest admissible T1..T8 for the printed conditions, T0 = min(T2, T4), T* = min(T6, T8).
ExistenceBudget existence_time(double R, int k, int l, double L, double horizon);

struct NamedVerdict {
    std::string name;
    InequalityVerdict verdict;
};

/// Re-substitutes every T_i into its conditions and chain constraints.
std::vector<NamedVerdict> check_budget(const ExistenceBudget& b);

}  // namespace dispersive
