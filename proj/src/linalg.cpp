#include "splitsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace splitsd {

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vec scaled(const Vec& v, double a) {
    Vec r(v);
    for (auto& x : r) x *= a;
    return r;
}

Vec vadd(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Vec vsub(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

void SymMat::add_scaled(const SymMat& b, double c) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += c * b.a_[i];
}

void SymMat::scale(double c) {
    for (auto& x : a_) x *= c;
}

Vec SymMat::apply(const Vec& x) const {
    Vec y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double SymMat::frob_norm() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
}

double SymMat::max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::fabs(x));
    return m;
}

bool SymMat::finite() const {
    for (double x : a_)
        if (!std::isfinite(x)) return false;
    return true;
}

SymMat SymMat::symmetrized(int n, const std::vector<double>& row_major) {
    SymMat s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = 0.5 * (row_major[static_cast<std::size_t>(i) * n + j] +
                                    row_major[static_cast<std::size_t>(j) * n + i]);
            s.set(i, j, v);
        }
    return s;
}

namespace {

double off_diag_norm(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            const double v = a[static_cast<std::size_t>(p) * n + q];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

// first component of v that is not noise decides the sign
void fix_sign(Vec& v) {
    double amax = 0.0;
    for (double x : v) amax = std::max(amax, std::fabs(x));
    if (amax == 0.0) return;
    for (double x : v) {
        if (std::fabs(x) > 1e-12 * amax) {
            if (x < 0.0)
                for (auto& y : v) y = -y;
            return;
        }
    }
}

}  // namespace

std::vector<EigenPair> eig_sym(const SymMat& a) {
    const int n = a.n();
    if (n <= 0) throw std::invalid_argument("eig_sym: empty matrix");
    if (!a.finite()) throw std::invalid_argument("eig_sym: non-finite entry in input");

    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i) * n + j] = a.at(i, j);

    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto W = [&](int i, int j) -> double& { return w[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    const double target = 1e-12 * a.frob_norm();
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diag_norm(w, n) <= target) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = W(p, q);
                if (apq == 0.0) continue;
                const double theta = (W(q, q) - W(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double wkp = W(k, p), wkq = W(k, q);
                    W(k, p) = c * wkp - s * wkq;
                    W(k, q) = s * wkp + c * wkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double wpk = W(p, k), wqk = W(q, k);
                    W(p, k) = c * wpk - s * wqk;
                    W(q, k) = s * wpk + c * wqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return W(i, i) < W(j, j); });

    std::vector<EigenPair> pairs(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        const int col = order[static_cast<std::size_t>(r)];
        EigenPair& ep = pairs[static_cast<std::size_t>(r)];
        ep.value = W(col, col);
        ep.vector.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) ep.vector[static_cast<std::size_t>(k)] = V(k, col);
        const double nrm = norm2(ep.vector);
        for (auto& x : ep.vector) x /= nrm;
        fix_sign(ep.vector);
    }

    // residual guard: ||A v - lambda v|| must be solver-noise small
    const double scale = std::max(a.frob_norm(), 1e-300);
    for (const auto& ep : pairs) {
        Vec r = a.apply(ep.vector);
        axpy(-ep.value, ep.vector, r);
        if (norm2(r) > 1e-9 * scale)
            throw std::runtime_error("eig_sym: residual " + std::to_string(norm2(r)) +
                                     " exceeds tolerance; matrix may be ill-conditioned");
    }
    return pairs;
}

EigenPair min_eigenpair(const SymMat& a) { return eig_sym(a).front(); }

}  // namespace splitsd
