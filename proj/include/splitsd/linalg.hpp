#pragma once

#include <cstddef>
#include <vector>

#include "splitsd/rng.hpp"

namespace splitsd {

bool all_finite(const Vec& v);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
// y += a * x
void axpy(double a, const Vec& x, Vec& y);
Vec scaled(const Vec& v, double a);
Vec vadd(const Vec& a, const Vec& b);
Vec vsub(const Vec& a, const Vec& b);

// Dense symmetric matrix. Full row-major storage; every mutator writes both
// (i,j) and (j,i), so A[i][j] == A[j][i] holds exactly at all times.
class SymMat {
public:
    SymMat() = default;
    explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    int n() const { return n_; }
    double at(int i, int j) const { return a_[idx(i, j)]; }
    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }
    // adds v at (i,j) and (j,i); once on the diagonal
    void add_sym(int i, int j, double v) {
        a_[idx(i, j)] += v;
        if (i != j) a_[idx(j, i)] += v;
    }
    void add_scaled(const SymMat& b, double c);
    void scale(double c);

    Vec apply(const Vec& x) const;
    double frob_norm() const;
    double max_abs() const;
    bool finite() const;

    bool operator==(const SymMat& o) const { return n_ == o.n_ && a_ == o.a_; }

    // builds (M + M^T)/2 from an arbitrary square matrix in row-major order
    static SymMat symmetrized(int n, const std::vector<double>& row_major);

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * n_ + j;
    }
    int n_ = 0;
    std::vector<double> a_;
};

struct EigenPair {
    double value = 0.0;
    Vec vector;  // unit norm, first nonzero component positive
};

// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Pairs come back ascending by eigenvalue (ties keep solver column order);
// each eigenvector has unit norm and its first nonzero component is made
// positive so results are reproducible bit-for-bit on repeated calls.
// Converges when the off-diagonal Frobenius norm drops below 1e-12 * ||A||_F,
// capped at 100 sweeps. Throws std::invalid_argument on non-finite input.
std::vector<EigenPair> eig_sym(const SymMat& a);

// The smallest eigenpair; equal to eig_sym(a).front(). Named entry point so
// an iterative method could replace it later without touching callers.
EigenPair min_eigenpair(const SymMat& a);

}  // namespace splitsd
