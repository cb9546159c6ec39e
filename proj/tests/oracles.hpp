// Test-only reference implementations, kept independent of the library's
// computation paths: brute-force tensor products, an RK4 integrator, Pade
// matrix exponentials, finite-difference gradients, and log-log slope fits.
#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "trotter/types.hpp"

namespace oracle {

using trotter::cxd;
using trotter::Mat;
using trotter::Vec;

// Full 2^L operator as an explicit product over per-site factors:
// entry (r, c) = prod_j factor_j(bit_j(r), bit_j(c)), site 1 = MSB.
inline Mat site_factor_product(const std::vector<Mat>& factors) {
    const int L = int(factors.size());
    const Eigen::Index dim = Eigen::Index(1) << L;
    Mat out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) {
            cxd v{1.0, 0.0};
            for (int j = 1; j <= L; ++j) {
                const int br = int((r >> (L - j)) & 1);
                const int bc = int((c >> (L - j)) & 1);
                v *= factors[size_t(j - 1)](br, bc);
            }
            out(r, c) = v;
        }
    return out;
}

// Embed a single-site operator at `site` into L sites.
inline Mat embed1(const Mat& op, int site, int L) {
    std::vector<Mat> factors(size_t(L), trotter::identity2());
    factors[size_t(site - 1)] = op;
    return site_factor_product(factors);
}

// Embed a two-site factorized operator a_site ⊗ b_site.
inline Mat embed2(const Mat& a, int site_a, const Mat& b, int site_b, int L) {
    std::vector<Mat> factors(size_t(L), trotter::identity2());
    factors[size_t(site_a - 1)] = a;
    factors[size_t(site_b - 1)] = b;
    return site_factor_product(factors);
}

// Classic RK4 for i d/dt psi = H psi.
inline Vec rk4_evolve(const Mat& h, Vec psi, double t_final, double step) {
    const cxd minus_i{0.0, -1.0};
    const long n_steps = std::lround(t_final / step);
    for (long n = 0; n < n_steps; ++n) {
        const Vec k1 = minus_i * (h * psi);
        const Vec k2 = minus_i * (h * (psi + 0.5 * step * k1));
        const Vec k3 = minus_i * (h * (psi + 0.5 * step * k2));
        const Vec k4 = minus_i * (h * (psi + step * k3));
        psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

// Pade-based exp(-i s H), independent of the eigendecomposition route.
inline Mat pade_exponential(const Mat& h, double s) {
    return (cxd(0.0, -s) * h).exp();
}

inline Vec random_state(Eigen::Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cxd(normal(rng), normal(rng));
    v /= v.norm();
    return v;
}

// Least-squares slope of log(y) vs log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

// Central finite difference of a scalar function of a real vector.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        g(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

// Five-point central stencil, O(h^4) truncation.
inline Eigen::VectorXd five_point_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                             const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        auto at = [&](double delta) {
            Eigen::VectorXd xi = x;
            xi(i) += delta;
            return f(xi);
        };
        g(i) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12.0 * h);
    }
    return g;
}

}  // namespace oracle
