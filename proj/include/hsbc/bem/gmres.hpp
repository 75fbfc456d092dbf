#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace hsbc::bem {

struct GmresOptions {
    int restart = 60;
    int max_iterations = 2000;
    double tolerance = 1e-12; // on ||b - A x|| / ||b||
};

struct GmresResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double residual = 0.0; // relative, recomputed explicitly at exit
    bool converged = false;
};

/// Restarted GMRES(m) with modified Gram-Schmidt and Givens rotations.
/// `apply(v)` returns A v.
template <class Apply>
GmresResult gmres(Apply &&apply, const Eigen::VectorXd &b, Eigen::VectorXd x, const GmresOptions &opts = {}) {
    using Eigen::VectorXd;
    const Eigen::Index n = b.size();
    GmresResult res;
    const double bnorm = b.norm();
    if (x.size() != n) x = VectorXd::Zero(n);
    if (bnorm == 0.0) {
        res.x = VectorXd::Zero(n);
        res.converged = true;
        return res;
    }
    const int m = std::max(1, std::min<int>(opts.restart, static_cast<int>(n)));

    VectorXd r = b - apply(x);
    double beta = r.norm();
    while (res.iterations < opts.max_iterations && beta / bnorm > opts.tolerance) {
        std::vector<VectorXd> V;
        V.reserve(m + 1);
        V.push_back(r / beta);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        VectorXd cs = VectorXd::Zero(m), sn = VectorXd::Zero(m), g = VectorXd::Zero(m + 1);
        g(0) = beta;
        int k = 0;
        for (; k < m && res.iterations < opts.max_iterations; ++k) {
            ++res.iterations;
            VectorXd w = apply(V[k]);
            for (int i = 0; i <= k; ++i) {
                H(i, k) = V[i].dot(w);
                w -= H(i, k) * V[i];
            }
            H(k + 1, k) = w.norm();
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
                H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
                H(i, k) = t;
            }
            const double den = std::hypot(H(k, k), H(k + 1, k));
            cs(k) = den == 0.0 ? 1.0 : H(k, k) / den;
            sn(k) = den == 0.0 ? 0.0 : H(k + 1, k) / den;
            H(k, k) = den;
            H(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            const bool happy = w.norm() <= 1e-14 * bnorm;
            if (!happy) V.push_back(w / w.norm());
            if (std::abs(g(k + 1)) / bnorm <= opts.tolerance || happy) {
                ++k;
                break;
            }
        }
        // back substitution on the k x k triangle
        VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        for (int i = 0; i < k; ++i) x += y(i) * V[i];
        r = b - apply(x);
        const double next = r.norm();
        if (!(next < beta) && next / bnorm > opts.tolerance) {
            beta = next;
            break; // stagnation
        }
        beta = next;
    }
    res.x = std::move(x);
    res.residual = beta / bnorm;
    res.converged = res.residual <= opts.tolerance;
    return res;
}

} // namespace hsbc::bem
