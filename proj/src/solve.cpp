#include "restframe/solve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace restframe {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::VectorXd eval(const ResidualFn& f, const std::vector<double>& x) {
    auto r = f(x);
    return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

}  // namespace

std::vector<double> newton_solve(const ResidualFn& residual, std::vector<double> x0, double tol,
                                 int max_iter) {
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
    Eigen::VectorXd r = eval(residual, x0);
    const int m = static_cast<int>(r.size());
    double rnorm = r.norm();

    for (int it = 0; it < max_iter; ++it) {
        if (!all_finite(r)) break;
        if (r.lpNorm<Eigen::Infinity>() <= tol)
            return std::vector<double>(x.data(), x.data() + n);

        Eigen::MatrixXd J(m, n);
        for (int j = 0; j < n; ++j) {
            double h = 1e-7 * (1.0 + std::abs(x[j]));
            std::vector<double> xp(x.data(), x.data() + n);
            xp[j] += h;
            J.col(j) = (eval(residual, xp) - r) / h;
        }
        Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
        if (!all_finite(step)) break;

        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            Eigen::VectorXd xt = x + lambda * step;
            Eigen::VectorXd rt = eval(residual, std::vector<double>(xt.data(), xt.data() + n));
            if (all_finite(rt) && rt.norm() < rnorm) {
                x = xt;
                r = rt;
                rnorm = rt.norm();
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (rnorm <= tol) return std::vector<double>(x.data(), x.data() + n);

    char msg[128];
    std::snprintf(msg, sizeof msg, "newton did not converge: last residual norm %.3e", rnorm);
    throw std::runtime_error(msg);
}

FitResult least_squares_fit(const ModelFn& model, std::vector<double> params0, const FitData& data,
                            double tol, int max_iter) {
    if (data.x.size() != data.y.size() || data.x.empty())
        throw std::invalid_argument("fit data must be nonempty x/y pairs of equal length");
    const int np = static_cast<int>(params0.size());
    const int nd = static_cast<int>(data.x.size());

    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(params0.data(), np);
    auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& out) {
        out.resize(nd);
        std::span<const double> qs(q.data(), static_cast<std::size_t>(np));
        for (int i = 0; i < nd; ++i) out[i] = model(data.x[i], qs) - data.y[i];
        return out.allFinite();
    };

    Eigen::VectorXd r;
    if (!residuals(p, r)) throw std::runtime_error("degenerate fit");
    double cost = r.squaredNorm();

    double lambda = 1e-3;
    int rejected_in_row = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::MatrixXd J(nd, np);
        for (int j = 0; j < np; ++j) {
            double h = 1e-7 * (1.0 + std::abs(p[j]));
            Eigen::VectorXd q = p;
            q[j] += h;
            Eigen::VectorXd rj;
            if (!residuals(q, rj)) {
                rj = r;  // flat column; degeneracy handled below
            }
            J.col(j) = (rj - r) / h;
        }
        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * r;

        if (g.lpNorm<Eigen::Infinity>() <= tol * (1.0 + std::sqrt(cost))) break;
        if (A.diagonal().maxCoeff() <= 0) throw std::runtime_error("degenerate fit");

        Eigen::MatrixXd Ad = A;
        for (int j = 0; j < np; ++j) {
            if (Ad(j, j) == 0) throw std::runtime_error("degenerate fit");
            Ad(j, j) *= (1.0 + lambda);
        }
        Eigen::VectorXd step = Ad.ldlt().solve(-g);

        Eigen::VectorXd pt = p + step;
        Eigen::VectorXd rt;
        bool ok = step.allFinite() && residuals(pt, rt);
        if (ok && rt.squaredNorm() < cost) {
            double dp = (pt - p).lpNorm<Eigen::Infinity>();
            p = pt;
            r = rt;
            cost = rt.squaredNorm();
            lambda = std::max(lambda * 0.1, 1e-12);
            rejected_in_row = 0;
            if (dp <= tol * (1.0 + p.lpNorm<Eigen::Infinity>())) break;
        } else {
            // a finite step below the forward-difference resolution that
            // leaves the cost unchanged at double precision is the basin
            // floor, not degeneracy
            if (ok && step.lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + p.lpNorm<Eigen::Infinity>()) &&
                rt.squaredNorm() <= cost * (1.0 + 1e-12))
                break;
            lambda *= 10.0;
            if (++rejected_in_row > 12) throw std::runtime_error("degenerate fit");
        }
    }

    FitResult out;
    out.params.assign(p.data(), p.data() + np);
    out.residuals.assign(r.data(), r.data() + nd);
    out.rms = std::sqrt(cost / nd);
    out.iterations = it;
    return out;
}

}  // namespace restframe
