#include "avgdyn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace avgdyn {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(2.0 * s);
}

} // namespace

EigenDecomposition jacobi_eigen(const Matrix& sym, double tol, int max_sweeps) {
    const int n = sym.rows();
    if (sym.cols() != n) throw std::invalid_argument("matrix must be square");
    Matrix a = sym;
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += a.at(i, j) * a.at(i, j);
    frob = std::sqrt(frob);
    const double stop = tol * std::max(frob, 1.0);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (std::abs(apq) <= stop / (static_cast<double>(n) * n)) continue;
                double app = a.at(p, p);
                double aqq = a.at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);

                a.at(p, p) = app - t * apq;
                a.at(q, q) = aqq + t * apq;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        double aip = a.at(i, p);
                        double aiq = a.at(i, q);
                        a.at(i, p) = aip - s * (aiq + tau * aip);
                        a.at(i, q) = aiq + s * (aip - tau * aiq);
                        a.at(p, i) = a.at(i, p);
                        a.at(q, i) = a.at(i, q);
                    }
                    double vip = v.at(i, p);
                    double viq = v.at(i, q);
                    v.at(i, p) = vip - s * (viq + tau * vip);
                    v.at(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a.at(x, x) > a.at(y, y); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        int src = order[j];
        out.values[j] = a.at(src, src);
        // Fixed sign convention keeps serialized output stable: the entry of
        // largest magnitude (lowest index on ties) is made positive.
        int pivot = 0;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            double mag = std::abs(v.at(i, src));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        double sign = v.at(pivot, src) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.vectors.at(i, j) = sign * v.at(i, src);
    }
    return out;
}

} // namespace avgdyn
