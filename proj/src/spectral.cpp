#include "avgdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace avgdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orthonormal indicator basis in w-space: column j is D^{1/2} 1_{V_j} / sqrt(m_j).
Matrix indicator_basis(const SpectralSummary& s, const Partition& p,
                       const std::vector<double>& block_vols) {
    Matrix b(s.n, p.num_blocks());
    for (int u = 0; u < s.n; ++u)
        b.at(u, p.block_of(u)) = s.sqrt_volume[u] / std::sqrt(block_vols[p.block_of(u)]);
    return b;
}

} // namespace

SpectralSummary decompose(const WeightedGraph& g, int dense_limit) {
    const int n = g.num_nodes();
    if (n > dense_limit) throw std::invalid_argument("graph exceeds the dense eigensolver limit");
    if (!g.connected()) throw std::invalid_argument("decomposition expects a connected graph");

    SpectralSummary s;
    s.n = n;
    s.volume = g.volumes();
    s.total_volume = g.total_volume();
    s.sqrt_volume.resize(n);
    for (int u = 0; u < n; ++u) s.sqrt_volume[u] = std::sqrt(s.volume[u]);

    Matrix sym(n, n);
    for (const auto& e : g.edges()) {
        double val = e.w / (s.sqrt_volume[e.u] * s.sqrt_volume[e.v]);
        sym.at(e.u, e.v) = val;
        sym.at(e.v, e.u) = val;
    }
    auto eig = jacobi_eigen(sym);
    s.eigenvalues = std::move(eig.values);
    s.w_vectors = std::move(eig.vectors);

    s.max_residual = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int u = 0; u < n; ++u) {
            double acc = 0.0;
            const double* row = sym.row(u);
            for (int v = 0; v < n; ++v) acc += row[v] * s.w_vectors.at(v, j);
            s.max_residual =
                std::max(s.max_residual, std::abs(acc - s.eigenvalues[j] * s.w_vectors.at(u, j)));
        }
    }

    s.p_vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        int pivot = 0;
        double best = 0.0;
        for (int u = 0; u < n; ++u) {
            double val = s.w_vectors.at(u, j) / s.sqrt_volume[u];
            s.p_vectors.at(u, j) = val;
            if (std::abs(val) > best) {
                best = std::abs(val);
                pivot = u;
            }
        }
        double scale = s.p_vectors.at(pivot, j);
        for (int u = 0; u < n; ++u) s.p_vectors.at(u, j) /= scale;
    }
    return s;
}

std::vector<double> state_coefficients(const SpectralSummary& s, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != s.n) throw std::invalid_argument("state size mismatch");
    std::vector<double> alpha(s.n);
    for (int j = 0; j < s.n; ++j) {
        double num = 0.0, den = 0.0;
        for (int u = 0; u < s.n; ++u) {
            double dv = s.volume[u] * s.p_vectors.at(u, j);
            num += x[u] * dv;
            den += s.p_vectors.at(u, j) * dv;
        }
        alpha[j] = num / den;
    }
    return alpha;
}

std::vector<double> reconstruct_state(const SpectralSummary& s, const std::vector<double>& alpha,
                                      int t) {
    std::vector<double> x(s.n, 0.0);
    for (int j = 0; j < s.n; ++j) {
        double coeff = alpha[j] * std::pow(s.eigenvalues[j], t);
        if (coeff == 0.0) continue;
        for (int u = 0; u < s.n; ++u) x[u] += coeff * s.p_vectors.at(u, j);
    }
    return x;
}

double spectrum_symmetry_defect(const SpectralSummary& s) {
    double defect = 0.0;
    for (int i = 0; i < s.n; ++i)
        defect = std::max(defect, std::abs(s.eigenvalues[i] + s.eigenvalues[s.n - 1 - i]));
    return defect;
}

StepwiseAnalysis stepwise_flags(const SpectralSummary& s, const Partition& p, double group_tol,
                                double flag_tol) {
    const int n = s.n;
    const int k = p.num_blocks();
    std::vector<double> block_vols(k, 0.0);
    for (int u = 0; u < n; ++u) block_vols[p.block_of(u)] += s.volume[u];
    Matrix b = indicator_basis(s, p, block_vols);

    StepwiseAnalysis out;
    out.flags.assign(n, 0);

    std::vector<std::vector<double>> basis_cols;
    int lo = 0;
    while (lo < n) {
        int hi = lo;
        while (hi + 1 < n && std::abs(s.eigenvalues[hi + 1] - s.eigenvalues[hi]) <= group_tol) ++hi;
        const int g = hi - lo + 1;

        // m = W_G^T B (g x k), then the k x k Gram m^T m; singular values near
        // 1 are directions the eigenspace shares with the indicator span.
        Matrix m(g, k);
        for (int r = 0; r < g; ++r)
            for (int c = 0; c < k; ++c) {
                double acc = 0.0;
                for (int u = 0; u < n; ++u) acc += s.w_vectors.at(u, lo + r) * b.at(u, c);
                m.at(r, c) = acc;
            }
        Matrix gram(k, k);
        for (int a = 0; a < k; ++a)
            for (int c = a; c < k; ++c) {
                double acc = 0.0;
                for (int r = 0; r < g; ++r) acc += m.at(r, a) * m.at(r, c);
                gram.at(a, c) = acc;
                gram.at(c, a) = acc;
            }
        auto gram_eig = jacobi_eigen(gram);

        EigenGroup group{lo, hi, 0};
        for (int l = 0; l < k && l < g; ++l) {
            double sigma = std::sqrt(std::max(gram_eig.values[l], 0.0));
            if (sigma < 1.0 - flag_tol) break;
            // Direction in w-space: W_G (m v_l) / sigma.
            std::vector<double> col(n, 0.0);
            for (int r = 0; r < g; ++r) {
                double coeff = 0.0;
                for (int c = 0; c < k; ++c) coeff += m.at(r, c) * gram_eig.vectors.at(c, l);
                coeff /= sigma;
                if (coeff == 0.0) continue;
                for (int u = 0; u < n; ++u) col[u] += coeff * s.w_vectors.at(u, lo + r);
            }
            basis_cols.push_back(std::move(col));
            out.stepwise_group_of.push_back(static_cast<int>(out.groups.size()));
            ++group.stepwise_dim;
        }
        for (int r = 0; r < group.stepwise_dim; ++r) out.flags[lo + r] = 1;
        out.groups.push_back(group);
        lo = hi + 1;
    }

    out.stepwise_total = static_cast<int>(basis_cols.size());
    out.stepwise_basis = Matrix(n, out.stepwise_total);
    for (int c = 0; c < out.stepwise_total; ++c)
        for (int u = 0; u < n; ++u) out.stepwise_basis.at(u, c) = basis_cols[c][u];
    return out;
}

ClusteredCheck is_cluster_impl(const WeightedGraph& g, const Partition& p,
                               const SpectralSummary& s, double vr_tol, double group_tol,
                               double flag_tol) {
    ClusteredCheck out;
    out.volume_regular = static_cast<bool>(is_volume_regular(g, p, vr_tol));
    const int n = s.n;
    const int k = p.num_blocks();

    auto analysis = stepwise_flags(s, p, group_tol, flag_tol);

    // Keep stepwise directions from groups that overlap the top-k band,
    // clipped to the number of top-k indices the group occupies.
    std::vector<int> keep;
    for (int col = 0, g_idx = 0; g_idx < static_cast<int>(analysis.groups.size()); ++g_idx) {
        const auto& grp = analysis.groups[g_idx];
        int overlap = std::max(0, std::min(grp.hi, k - 1) - grp.lo + 1);
        int used = 0;
        for (int c = 0; c < grp.stepwise_dim; ++c, ++col)
            if (used < overlap) {
                keep.push_back(col);
                out.stepwise_indices.push_back(grp.lo + c);
                ++used;
            }
    }
    out.stepwise_in_top_k = static_cast<int>(keep.size());

    std::vector<double> block_vols(k, 0.0);
    for (int u = 0; u < n; ++u) block_vols[p.block_of(u)] += s.volume[u];
    Matrix b = indicator_basis(s, p, block_vols);
    out.indicator_residuals.assign(k, 0.0);
    for (int j = 0; j < k; ++j) {
        double norm_sq = 1.0;
        for (int idx : keep) {
            double dot = 0.0;
            for (int u = 0; u < n; ++u) dot += b.at(u, j) * analysis.stepwise_basis.at(u, idx);
            norm_sq -= dot * dot;
        }
        out.indicator_residuals[j] = std::sqrt(std::max(norm_sq, 0.0));
        out.max_indicator_residual = std::max(out.max_indicator_residual, out.indicator_residuals[j]);
    }

    out.clustered = out.volume_regular && out.stepwise_in_top_k >= k &&
                    out.max_indicator_residual <= flag_tol;
    return out;
}

ClusteredCheck is_clustered_volume_regular(const WeightedGraph& g, const Partition& p,
                                           const SpectralSummary& s, double vr_tol,
                                           double group_tol, double flag_tol) {
    if (g.num_nodes() != s.n || p.num_nodes() != s.n)
        throw std::invalid_argument("summary does not match graph or partition");
    return is_cluster_impl(g, p, s, vr_tol, group_tol, flag_tol);
}

ChiBasis chi_basis(const WeightedGraph& g, const Partition& p) {
    if (g.num_nodes() != p.num_nodes()) throw std::invalid_argument("partition size mismatch");
    const int k = p.num_blocks();
    const int n = g.num_nodes();
    ChiBasis basis;
    basis.block_volumes = block_volumes(g, p);
    basis.chi = Matrix(n, std::max(k - 1, 0));
    basis.d_norm_sq.resize(std::max(k - 1, 0));
    double tail = 0.0;
    for (int i = k - 1; i >= 1; --i) {
        tail += basis.block_volumes[i];
        double m_i = basis.block_volumes[i - 1];
        double up = std::sqrt(tail / m_i);
        double down = -std::sqrt(m_i / tail);
        for (int u = 0; u < n; ++u) {
            int b = p.block_of(u);
            if (b == i - 1)
                basis.chi.at(u, i - 1) = up;
            else if (b >= i)
                basis.chi.at(u, i - 1) = down;
        }
        basis.d_norm_sq[i - 1] = m_i + tail;
    }
    return basis;
}

std::vector<double> chi_coefficients(const ChiBasis& basis, const WeightedGraph& g,
                                     const std::vector<double>& x) {
    const int n = g.num_nodes();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("state size mismatch");
    const int cols = basis.chi.cols();
    std::vector<double> gamma(cols, 0.0);
    for (int c = 0; c < cols; ++c) {
        double acc = 0.0;
        for (int u = 0; u < n; ++u) acc += x[u] * g.volume(u) * basis.chi.at(u, c);
        gamma[c] = acc / basis.d_norm_sq[c];
    }
    return gamma;
}

std::vector<double> y_vector(const ChiBasis& basis, const std::vector<double>& gamma) {
    const int n = basis.chi.rows();
    std::vector<double> y(n, 0.0);
    for (int c = 0; c < basis.chi.cols(); ++c)
        for (int u = 0; u < n; ++u) y[u] += gamma[c] * basis.chi.at(u, c);
    return y;
}

HypothesisReport check_hypotheses(const WeightedGraph& g, const Partition& p,
                                  const SpectralSummary& s) {
    HypothesisReport r;
    r.n = s.n;
    r.k = p.num_blocks();
    r.scale_factor = g.min_volume();
    r.volume_ratio = g.volume_ratio();
    r.n_min = p.min_block_size();
    r.n_max = p.max_block_size();
    r.connected = g.connected();

    if (r.k < 2 || s.n < r.k + 1)
        throw std::invalid_argument("hypothesis check needs k >= 2 and n > k");
    r.lambda_2 = s.eigenvalues[1];
    r.lambda_k = s.eigenvalues[r.k - 1];
    r.lambda_k1 = s.eigenvalues[r.k];
    r.lambda_k1_positive = r.lambda_k1 > 0.0;

    r.clustered = is_clustered_volume_regular(g, p, s).clustered;

    const double delta = r.volume_ratio;
    const double n = static_cast<double>(s.n);
    const double gap = 1.0 - r.lambda_2;
    const double abs_k1 = std::abs(r.lambda_k1);

    r.spread_ok = r.lambda_k >= (7.0 * r.lambda_2 - 5.0) / 2.0;
    r.size_ok = delta <= std::sqrt(static_cast<double>(r.n_min)) / 25.0;
    r.balance_ok = 2.0 * delta * (static_cast<double>(r.n_max) / r.n_min) < r.k &&
                   r.k <= std::sqrt(n);

    double log_ratio = (abs_k1 == 0.0) ? kInf
                       : (r.lambda_k > 0.0 ? std::log(r.lambda_k / abs_k1) : -kInf);
    r.gap_ok = gap <= r.lambda_k * log_ratio / (7.0 * std::log(2.0 * delta * n));

    if (log_ratio <= 0.0) {
        r.t1 = kInf;  // no separation below the stepwise band; the window never opens
    } else if (log_ratio == kInf) {
        r.t1 = 0.0;
    } else {
        r.t1 = std::log(2.0 * std::sqrt(delta * n) * delta * n / gap) / log_ratio;
        r.t1 = std::max(r.t1, 0.0);
    }

    if (r.lambda_2 - r.lambda_k <= 1e-12 * std::max(1.0, std::abs(r.lambda_2))) {
        r.t2 = kInf;  // equal extremes decay in lockstep, the window never closes
        r.t2_infinite = true;
    } else {
        r.t2 = r.lambda_k / (2.0 * gap);
    }
    r.window_nonempty = r.t1 <= r.t2 && std::isfinite(r.t1);
    r.hypotheses_ok =
        r.connected && r.clustered && r.spread_ok && r.gap_ok && r.lambda_k1_positive;
    r.regime_ok = r.size_ok && r.balance_ok;
    return r;
}

CheegerFloor cheeger_floor(const SpectralSummary& s, const WeightedGraph& g) {
    CheegerFloor out;
    // The raw max volume is the Delta of the write-up when the scale has
    // min volume 1; the max with the volume ratio keeps the floor valid for
    // graphs scaled below that.
    double delta = std::max(g.max_volume(), g.volume_ratio());
    double n = static_cast<double>(g.num_nodes());
    out.floor = 1.0 / (2.0 * delta * delta * n * n);
    out.gap = 1.0 - s.eigenvalues[1];
    out.holds = out.gap >= out.floor;
    return out;
}

} // namespace avgdyn
