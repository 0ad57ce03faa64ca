#include "avgdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace avgdyn {

std::vector<double> Matrix::operator*(const std::vector<double>& x) const {
    std::vector<double> out(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        const double* row_ptr = row(r);
        double acc = 0.0;
        for (int c = 0; c < cols_; ++c) acc += row_ptr[c] * x[c];
        out[r] = acc;
    }
    return out;
}

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n <= 0) throw std::invalid_argument("graph needs at least one node");
    for (auto& e : edges_) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw std::invalid_argument("edge weight must be positive and finite");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw std::invalid_argument("duplicate edge");

    std::vector<int> deg(n, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        if (e.v != e.u) ++deg[e.v];
    }
    offsets_.assign(n + 1, 0);
    for (int u = 0; u < n; ++u) offsets_[u + 1] = offsets_[u] + deg[u];
    adj_nodes_.resize(offsets_[n]);
    adj_weights_.resize(offsets_[n]);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adj_nodes_[cursor[e.u]] = e.v;
        adj_weights_[cursor[e.u]++] = e.w;
        if (e.v != e.u) {
            adj_nodes_[cursor[e.v]] = e.u;
            adj_weights_[cursor[e.v]++] = e.w;
        }
    }

    volume_.assign(n, 0.0);
    for (int u = 0; u < n; ++u) {
        double vol = 0.0;
        for (int j = offsets_[u]; j < offsets_[u + 1]; ++j) vol += adj_weights_[j];
        volume_[u] = vol;
        total_volume_ += vol;
    }
    auto [mn, mx] = std::minmax_element(volume_.begin(), volume_.end());
    min_volume_ = *mn;
    max_volume_ = *mx;
    if (min_volume_ <= 0.0) throw std::invalid_argument("every node needs positive volume");
}

bool WeightedGraph::connected() const {
    if (n_ == 0) return false;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int j = offsets_[u]; j < offsets_[u + 1]; ++j) {
            int v = adj_nodes_[j];
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n_;
}

std::vector<double> WeightedGraph::apply_transition(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("state size mismatch");
    std::vector<double> out(n_, 0.0);
    for (int u = 0; u < n_; ++u) {
        double acc = 0.0;
        for (int j = offsets_[u]; j < offsets_[u + 1]; ++j)
            acc += adj_weights_[j] * x[adj_nodes_[j]];
        out[u] = acc / volume_[u];
    }
    return out;
}

Matrix WeightedGraph::transition_matrix() const {
    Matrix p(n_, n_);
    for (int u = 0; u < n_; ++u)
        for (int j = offsets_[u]; j < offsets_[u + 1]; ++j)
            p.at(u, adj_nodes_[j]) = adj_weights_[j] / volume_[u];
    return p;
}

WeightedGraph WeightedGraph::normalize_min_volume() const {
    std::vector<Edge> scaled = edges_;
    for (auto& e : scaled) e.w /= min_volume_;
    return WeightedGraph(n_, std::move(scaled));
}

WeightedGraph WeightedGraph::two_step_graph() const {
    // Dense accumulation per source node; two-step neighbourhoods fill in
    // quickly anyway on the graphs this is used for.
    std::vector<Edge> out;
    std::vector<double> acc(n_, 0.0);
    std::vector<int> touched;
    for (int u = 0; u < n_; ++u) {
        touched.clear();
        for (int j = offsets_[u]; j < offsets_[u + 1]; ++j) {
            int z = adj_nodes_[j];
            double wz = adj_weights_[j] / volume_[z];
            for (int l = offsets_[z]; l < offsets_[z + 1]; ++l) {
                int v = adj_nodes_[l];
                if (v < u) continue;  // emit each pair once
                if (acc[v] == 0.0) touched.push_back(v);
                acc[v] += wz * adj_weights_[l];
            }
        }
        for (int v : touched) {
            out.push_back({u, v, acc[v]});
            acc[v] = 0.0;
        }
    }
    return WeightedGraph(n_, std::move(out));
}

Partition::Partition(int n, int k, std::vector<int> assignment)
    : k_(k), assignment_(std::move(assignment)) {
    if (static_cast<int>(assignment_.size()) != n)
        throw std::invalid_argument("assignment size mismatch");
    if (k <= 0) throw std::invalid_argument("partition needs at least one block");
    blocks_.resize(k);
    for (int u = 0; u < n; ++u) {
        int b = assignment_[u];
        if (b < 0 || b >= k) throw std::invalid_argument("block index out of range");
        blocks_[b].push_back(u);
    }
    for (int i = 0; i < k; ++i)
        if (blocks_[i].empty()) throw std::invalid_argument("empty partition block");
}

int Partition::min_block_size() const {
    int m = num_nodes();
    for (const auto& b : blocks_) m = std::min(m, static_cast<int>(b.size()));
    return m;
}

int Partition::max_block_size() const {
    int m = 0;
    for (const auto& b : blocks_) m = std::max(m, static_cast<int>(b.size()));
    return m;
}

std::vector<double> block_volumes(const WeightedGraph& g, const Partition& p) {
    if (g.num_nodes() != p.num_nodes()) throw std::invalid_argument("partition size mismatch");
    std::vector<double> vols(p.num_blocks(), 0.0);
    for (int u = 0; u < g.num_nodes(); ++u) vols[p.block_of(u)] += g.volume(u);
    return vols;
}

std::vector<double> block_weights_of_node(const WeightedGraph& g, const Partition& p, int u) {
    std::vector<double> into(p.num_blocks(), 0.0);
    const int* nbr = g.neighbors(u);
    const double* w = g.weights(u);
    for (int j = 0; j < g.degree(u); ++j) into[p.block_of(nbr[j])] += w[j];
    return into;
}

RegularityResult is_volume_regular(const WeightedGraph& g, const Partition& p, double tol) {
    if (g.num_nodes() != p.num_nodes()) throw std::invalid_argument("partition size mismatch");
    const int k = p.num_blocks();
    // Reference ratios come from the first node of each block.
    std::vector<std::vector<double>> ref(k);
    std::vector<int> ref_node(k);
    for (int i = 0; i < k; ++i) {
        ref_node[i] = p.block(i).front();
        auto into = block_weights_of_node(g, p, ref_node[i]);
        ref[i].resize(k);
        for (int j = 0; j < k; ++j) ref[i][j] = into[j] / g.volume(ref_node[i]);
    }
    for (int i = 0; i < k; ++i) {
        for (int u : p.block(i)) {
            if (u == ref_node[i]) continue;
            auto into = block_weights_of_node(g, p, u);
            for (int j = 0; j < k; ++j) {
                double r = into[j] / g.volume(u);
                if (std::abs(r - ref[i][j]) > tol) {
                    RegularityResult res;
                    res.holds = false;
                    res.witness = RegularityWitness{i, j, ref_node[i], u, ref[i][j], r};
                    return res;
                }
            }
        }
    }
    return {true, std::nullopt};
}

RegularityResult is_ordinary_lumpable(const Matrix& transition, const Partition& p, double tol) {
    const int n = p.num_nodes();
    if (transition.rows() != n || transition.cols() != n)
        throw std::invalid_argument("transition size mismatch");
    const int k = p.num_blocks();
    auto row_into_blocks = [&](int u) {
        std::vector<double> into(k, 0.0);
        const double* row = transition.row(u);
        for (int v = 0; v < n; ++v) into[p.block_of(v)] += row[v];
        return into;
    };
    for (int i = 0; i < k; ++i) {
        int first = p.block(i).front();
        auto ref = row_into_blocks(first);
        for (int u : p.block(i)) {
            if (u == first) continue;
            auto into = row_into_blocks(u);
            for (int j = 0; j < k; ++j) {
                if (std::abs(into[j] - ref[j]) > tol) {
                    RegularityResult res;
                    res.holds = false;
                    res.witness = RegularityWitness{i, j, first, u, ref[j], into[j]};
                    return res;
                }
            }
        }
    }
    return {true, std::nullopt};
}

Matrix lumped_matrix(const WeightedGraph& g, const Partition& p, double tol) {
    auto reg = is_volume_regular(g, p, tol);
    if (!reg) throw std::invalid_argument("graph is not volume-regular at the given tolerance");
    const int k = p.num_blocks();
    Matrix lumped(k, k);
    for (int j = 0; j < k; ++j) {
        int u = p.block(j).front();
        auto into = block_weights_of_node(g, p, u);
        for (int i = 0; i < k; ++i) lumped.at(j, i) = into[i] / g.volume(u);
    }
    return lumped;
}

std::vector<double> lumped_eigenvalues(const Matrix& lumped, const std::vector<double>& block_vols) {
    const int k = lumped.rows();
    if (static_cast<int>(block_vols.size()) != k)
        throw std::invalid_argument("block volume count mismatch");
    // Detailed balance m_j P(j,i) = m_i P(i,j) makes D^{1/2} P D^{-1/2} symmetric.
    Matrix sym(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            sym.at(j, i) = std::sqrt(block_vols[j] / block_vols[i]) * lumped.at(j, i);
    // Symmetrize away the residual floating-point skew.
    for (int j = 0; j < k; ++j)
        for (int i = j + 1; i < k; ++i) {
            double m = 0.5 * (sym.at(j, i) + sym.at(i, j));
            sym.at(j, i) = m;
            sym.at(i, j) = m;
        }
    return jacobi_eigen(sym).values;
}

WeightedGraph graph_from_reversible_chain(const Matrix& transition, const std::vector<double>& pi,
                                          double tol) {
    const int n = transition.rows();
    if (transition.cols() != n || static_cast<int>(pi.size()) != n)
        throw std::invalid_argument("chain size mismatch");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u; v < n; ++v) {
            double wuv = pi[u] * transition.at(u, v);
            double wvu = pi[v] * transition.at(v, u);
            if (std::abs(wuv - wvu) > tol)
                throw std::invalid_argument("chain is not reversible for the given distribution");
            double w = 0.5 * (wuv + wvu);
            if (w > 0.0) edges.push_back({u, v, w});
        }
    }
    return WeightedGraph(n, std::move(edges));
}

std::optional<std::vector<int>> two_coloring(const WeightedGraph& g) {
    const int n = g.num_nodes();
    std::vector<int> side(n, -1);
    std::vector<int> queue;
    for (int start = 0; start < n; ++start) {
        if (side[start] >= 0) continue;
        side[start] = 0;
        queue.assign(1, start);
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            const int* nb = g.neighbors(u);
            for (int e = 0; e < g.degree(u); ++e) {
                int v = nb[e];
                if (v == u) return std::nullopt;  // self-loop: odd cycle
                if (side[v] < 0) {
                    side[v] = 1 - side[u];
                    queue.push_back(v);
                } else if (side[v] == side[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    return side;
}

} // namespace avgdyn
