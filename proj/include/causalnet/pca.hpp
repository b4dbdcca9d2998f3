#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "causalnet/concept_net.hpp"
#include "causalnet/errors.hpp"
#include "causalnet/linalg.hpp"

namespace causalnet {

// Real-valued network produced by the PCA: one per retained component.
struct score_graph {
    std::string label;
    std::vector<std::string> nodes;
    dense_matrix weights;  // order x order

    double at(std::size_t i, std::size_t j) const { return weights(i, j); }
};

// Covariance between aligned valued graphs over their vectorized
// off-diagonal cells (self-loops excluded, N-1 divisor).
inline dense_matrix graph_covariance(const std::vector<concept_net>& nets) {
    const std::size_t p = nets.size();
    if (p < 2)
        throw usage_error("graph_covariance: need at least two graphs");
    const std::size_t n = nets[0].order();
    for (const auto& g : nets)
        if (g.nodes != nets[0].nodes)
            throw data_error("graph_covariance: node set mismatch in stratum " +
                             g.stratum.label());
    const std::size_t cells = n * (n - 1);
    if (cells < 2)
        throw usage_error("graph_covariance: graphs too small");

    std::vector<std::vector<double>> vec(p);
    for (std::size_t g = 0; g < p; ++g) {
        vec[g].reserve(cells);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    vec[g].push_back(static_cast<double>(nets[g].at(i, j)));
    }
    std::vector<double> mean(p, 0.0);
    for (std::size_t g = 0; g < p; ++g) {
        for (double v : vec[g])
            mean[g] += v;
        mean[g] /= static_cast<double>(cells);
    }
    dense_matrix C(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a; b < p; ++b) {
            double s = 0.0;
            for (std::size_t c = 0; c < cells; ++c)
                s += (vec[a][c] - mean[a]) * (vec[b][c] - mean[b]);
            C(a, b) = C(b, a) = s / static_cast<double>(cells - 1);
        }
    return C;
}

inline eigen_result eigen_sym(const dense_matrix& C) {
    return jacobi_eigen_sym(C);
}

struct pca_options {
    std::size_t components = 2;   // retained score graphs
    bool centered_scores = false;  // subtract each graph's off-diagonal mean first
    bool scale_loadings = false;   // export loadings scaled by sqrt(eigenvalue)
};

struct pca_result {
    std::vector<std::string> graph_labels;
    dense_matrix covariance;          // p x p
    std::vector<double> eigenvalues;  // descending
    dense_matrix loadings;            // column k = unit-norm loadings on component k
    std::vector<score_graph> score_graphs;
    pca_options options;

    // loadings scaled by sqrt(lambda); the usual biplot convention
    dense_matrix scaled_loadings() const {
        dense_matrix out = loadings;
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
            const double s = std::sqrt(std::max(0.0, eigenvalues[k]));
            for (std::size_t i = 0; i < out.rows; ++i)
                out(i, k) *= s;
        }
        return out;
    }
};

// PCA of a set of cell-aligned valued graphs. Loadings are the
// eigenvectors of the graph covariance; the component-k score graph is
// the loadings-weighted sum of the input graphs (raw by default).
inline pca_result network_pca(const std::vector<concept_net>& nets, pca_options opt = {}) {
    pca_result res;
    res.options = opt;
    res.covariance = graph_covariance(nets);
    const auto eig = eigen_sym(res.covariance);
    res.eigenvalues = eig.values;
    res.loadings = eig.vectors;
    for (const auto& g : nets)
        res.graph_labels.push_back(g.stratum.label());

    const std::size_t p = nets.size();
    const std::size_t n = nets[0].order();
    const std::size_t retained = std::min(opt.components, p);
    std::vector<double> offdiag_mean(p, 0.0);
    if (opt.centered_scores) {
        for (std::size_t g = 0; g < p; ++g) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j)
                        offdiag_mean[g] += static_cast<double>(nets[g].at(i, j));
            offdiag_mean[g] /= static_cast<double>(n * (n - 1));
        }
    }
    for (std::size_t k = 0; k < retained; ++k) {
        score_graph sg;
        sg.label = "pc" + std::to_string(k + 1);
        sg.nodes = nets[0].nodes;
        sg.weights = dense_matrix(n, n);
        for (std::size_t g = 0; g < p; ++g) {
            const double w = res.loadings(g, k);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    sg.weights(i, j) +=
                        w * (static_cast<double>(nets[g].at(i, j)) -
                             (opt.centered_scores && i != j ? offdiag_mean[g] : 0.0));
        }
        res.score_graphs.push_back(std::move(sg));
    }
    return res;
}

// first k eigenvalues, largest first
inline std::vector<double> scree(const pca_result& res, std::size_t k) {
    if (k > res.eigenvalues.size())
        throw usage_error("scree: k exceeds the number of components");
    return std::vector<double>(res.eigenvalues.begin(), res.eigenvalues.begin() + k);
}

}  // namespace causalnet
