#include "ifskit/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ifskit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(const DiscreteMeasure& m, const char* who) {
    if (std::abs(m.total_mass() - 1.0) > 1e-12)
        throw std::domain_error(std::string(who) + ": input measure is not normalized");
}

/// Exact solver for the balanced transportation problem
///     min sum_ij c_ij x_ij,  sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0
/// by successive shortest augmenting paths with Johnson potentials.
/// Nodes: 0..m-1 sources, m..m+n-1 sinks. Dense Dijkstra per augmentation;
/// every augmentation zeroes at least one residual exactly, so the solver
/// terminates after at most m+n rounds.
struct TransportSolver {
    std::size_t m, n;
    const std::vector<std::vector<double>>& cost;
    std::vector<double> supply, demand;        // residuals, consumed in place
    std::vector<std::vector<double>> flow;
    std::vector<double> pi;                    // node potentials
    int augmentations = 0;

    TransportSolver(std::vector<double> a, std::vector<double> b,
                    const std::vector<std::vector<double>>& c)
        : m(a.size()), n(b.size()), cost(c), supply(std::move(a)), demand(std::move(b)),
          flow(m, std::vector<double>(n, 0.0)), pi(m + n, 0.0) {}

    double reduced(std::size_t u, std::size_t v, double c_uv) const {
        // Clamp roundoff; reduced costs are >= 0 up to machine noise.
        return std::max(0.0, c_uv + pi[u] - pi[v]);
    }

    void run() {
        const std::size_t total = m + n;
        const int max_augmentations = 50 * static_cast<int>(total) + 1000;
        while (true) {
            if (augmentations > max_augmentations)
                throw std::runtime_error("transport: augmentation cap exceeded");
            // Multi-source Dijkstra from all sources with remaining supply.
            std::vector<double> dist(total, kInf);
            std::vector<int> prev(total, -1);
            std::vector<bool> done(total, false);
            for (std::size_t i = 0; i < m; ++i)
                if (supply[i] > 0.0) dist[i] = 0.0;

            bool any_source = false;
            for (std::size_t i = 0; i < m; ++i) any_source |= supply[i] > 0.0;
            if (!any_source) break;

            for (std::size_t round = 0; round < total; ++round) {
                std::size_t u = total;
                double best = kInf;
                for (std::size_t k = 0; k < total; ++k)
                    if (!done[k] && dist[k] < best) { best = dist[k]; u = k; }
                if (u == total) break;
                done[u] = true;
                if (u < m) {
                    for (std::size_t j = 0; j < n; ++j) {
                        const double nd = dist[u] + reduced(u, m + j, cost[u][j]);
                        if (nd < dist[m + j]) { dist[m + j] = nd; prev[m + j] = int(u); }
                    }
                } else {
                    const std::size_t j = u - m;
                    for (std::size_t i = 0; i < m; ++i) {
                        if (flow[i][j] <= 0.0) continue;
                        const double nd = dist[u] + reduced(u, i, -cost[i][j]);
                        if (nd < dist[i]) { dist[i] = nd; prev[i] = int(u); }
                    }
                }
            }

            // Closest sink with unmet demand.
            std::size_t tgt = total;
            double bestd = kInf;
            for (std::size_t j = 0; j < n; ++j)
                if (demand[j] > 0.0 && dist[m + j] < bestd) { bestd = dist[m + j]; tgt = m + j; }
            if (tgt == total)
                throw std::runtime_error("transport: no augmenting path (unbalanced problem?)");

            // Bottleneck along the path.
            double push = demand[tgt - m];
            for (std::size_t v = tgt; prev[v] != -1; v = std::size_t(prev[v])) {
                const std::size_t u = std::size_t(prev[v]);
                if (u >= m)  // backward arc sink->source, limited by existing flow
                    push = std::min(push, flow[v][u - m]);
            }
            {   // path root is a source with remaining supply
                std::size_t v = tgt;
                while (prev[v] != -1) v = std::size_t(prev[v]);
                push = std::min(push, supply[v]);
            }

            for (std::size_t v = tgt; prev[v] != -1; v = std::size_t(prev[v])) {
                const std::size_t u = std::size_t(prev[v]);
                if (u < m)
                    flow[u][v - m] += push;
                else
                    flow[v][u - m] -= push;
            }
            {
                std::size_t v = tgt;
                while (prev[v] != -1) v = std::size_t(prev[v]);
                supply[v] -= push;
                if (supply[v] < 1e-18) supply[v] = 0.0;
            }
            demand[tgt - m] -= push;
            if (demand[tgt - m] < 1e-18) demand[tgt - m] = 0.0;

            for (std::size_t k = 0; k < total; ++k)
                if (dist[k] < kInf) pi[k] += dist[k];
            ++augmentations;
        }
    }

    double objective() const {
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) v += flow[i][j] * cost[i][j];
        return v;
    }
};

using CostFn = double (*)(const Point&, const Point&);

double euclidean_cost(const Point& a, const Point& b) { return distance(a, b); }
double truncated_cost(const Point& a, const Point& b) { return std::min(distance(a, b), 2.0); }

TransportResult solve_metric_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                CostFn ground, const char* who) {
    check_probability(mu, who);
    check_probability(nu, who);
    if (mu.dimension() != nu.dimension())
        throw std::domain_error(std::string(who) + ": dimension mismatch");

    const std::size_t m = mu.size(), n = nu.size();
    std::vector<std::vector<double>> c(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i][j] = ground(mu.atoms()[i], nu.atoms()[j]);

    TransportSolver solver(mu.weights(), nu.weights(), c);
    solver.run();

    TransportResult res;
    res.value = solver.objective();
    res.iterations = solver.augmentations;

    // Dual potential on the union support via the c-transform of the sink
    // potentials: f(z) = min_j (c(z, y_j) - v_j) with v_j = pi_{m+j}. For a
    // metric ground cost this is 1-Lipschitz and attains the same objective.
    res.support.reserve(m + n);
    for (const auto& p : mu.atoms()) res.support.push_back(p);
    for (const auto& p : nu.atoms()) res.support.push_back(p);
    std::vector<double> f(m + n);
    for (std::size_t k = 0; k < m + n; ++k) {
        double best = kInf;
        for (std::size_t j = 0; j < n; ++j)
            best = std::min(best, ground(res.support[k], nu.atoms()[j]) - solver.pi[m + j]);
        f[k] = best;
    }
    const double pin = f[0];
    for (auto& v : f) v -= pin;  // normalize f(x_0) = 0
    res.potential = LipPotential{std::move(f), 0};

    double dual = 0.0;
    for (std::size_t i = 0; i < m; ++i) dual += res.potential.values[i] * mu.weights()[i];
    for (std::size_t j = 0; j < n; ++j) dual -= res.potential.values[m + j] * nu.weights()[j];
    const double gap_tol = 1e-9 * std::max(1.0, std::abs(res.value));
    res.dual_feasible = lip_check(res.potential, res.support, 1e-9) &&
                        std::abs(dual - res.value) <= gap_tol;
    return res;
}

}  // namespace

TransportResult kantorovich_h_full(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    return solve_metric_lp(mu, nu, euclidean_cost, "kantorovich_h");
}

double kantorovich_h(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    return kantorovich_h_full(mu, nu).value;
}

double kantorovich_h_cdf_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dimension() != 1 || nu.dimension() != 1)
        throw std::domain_error("kantorovich_h_cdf_oracle: 1-D measures required");
    struct Jump { double x; double dmu; };
    std::vector<Jump> jumps;
    jumps.reserve(mu.size() + nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        jumps.push_back({mu.atoms()[i].x(), mu.weights()[i]});
    for (std::size_t j = 0; j < nu.size(); ++j)
        jumps.push_back({nu.atoms()[j].x(), -nu.weights()[j]});
    std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.x < b.x; });

    double area = 0.0, gap = 0.0;
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        if (k > 0) area += std::abs(gap) * (jumps[k].x - jumps[k - 1].x);
        gap += jumps[k].dmu;  // F_mu - F_nu just right of jumps[k].x
    }
    return area;
}

TransportResult modified_kantorovich_full(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    return solve_metric_lp(mu, nu, truncated_cost, "modified_kantorovich");
}

double modified_kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    return modified_kantorovich_full(mu, nu).value;
}

bool lip_check(const LipPotential& f, const std::vector<Point>& points, double tol) {
    if (f.values.size() != points.size())
        throw std::domain_error("lip_check: value/point count mismatch");
    if (f.base_index >= points.size()) throw std::domain_error("lip_check: bad base index");
    if (std::abs(f.values[f.base_index]) > tol) return false;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (std::abs(f.values[i] - f.values[j]) > distance(points[i], points[j]) + tol)
                return false;
    return true;
}

}  // namespace ifskit
