#include "ifskit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ifskit {

bool interval_union_contains(const IntervalUnion& u, double x) {
    for (const auto& iv : u)
        if (iv.contains(x)) return true;
    return false;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    validate();
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights,
                                 std::vector<Word> labels)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != atoms_.size())
        throw std::domain_error("DiscreteMeasure: label count mismatch");
    validate();
}

void DiscreteMeasure::validate() const {
    if (atoms_.empty()) throw std::domain_error("DiscreteMeasure: no atoms");
    if (atoms_.size() != weights_.size())
        throw std::domain_error("DiscreteMeasure: weight count mismatch");
    const int dim = atoms_.front().dim;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i].dim != dim) throw std::domain_error("DiscreteMeasure: mixed dimensions");
        if (!(weights_[i] > 0.0)) throw std::domain_error("DiscreteMeasure: weights must be positive");
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::domain_error("DiscreteMeasure: weights must sum to 1");
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j)
            if (same_point(atoms_[i], atoms_[j], 0.0))
                throw std::domain_error("DiscreteMeasure: duplicate atoms");
}

double DiscreteMeasure::mass_on(const IntervalUnion& set) const {
    if (dimension() != 1) throw std::domain_error("DiscreteMeasure::mass_on: 1-D only");
    double m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (interval_union_contains(set, atoms_[i].x())) m += weights_[i];
    return m;
}

double DiscreteMeasure::total_mass() const {
    double m = 0.0;
    for (double w : weights_) m += w;
    return m;
}

DiscreteMeasure transfer_step(const IFSystem& ifs, const DiscreteMeasure& nu,
                              double merge_radius) {
    const double inv_n = 1.0 / static_cast<double>(ifs.size());
    std::vector<Point> atoms;
    std::vector<double> weights;
    std::vector<Word> labels;
    const bool labeled = nu.has_labels();
    atoms.reserve(ifs.size() * nu.size());

    for (std::size_t i = 0; i < ifs.size(); ++i) {
        for (std::size_t a = 0; a < nu.size(); ++a) {
            const Point image = ifs.map(i).apply(nu.atoms()[a]);
            const double w = inv_n * nu.weights()[a];
            // Deterministic merge: scan existing atoms in insertion order.
            bool merged = false;
            for (std::size_t e = 0; e < atoms.size(); ++e) {
                if (same_point(atoms[e], image, merge_radius)) {
                    weights[e] += w;
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                atoms.push_back(image);
                weights.push_back(w);
                if (labeled) {
                    Word w2;
                    w2.letters.reserve(nu.labels()[a].length() + 1);
                    w2.letters.push_back(static_cast<std::uint8_t>(i));
                    w2.letters.insert(w2.letters.end(), nu.labels()[a].letters.begin(),
                                      nu.labels()[a].letters.end());
                    labels.push_back(std::move(w2));
                }
            }
        }
    }
    if (labeled) return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(labels));
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure hutchinson_measure(const IFSystem& ifs, int depth, double merge_radius) {
    if (depth < 1) throw std::domain_error("hutchinson_measure: depth must be >= 1");
    DiscreteMeasure mu({ifs.map(0).fixed_point()}, {1.0}, {Word{}});
    for (int d = 0; d < depth; ++d) mu = transfer_step(ifs, mu, merge_radius);
    return mu;
}

DiscreteMeasure kravchenko_sequence(int n, const std::vector<double>& positions) {
    if (n < 1) throw std::domain_error("kravchenko_sequence: n must be >= 1");
    if (positions.size() != static_cast<std::size_t>(n) + 1)
        throw std::domain_error("kravchenko_sequence: need n+1 positions");
    for (int k = 1; k <= n; ++k)
        if (std::abs(positions[k] - positions[0]) > static_cast<double>(k) + 1e-12)
            throw std::domain_error("kravchenko_sequence: growth condition d(x_0,x_k) <= k violated");

    std::vector<Point> atoms;
    std::vector<double> weights;
    atoms.push_back(Point::line(positions[0]));
    weights.push_back(std::ldexp(1.0, -n));  // 2^{-n}
    for (int k = 1; k <= n; ++k) {
        atoms.push_back(Point::line(positions[k]));
        weights.push_back(std::ldexp(1.0, -k));
    }
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure truncate_measure(const DiscreteMeasure& mu, const IntervalUnion& k) {
    if (mu.dimension() != 1) throw std::domain_error("truncate_measure: 1-D only");
    const double mass = mu.mass_on(k);
    if (!(mass > 0.0)) throw std::domain_error("truncate_measure: mu(K) = 0");
    std::vector<Point> atoms;
    std::vector<double> weights;
    std::vector<Word> labels;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!interval_union_contains(k, mu.atoms()[i].x())) continue;
        atoms.push_back(mu.atoms()[i]);
        weights.push_back(mu.weights()[i] / mass);
        if (mu.has_labels()) labels.push_back(mu.labels()[i]);
    }
    if (!labels.empty())
        return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(labels));
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

TruncationFamily make_truncation_family(const DiscreteMeasure& base,
                                        std::vector<IntervalUnion> nested_sets) {
    // Nesting is checked on the base's atoms: each K_n keeps a subset of the
    // atoms kept by K_{n+1}.
    for (std::size_t n = 0; n + 1 < nested_sets.size(); ++n)
        for (const auto& atom : base.atoms())
            if (interval_union_contains(nested_sets[n], atom.x()) &&
                !interval_union_contains(nested_sets[n + 1], atom.x()))
                throw std::domain_error("make_truncation_family: sets are not nested");
    TruncationFamily fam{base, std::move(nested_sets), {}};
    fam.members.reserve(fam.sets.size());
    for (const auto& set : fam.sets) fam.members.push_back(truncate_measure(base, set));
    return fam;
}

}  // namespace ifskit
