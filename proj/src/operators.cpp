#include "ifskit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ifskit {

HilbertSpace::HilbertSpace(std::vector<std::string> labels, std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() != weights_.size())
        throw std::domain_error("HilbertSpace: label/weight count mismatch");
    if (weights_.empty()) throw std::domain_error("HilbertSpace: empty space");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::domain_error("HilbertSpace: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::domain_error("HilbertSpace: weights must sum to 1");
}

cplx HilbertSpace::inner(const std::vector<cplx>& f, const std::vector<cplx>& g) const {
    if (f.size() != dim() || g.size() != dim())
        throw std::domain_error("HilbertSpace::inner: size mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) acc += weights_[i] * f[i] * std::conj(g[i]);
    return acc;
}

double HilbertSpace::norm(const std::vector<cplx>& f) const {
    return std::sqrt(std::max(0.0, inner(f, f).real()));
}

SpacePtr cylinder_space(const ShiftSpaceModel& model) {
    const std::size_t count = model.word_count();
    std::vector<std::string> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = model.word_at(i).str();
    std::vector<double> weights(count, model.word_weight());
    return std::make_shared<const HilbertSpace>(std::move(labels), std::move(weights));
}

SpacePtr atom_space(const DiscreteMeasure& mu_k) {
    if (!mu_k.has_labels())
        throw std::domain_error("atom_space: measure lacks word provenance labels");
    std::vector<std::string> labels(mu_k.size());
    for (std::size_t i = 0; i < mu_k.size(); ++i) labels[i] = mu_k.labels()[i].str();
    return std::make_shared<const HilbertSpace>(std::move(labels), mu_k.weights());
}

MatrixOperator compose(const MatrixOperator& a, const MatrixOperator& b) {
    if (a.domain.get() != b.codomain.get())
        throw std::domain_error("compose: spaces do not chain");
    return MatrixOperator{a.entries * b.entries, b.domain, a.codomain};
}

MatrixOperator operator_difference(const MatrixOperator& a, const MatrixOperator& b) {
    if (a.domain.get() != b.domain.get() || a.codomain.get() != b.codomain.get())
        throw std::domain_error("operator_difference: space mismatch");
    return MatrixOperator{a.entries - b.entries, a.domain, a.codomain};
}

MatrixOperator identity_operator(const SpacePtr& space) {
    return MatrixOperator{Matrix::identity(space->dim()), space, space};
}

MatrixOperator adjoint(const MatrixOperator& op) {
    const auto& wd = op.domain->weights();
    const auto& wc = op.codomain->weights();
    Matrix b(op.entries.cols(), op.entries.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            b(i, j) = std::conj(op.entries(j, i)) * wc[j] / wd[i];
    return MatrixOperator{std::move(b), op.codomain, op.domain};
}

namespace {

/// Coordinates isometry: W_cod^{1/2} A W_dom^{-1/2} maps plain l2 to plain l2
/// with the same operator norm.
Matrix conjugate_to_plain(const MatrixOperator& op) {
    const auto& wd = op.domain->weights();
    const auto& wc = op.codomain->weights();
    Matrix out = op.entries;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double ri = std::sqrt(wc[i]);
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= ri / std::sqrt(wd[j]);
    }
    return out;
}

}  // namespace

double operator_norm(const MatrixOperator& op) {
    const Matrix plain = conjugate_to_plain(op);
    const Matrix gram = plain.conj_transpose() * plain;
    const auto eig = hermitian_eig(gram);
    return std::sqrt(std::max(0.0, eig.values.back()));
}

double weighted_min_eig(const MatrixOperator& op) {
    if (op.domain.get() != op.codomain.get())
        throw std::domain_error("weighted_min_eig: endomorphism required");
    return hermitian_min_eig(conjugate_to_plain(op));
}

Matrix weighted_hermitian_part(const Matrix& a, const std::vector<double>& weights) {
    // W^{-1/2} herm(W^{1/2} A W^{-1/2}) W^{1/2}
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double rij = std::sqrt(weights[i] / weights[j]);
            const cplx conj_ji = std::conj(a(j, i)) / rij;
            out(i, j) = 0.5 * (a(i, j) * rij + conj_ji) / rij;
        }
    return out;
}

CuntzFamily build_t_family(const ShiftSpaceModel& model) {
    const std::size_t count = model.word_count();
    const int n = model.alphabet_size;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    SpacePtr space = cylinder_space(model);

    CuntzFamily family;
    family.flavor = CuntzFamily::Flavor::symbolic;
    family.isometries.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Matrix t(count, count);
        for (std::size_t widx = 0; widx < count; ++widx) {
            const Word w = model.word_at(widx);
            if (w.letters.front() != i) continue;
            // Columns are the words sharing w_2..w_K as a prefix.
            Word v = shift_out(w);
            v.letters.push_back(0);
            for (int a = 0; a < n; ++a) {
                v.letters.back() = static_cast<std::uint8_t>(a);
                t(widx, model.index_of(v)) = inv_sqrt_n;
            }
        }
        family.isometries.push_back(MatrixOperator{std::move(t), space, space});
    }
    return family;
}

Matrix last_letter_averaging(const ShiftSpaceModel& model) {
    const std::size_t count = model.word_count();
    const int n = model.alphabet_size;
    Matrix p(count, count);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t widx = 0; widx < count; ++widx) {
        Word w = model.word_at(widx);
        for (int a = 0; a < n; ++a) {
            w.letters.back() = static_cast<std::uint8_t>(a);
            p(widx, model.index_of(w)) = inv_n;
        }
    }
    return p;
}

namespace {

std::size_t nearest_atom(const DiscreteMeasure& mu, const Point& p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double d = distance(mu.atoms()[i], p);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

ShiftSpaceModel model_for_measure(const IFSystem& ifs, const DiscreteMeasure& mu_k) {
    if (!mu_k.has_labels())
        throw std::domain_error("build_f_family: measure lacks word provenance labels");
    const int depth = static_cast<int>(mu_k.labels().front().length());
    for (const auto& label : mu_k.labels())
        if (label.length() != static_cast<std::size_t>(depth))
            throw std::domain_error("build_f_family: ragged provenance labels");
    return ShiftSpaceModel(static_cast<int>(ifs.size()), depth);
}

}  // namespace

MatrixOperator coding_isometry(const IFSystem& ifs, const ShiftSpaceModel& model,
                               const DiscreteMeasure& mu_k, double match_tolerance) {
    if (!mu_k.has_labels())
        throw std::domain_error("coding_isometry: measure lacks word provenance labels");
    if (static_cast<std::size_t>(model.alphabet_size) != ifs.size())
        throw std::domain_error("coding_isometry: alphabet size != number of maps");
    for (const auto& label : mu_k.labels())
        if (label.length() != static_cast<std::size_t>(model.depth))
            throw std::domain_error("coding_isometry: label depth mismatch");

    SpacePtr dom = atom_space(mu_k);
    SpacePtr cod = cylinder_space(model);
    const std::size_t count = model.word_count();
    Matrix v(count, mu_k.size());
    for (std::size_t widx = 0; widx < count; ++widx) {
        const Point p = coding_point(ifs, model.word_at(widx));
        const std::size_t a = nearest_atom(mu_k, p);
        if (!same_point(p, mu_k.atoms()[a], match_tolerance))
            throw std::domain_error("coding_isometry: coding point does not hit an atom");
        v(widx, a) = 1.0;
    }
    return MatrixOperator{std::move(v), dom, cod};
}

FFamilyResult build_f_family(const IFSystem& ifs, const DiscreteMeasure& mu_k, FMode mode,
                             double match_tolerance) {
    const ShiftSpaceModel model = model_for_measure(ifs, mu_k);
    SpacePtr space = atom_space(mu_k);
    const std::size_t n_atoms = mu_k.size();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(ifs.size()));

    FFamilyResult out;
    out.s_family.flavor = CuntzFamily::Flavor::geometric;

    if (mode == FMode::direct) {
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            Matrix f(n_atoms, n_atoms);
            for (std::size_t a = 0; a < n_atoms; ++a) {
                const Point image = ifs.map(i).apply(mu_k.atoms()[a]);
                f(a, nearest_atom(mu_k, image)) = inv_sqrt_n;
            }
            out.f_ops.push_back(MatrixOperator{std::move(f), space, space});
        }
    } else {
        const MatrixOperator v = coding_isometry(ifs, model, mu_k, match_tolerance);
        const MatrixOperator v_star = adjoint(v);
        const CuntzFamily t_family = build_t_family(model);
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            const MatrixOperator t_star = adjoint(t_family.s(i));
            out.f_ops.push_back(compose(v_star, compose(t_star, v)));
        }
    }

    for (const auto& f : out.f_ops) out.s_family.isometries.push_back(adjoint(f));
    return out;
}

CuntzRelationReport cuntz_relation_report(const CuntzFamily& family,
                                          const ShiftSpaceModel& model) {
    const SpacePtr space = family.space();
    const std::size_t dim = space->dim();
    CuntzRelationReport report;

    Matrix sum(dim, dim);
    for (std::size_t i = 0; i < family.size(); ++i)
        sum += (compose(family.s(i), adjoint(family.s(i)))).entries;
    sum -= Matrix::identity(dim);
    report.identity_sum_defect = operator_norm(MatrixOperator{std::move(sum), space, space});

    const Matrix avg = last_letter_averaging(model);
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = 0; j < family.size(); ++j) {
            Matrix rel = (compose(adjoint(family.s(i)), family.s(j))).entries;
            if (i == j) rel -= Matrix::identity(dim);
            const double full =
                operator_norm(MatrixOperator{rel, space, space});
            const double sub =
                operator_norm(MatrixOperator{rel * avg, space, space});
            report.relation2_full_defect = std::max(report.relation2_full_defect, full);
            report.relation2_subspace_defect = std::max(report.relation2_subspace_defect, sub);
        }
    }
    return report;
}

std::vector<std::vector<double>> lipschitz_witness_dictionary(const IFSystem& ifs,
                                                              const DiscreteMeasure& mu_k,
                                                              int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& box = ifs.bounding_box();
    auto uniform01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> dict;
    dict.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Point anchor;
        anchor.dim = ifs.dimension();
        for (int d = 0; d < ifs.dimension(); ++d)
            anchor.coord[static_cast<std::size_t>(d)] =
                box.lo[static_cast<std::size_t>(d)] +
                (box.hi[static_cast<std::size_t>(d)] - box.lo[static_cast<std::size_t>(d)]) *
                    uniform01();
        std::vector<double> values(mu_k.size());
        for (std::size_t a = 0; a < mu_k.size(); ++a)
            values[a] = distance(mu_k.atoms()[a], anchor);
        dict.push_back(std::move(values));
    }
    return dict;
}

IntertwiningDefect intertwining_defect(const MatrixOperator& v, const MatrixOperator& f_i,
                                       const MatrixOperator& t_i,
                                       const std::vector<std::vector<double>>& lip_values) {
    const MatrixOperator lhs = compose(v, f_i);
    const MatrixOperator rhs = compose(adjoint(t_i), v);
    const MatrixOperator diff = operator_difference(lhs, rhs);

    IntertwiningDefect out;
    out.operator_norm_defect = operator_norm(diff);
    for (const auto& values : lip_values) {
        if (values.size() != diff.domain->dim())
            throw std::domain_error("intertwining_defect: dictionary size mismatch");
        std::vector<cplx> f(values.begin(), values.end());
        out.lipschitz_witness =
            std::max(out.lipschitz_witness, diff.codomain->norm(diff.apply(f)));
    }
    return out;
}

MatrixOperator word_projection(const CuntzFamily& family, const Word& a) {
    MatrixOperator s_a = identity_operator(family.space());
    for (auto l : a.letters) {
        if (l >= family.size()) throw std::domain_error("word_projection: letter out of range");
        s_a = compose(s_a, family.s(l));
    }
    return compose(s_a, adjoint(s_a));
}

std::vector<double> measurement_probs(const CuntzFamily& family, const std::vector<cplx>& h) {
    const auto& space = family.space();
    if (std::abs(space->norm(h) - 1.0) > 1e-10)
        throw std::domain_error("measurement_probs: state is not a unit vector");
    std::vector<double> p;
    p.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto si_star_h = adjoint(family.s(i)).apply(h);
        const double norm = space->norm(si_star_h);
        p.push_back(norm * norm);
    }
    return p;
}

}  // namespace ifskit
