#include "ifskit/povm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ifskit/errors.hpp"

namespace ifskit {

CellPartition::CellPartition(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw std::domain_error("CellPartition: need at least one cell");
    for (std::size_t j = 0; j + 1 < edges_.size(); ++j)
        if (!(edges_[j] < edges_[j + 1]))
            throw std::domain_error("CellPartition: edges must increase strictly");
}

CellPartition CellPartition::uniform(double lo, double hi, int cells) {
    if (cells < 1) throw std::domain_error("CellPartition: cell count must be positive");
    std::vector<double> edges(static_cast<std::size_t>(cells) + 1);
    for (int j = 0; j <= cells; ++j)
        edges[static_cast<std::size_t>(j)] = lo + (hi - lo) * double(j) / double(cells);
    edges.front() = lo;
    edges.back() = hi;
    return CellPartition(std::move(edges));
}

double CellPartition::mesh() const {
    double m = 0.0;
    for (std::size_t j = 0; j < cell_count(); ++j) m = std::max(m, width(j));
    return m;
}

std::size_t CellPartition::cell_of(double x) const {
    if (!covers(x)) throw std::domain_error("CellPartition::cell_of: point outside span");
    // Half-open cells; the final cell takes the right endpoint.
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - edges_.begin());
    if (j == 0) return 0;  // x == span_lo with exact equality
    if (j >= edges_.size()) return cell_count() - 1;
    return j - 1;
}

Matrix POVMTable::value_on_interval(double lo, double hi) const {
    const std::size_t dim = space->dim();
    Matrix out(dim, dim);
    if (!(hi > lo)) return out;
    for (std::size_t j = 0; j < partition.cell_count(); ++j) {
        const double overlap =
            std::min(hi, partition.hi(j)) - std::max(lo, partition.lo(j));
        if (overlap <= 0.0) continue;
        const double frac = overlap / partition.width(j);
        out += cplx(std::min(frac, 1.0), 0.0) * values[j];
    }
    return out;
}

POVMDiagnostics povm_diagnostics(const POVMTable& table, bool precise) {
    POVMDiagnostics diag;
    diag.min_eigenvalue = 1e300;
    const std::size_t dim = table.space->dim();
    Matrix sum(dim, dim);
    for (const auto& v : table.values) sum += v;
    sum -= Matrix::identity(dim);

    const auto& w = table.space->weights();
    auto plainify = [&](const Matrix& a) {
        Matrix out = a;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                out(i, j) *= std::sqrt(w[i] / w[j]);
        return out;
    };

    diag.sum_identity_defect =
        precise ? hermitian_spectral_norm(plainify(sum)) : hermitian_power_norm(plainify(sum));
    for (const auto& v : table.values) {
        const Matrix plain = plainify(v);
        diag.min_eigenvalue = std::min(
            diag.min_eigenvalue,
            precise ? hermitian_min_eig(plain)
                    : -hermitian_power_norm(plain) );
        const Matrix idem = plainify(v * v - v);
        diag.max_idempotency_defect = std::max(
            diag.max_idempotency_defect,
            precise ? hermitian_spectral_norm(idem) : hermitian_power_norm(idem));
    }
    return diag;
}

POVMTable trivial_povm(const CellPartition& partition, const DiscreteMeasure& mu_k,
                       const SpacePtr& space) {
    POVMTable table{partition, space, {}};
    const std::size_t dim = space->dim();
    table.values.reserve(partition.cell_count());
    for (std::size_t j = 0; j < partition.cell_count(); ++j) {
        double mass = 0.0;
        for (std::size_t a = 0; a < mu_k.size(); ++a) {
            const double x = mu_k.atoms()[a].x();
            if (partition.covers(x) && partition.cell_of(x) == j) mass += mu_k.weights()[a];
        }
        Matrix m = Matrix::identity(dim);
        m *= cplx(mass, 0.0);
        table.values.push_back(std::move(m));
    }
    return table;
}

POVMTable multiplication_pvm(const CellPartition& partition, const DiscreteMeasure& mu_k,
                             const SpacePtr& space) {
    if (space->dim() != mu_k.size())
        throw std::domain_error("multiplication_pvm: space/atom dimension mismatch");
    POVMTable table{partition, space, {}};
    const std::size_t dim = space->dim();
    table.values.assign(partition.cell_count(), Matrix(dim, dim));
    for (std::size_t a = 0; a < mu_k.size(); ++a) {
        const double x = mu_k.atoms()[a].x();
        if (!partition.covers(x)) continue;
        table.values[partition.cell_of(x)](a, a) = 1.0;
    }
    return table;
}

Matrix CylinderPVM::value(const Cylinder& c) const {
    const std::size_t count = model.word_count();
    Matrix out(count, count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const Word w = model.word_at(idx);
        bool in = c.prefix.length() <= w.length();
        for (std::size_t j = 0; in && j < c.prefix.length(); ++j)
            in = w.letters[j] == c.prefix.letters[j];
        if (in) out(idx, idx) = 1.0;
    }
    return out;
}

Matrix CylinderPVM::value_of_words(const std::vector<Word>& depth_k_words) const {
    const std::size_t count = model.word_count();
    Matrix out(count, count);
    for (const auto& w : depth_k_words) out(model.index_of(w), model.index_of(w)) = 1.0;
    return out;
}

CylinderPVM build_cylinder_pvm(const ShiftSpaceModel& model) {
    return CylinderPVM{model, cylinder_space(model)};
}

POVMTable povm_transfer(const IFSystem& ifs, const CuntzFamily& family, const POVMTable& b) {
    if (ifs.dimension() != 1) throw std::domain_error("povm_transfer: 1-D only");
    if (family.space().get() != b.space.get())
        throw std::domain_error("povm_transfer: family and table live on different spaces");

    const auto& part = b.partition;
    const double span_lo = part.span_lo(), span_hi = part.span_hi();
    POVMTable out{part, b.space, {}};
    out.values.reserve(part.cell_count());

    // Adjoints are reused across cells.
    std::vector<MatrixOperator> s_star;
    s_star.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) s_star.push_back(adjoint(family.s(i)));

    const double width_floor = 4e-15 * std::max(std::abs(span_lo), std::abs(span_hi));
    for (std::size_t j = 0; j < part.cell_count(); ++j) {
        Matrix acc(b.space->dim(), b.space->dim());
        for (std::size_t i = 0; i < ifs.size(); ++i) {
            const double s = ifs.map(i).slope();
            const double t = ifs.map(i).offset1d();
            double lo = (part.lo(j) - t) / s;
            double hi = (part.hi(j) - t) / s;
            if (s < 0.0) std::swap(lo, hi);
            lo = std::max(lo, span_lo);
            hi = std::min(hi, span_hi);
            if (hi <= lo) continue;
            if (hi - lo < width_floor)
                throw PrecisionError("povm_transfer: preimage sliver below working precision at cell " +
                                     std::to_string(j));
            const Matrix bi = b.value_on_interval(lo, hi);
            acc += (family.s(i).entries * bi) * s_star[i].entries;
        }
        out.values.push_back(weighted_hermitian_part(acc, b.space->weights()));
    }
    return out;
}

LipDictionary lip_dictionary_generate(const CellPartition& partition, int count,
                                      std::uint64_t seed) {
    const std::size_t cells = partition.cell_count();
    if (count < static_cast<int>(cells))
        throw std::domain_error("lip_dictionary_generate: count must be >= number of cells");

    LipDictionary dict;
    dict.seed = seed;
    dict.values_at_reps.reserve(static_cast<std::size_t>(count));

    // Distance to every representative.
    for (std::size_t j = 0; j < cells; ++j) {
        std::vector<double> f(cells);
        for (std::size_t c = 0; c < cells; ++c) f[c] = std::abs(partition.rep(c) - partition.rep(j));
        dict.values_at_reps.push_back(std::move(f));
    }

    // McShane-regularized random profiles: f(x) = max_j (v_j - d(x, rep_j)).
    std::mt19937_64 rng(seed);
    const double diam = partition.span_hi() - partition.span_lo();
    auto uniform01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    for (int k = static_cast<int>(cells); k < count; ++k) {
        std::vector<double> v(cells);
        for (auto& x : v) x = diam * uniform01();
        std::vector<double> f(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            double best = -1e300;
            for (std::size_t j = 0; j < cells; ++j)
                best = std::max(best, v[j] - std::abs(partition.rep(c) - partition.rep(j)));
            f[c] = best;
        }
        dict.values_at_reps.push_back(std::move(f));
    }
    return dict;
}

namespace {

bool dictionary_is_lipschitz(const CellPartition& part, const LipDictionary& dict) {
    for (const auto& f : dict.values_at_reps) {
        if (f.size() != part.cell_count()) return false;
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = i + 1; j < f.size(); ++j)
                if (std::abs(f[i] - f[j]) > std::abs(part.rep(i) - part.rep(j)) + 1e-12)
                    return false;
    }
    return true;
}

Matrix plain_conjugate(const Matrix& a, const std::vector<double>& w) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= std::sqrt(w[i] / w[j]);
    return out;
}

}  // namespace

RhoEstimate rho_estimate(const POVMTable& a, const POVMTable& b, const LipDictionary& dict) {
    if (!(a.partition == b.partition))
        throw std::domain_error("rho_estimate: partitions differ");
    if (a.space.get() != b.space.get())
        throw std::domain_error("rho_estimate: spaces differ");
    if (!dictionary_is_lipschitz(a.partition, dict))
        throw std::domain_error("rho_estimate: dictionary fails lip_check");

    const std::size_t cells = a.partition.cell_count();
    const std::size_t dim = a.space->dim();
    const auto& w = a.space->weights();

    std::vector<Matrix> diff;
    diff.reserve(cells);
    for (std::size_t j = 0; j < cells; ++j) diff.push_back(a.values[j] - b.values[j]);

    RhoEstimate est;
    est.dictionary_size = static_cast<int>(dict.values_at_reps.size());
    est.mesh = a.partition.mesh();

    for (const auto& f : dict.values_at_reps) {
        Matrix m(dim, dim);
        for (std::size_t j = 0; j < cells; ++j) {
            if (f[j] == 0.0) continue;
            m += cplx(f[j], 0.0) * diff[j];
        }
        est.lower = std::max(est.lower, hermitian_power_norm(plain_conjugate(m, w)));
    }

    double cell_norm_sum = 0.0;
    for (std::size_t j = 0; j < cells; ++j)
        cell_norm_sum += plain_conjugate(diff[j], w).frobenius_norm();
    est.upper = 2.0 * est.mesh + cell_norm_sum;
    est.upper = std::max(est.upper, est.lower);
    return est;
}

namespace {

double median_ratio(const std::vector<double>& lowers) {
    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < lowers.size(); ++i)
        if (lowers[i] > 1e-13 && lowers[i + 1] > 1e-13)
            ratios.push_back(lowers[i + 1] / lowers[i]);
    if (ratios.size() > 2) ratios.erase(ratios.begin());  // burn-in
    if (ratios.empty()) return 0.0;
    std::sort(ratios.begin(), ratios.end());
    const std::size_t mid = ratios.size() / 2;
    if (ratios.size() % 2 == 1) return ratios[mid];
    return 0.5 * (ratios[mid - 1] + ratios[mid]);
}

}  // namespace

FixpointResult povm_fixpoint(const IFSystem& ifs, const CuntzFamily& family,
                             const DiscreteMeasure& mu_k, const CellPartition& partition,
                             const LipDictionary& dict, double tol, int max_iter,
                             FixpointStart start) {
    if (!(tol > 0.0)) throw std::domain_error("povm_fixpoint: tol must be positive");
    POVMTable current = (start == FixpointStart::trivial)
                            ? trivial_povm(partition, mu_k, family.space())
                            : multiplication_pvm(partition, mu_k, family.space());

    FixpointResult result{current, {}, 0.0, 0};
    std::vector<double> lowers;
    for (int m = 0; m < max_iter; ++m) {
        POVMTable next = povm_transfer(ifs, family, current);
        const RhoEstimate est = rho_estimate(next, current, dict);
        const POVMDiagnostics diag = povm_diagnostics(next, /*precise=*/false);
        result.history.push_back(
            FixpointStep{est.lower, est.upper, diag.min_eigenvalue, diag.sum_identity_defect});
        lowers.push_back(est.lower);
        current = std::move(next);
        result.iterations = m + 1;
        if (est.lower <= tol) {
            result.table = std::move(current);
            result.fitted_ratio = median_ratio(lowers);
            return result;
        }
    }
    throw ConvergenceError("povm_fixpoint: max_iter exceeded", lowers);
}

DilationReport dilation_check(const IFSystem& ifs, const ShiftSpaceModel& model,
                              const POVMTable& a, const MatrixOperator& v) {
    if (ifs.dimension() != 1) throw std::domain_error("dilation_check: 1-D only");
    if (v.domain.get() != a.space.get())
        throw std::domain_error("dilation_check: V domain must match the POVM space");
    if (v.codomain->dim() != model.word_count())
        throw std::domain_error("dilation_check: V codomain depth mismatch");

    const auto& part = a.partition;
    const std::size_t cells = part.cell_count();
    const std::size_t count = model.word_count();
    const double ball = std::pow(ifs.ratio(), model.depth) * ifs.bounding_box().diameter();

    // Coding point membership, consistent with the partition's cell_of.
    std::vector<std::size_t> cell_of_word(count);
    std::vector<bool> word_ambiguous(count, false);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double x = coding_point(ifs, model.word_at(idx)).x();
        cell_of_word[idx] = part.cell_of(std::min(std::max(x, part.span_lo()), part.span_hi()));
        const std::size_t c = cell_of_word[idx];
        if (std::abs(x - part.lo(c)) < ball || std::abs(x - part.hi(c)) < ball)
            word_ambiguous[idx] = true;
    }

    const MatrixOperator v_star = adjoint(v);
    DilationReport report;
    report.defects.resize(cells);
    report.slacks.resize(cells);
    report.ambiguous_counts.assign(cells, 0);

    for (std::size_t j = 0; j < cells; ++j) {
        Matrix e(count, count);
        Matrix e_amb(count, count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (cell_of_word[idx] == j) {
                e(idx, idx) = 1.0;
                if (word_ambiguous[idx]) {
                    e_amb(idx, idx) = 1.0;
                    ++report.ambiguous_counts[j];
                }
            }
        }
        const Matrix pulled = (v_star.entries * e) * v.entries;
        const MatrixOperator defect_op{pulled - a.values[j], a.space, a.space};
        report.defects[j] = operator_norm(defect_op);
        const MatrixOperator slack_op{(v_star.entries * e_amb) * v.entries, a.space, a.space};
        report.slacks[j] = operator_norm(slack_op);
        report.max_defect = std::max(report.max_defect, report.defects[j]);
    }
    report.constant = report.max_defect / std::pow(ifs.ratio(), model.depth);
    return report;
}

}  // namespace ifskit
