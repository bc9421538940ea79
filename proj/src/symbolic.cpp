#include "ifskit/symbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace ifskit {

ShiftSpaceModel::ShiftSpaceModel(int n, int k) : alphabet_size(n), depth(k) {
    if (n < 2) throw std::domain_error("ShiftSpaceModel: alphabet size must be >= 2");
    if (k < 1) throw std::domain_error("ShiftSpaceModel: depth must be >= 1");
    double count = std::pow(static_cast<double>(n), k);
    if (count > 1 << 22) throw std::domain_error("ShiftSpaceModel: N^K too large for desk scale");
}

std::size_t ShiftSpaceModel::word_count() const {
    std::size_t c = 1;
    for (int i = 0; i < depth; ++i) c *= static_cast<std::size_t>(alphabet_size);
    return c;
}

std::size_t ShiftSpaceModel::index_of(const Word& w) const {
    if (w.length() != static_cast<std::size_t>(depth))
        throw std::domain_error("ShiftSpaceModel::index_of: word length != depth");
    std::size_t idx = 0;
    for (auto l : w.letters) {
        if (l >= alphabet_size) throw std::domain_error("ShiftSpaceModel: letter out of range");
        idx = idx * static_cast<std::size_t>(alphabet_size) + l;
    }
    return idx;
}

Word ShiftSpaceModel::word_at(std::size_t index) const {
    Word w;
    w.letters.assign(static_cast<std::size_t>(depth), 0);
    for (int j = depth - 1; j >= 0; --j) {
        w.letters[static_cast<std::size_t>(j)] =
            static_cast<std::uint8_t>(index % static_cast<std::size_t>(alphabet_size));
        index /= static_cast<std::size_t>(alphabet_size);
    }
    return w;
}

double ShiftSpaceModel::word_weight() const {
    return 1.0 / static_cast<double>(word_count());
}

double omega_metric(const Word& alpha, const Word& beta) {
    if (alpha.length() != beta.length())
        throw std::domain_error("omega_metric: words must have equal length");
    for (std::size_t j = 0; j < alpha.length(); ++j)
        if (alpha.letters[j] != beta.letters[j])
            return std::ldexp(1.0, -static_cast<int>(j) - 1);  // 2^{-(j+1)}, 1-based j
    return 0.0;
}

Word shift_in(int letter, const Word& w, const ShiftSpaceModel& model) {
    if (letter < 0 || letter >= model.alphabet_size)
        throw std::domain_error("shift_in: letter out of range");
    Word out;
    out.letters.reserve(w.length() + 1);
    out.letters.push_back(static_cast<std::uint8_t>(letter));
    out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end());
    if (out.length() > static_cast<std::size_t>(model.depth)) out.letters.pop_back();
    return out;
}

Word shift_out(const Word& w) {
    if (w.empty()) throw std::domain_error("shift_out: empty word");
    Word out;
    out.letters.assign(w.letters.begin() + 1, w.letters.end());
    return out;
}

double bernoulli_mass(const Cylinder& c, const ShiftSpaceModel& model) {
    if (c.prefix.length() > static_cast<std::size_t>(model.depth))
        throw std::domain_error("bernoulli_mass: prefix longer than depth");
    for (auto l : c.prefix.letters)
        if (l >= model.alphabet_size) throw std::domain_error("bernoulli_mass: letter out of range");
    return std::pow(static_cast<double>(model.alphabet_size),
                    -static_cast<double>(c.prefix.length()));
}

CylinderPreimage shift_in_preimage(int letter, const Cylinder& c) {
    CylinderPreimage out;
    if (c.prefix.empty()) {
        // eta_i^{-1}(Omega) = Omega.
        out.exists = true;
        return out;
    }
    if (c.prefix.letters.front() != letter) return out;  // disjoint from eta_i's range
    out.exists = true;
    out.cylinder.prefix = shift_out(c.prefix);
    return out;
}

Point coding_point(const IFSystem& ifs, const Word& w) {
    for (auto l : w.letters)
        if (l >= ifs.size()) throw std::domain_error("coding_point: letter out of range");
    Point x = ifs.map(0).fixed_point();
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        x = ifs.map(*it).apply(x);
    return x;
}

CodingPreimage coding_preimage(const IFSystem& ifs, const IntervalUnion& delta,
                               const ShiftSpaceModel& model) {
    if (ifs.dimension() != 1) throw std::domain_error("coding_preimage: 1-D only");
    if (static_cast<std::size_t>(model.alphabet_size) != ifs.size())
        throw std::domain_error("coding_preimage: alphabet size != number of maps");
    const double ball = std::pow(ifs.ratio(), model.depth) * ifs.bounding_box().diameter();

    CodingPreimage out;
    const std::size_t count = model.word_count();
    for (std::size_t idx = 0; idx < count; ++idx) {
        const Word w = model.word_at(idx);
        const double x = coding_point(ifs, w).x();
        const bool in = interval_union_contains(delta, x);
        bool near_boundary = false;
        for (const auto& iv : delta) {
            if (std::abs(x - iv.lo) < ball || std::abs(x - iv.hi) < ball) near_boundary = true;
        }
        if (in) out.inside.push_back(w);
        if (near_boundary && (in || interval_union_contains(delta, x - ball) ||
                              interval_union_contains(delta, x + ball)))
            out.ambiguous.push_back(w);
    }
    return out;
}

}  // namespace ifskit
