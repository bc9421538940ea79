#include "ifskit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ifskit/errors.hpp"
#include "ifskit/linalg.hpp"

namespace ifskit {

double distance(const Point& a, const Point& b) {
    const double dx = a.coord[0] - b.coord[0];
    const double dy = a.coord[1] - b.coord[1];
    return std::sqrt(dx * dx + dy * dy);
}

bool same_point(const Point& a, const Point& b, double tol) {
    if (tol <= 0.0) return a.coord[0] == b.coord[0] && a.coord[1] == b.coord[1];
    return distance(a, b) <= tol;
}

std::string Word::str() const {
    std::string s;
    s.reserve(letters.size());
    for (auto l : letters) s.push_back(static_cast<char>('0' + l));
    return s;
}

namespace {

double spectral_norm_2x2(const std::array<std::array<double, 2>, 2>& l) {
    // Largest singular value via the symmetric eigenproblem for L^T L.
    Matrix g(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k < 2; ++k) s += l[k][i] * l[k][j];
            g(i, j) = s;
        }
    const auto eig = hermitian_eig(g);
    return std::sqrt(std::max(0.0, eig.values.back()));
}

}  // namespace

AffineContraction::AffineContraction(double slope, double offset) : dim_(1) {
    linear_[0][0] = slope;
    linear_[1][1] = 0.0;
    offset_[0] = offset;
    ratio_ = std::abs(slope);
    if (!(ratio_ < 1.0)) throw std::domain_error("AffineContraction: |slope| must be < 1");
    if (slope == 0.0) throw std::domain_error("AffineContraction: slope must be nonzero");
}

AffineContraction::AffineContraction(const std::array<std::array<double, 2>, 2>& linear,
                                     const std::array<double, 2>& offset)
    : dim_(2), linear_(linear), offset_(offset) {
    ratio_ = spectral_norm_2x2(linear);
    if (!(ratio_ < 1.0))
        throw std::domain_error("AffineContraction: spectral norm of linear part must be < 1");
    const double det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
    if (det == 0.0)
        throw std::domain_error("AffineContraction: linear part must be invertible");
}

Point AffineContraction::apply(const Point& p) const {
    if (p.dim != dim_) throw std::domain_error("AffineContraction::apply: dimension mismatch");
    if (dim_ == 1) return Point::line(linear_[0][0] * p.coord[0] + offset_[0]);
    return Point::plane(linear_[0][0] * p.coord[0] + linear_[0][1] * p.coord[1] + offset_[0],
                        linear_[1][0] * p.coord[0] + linear_[1][1] * p.coord[1] + offset_[1]);
}

Point AffineContraction::apply_inverse(const Point& p) const {
    if (p.dim != dim_)
        throw std::domain_error("AffineContraction::apply_inverse: dimension mismatch");
    if (dim_ == 1) return Point::line((p.coord[0] - offset_[0]) / linear_[0][0]);
    const double det = linear_[0][0] * linear_[1][1] - linear_[0][1] * linear_[1][0];
    const double rx = p.coord[0] - offset_[0];
    const double ry = p.coord[1] - offset_[1];
    return Point::plane((linear_[1][1] * rx - linear_[0][1] * ry) / det,
                        (-linear_[1][0] * rx + linear_[0][0] * ry) / det);
}

double AffineContraction::slope() const {
    if (dim_ != 1) throw std::domain_error("AffineContraction::slope: map is not 1-D");
    return linear_[0][0];
}

double AffineContraction::offset1d() const {
    if (dim_ != 1) throw std::domain_error("AffineContraction::offset1d: map is not 1-D");
    return offset_[0];
}

Point AffineContraction::fixed_point() const {
    // Solve (I - L) x = b.
    if (dim_ == 1) return Point::line(offset_[0] / (1.0 - linear_[0][0]));
    const double a = 1.0 - linear_[0][0], b = -linear_[0][1];
    const double c = -linear_[1][0], d = 1.0 - linear_[1][1];
    const double det = a * d - b * c;
    return Point::plane((d * offset_[0] - b * offset_[1]) / det,
                        (-c * offset_[0] + a * offset_[1]) / det);
}

double BoundingBox::diameter() const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double e = hi[k] - lo[k];
        s += e * e;
    }
    return std::sqrt(s);
}

bool BoundingBox::contains(const Point& p, double slack) const {
    for (int k = 0; k < dim; ++k)
        if (p.coord[k] < lo[k] - slack || p.coord[k] > hi[k] + slack) return false;
    return true;
}

namespace {

std::vector<Point> box_corners(const BoundingBox& box) {
    if (box.dim == 1) return {Point::line(box.lo[0]), Point::line(box.hi[0])};
    return {Point::plane(box.lo[0], box.lo[1]), Point::plane(box.lo[0], box.hi[1]),
            Point::plane(box.hi[0], box.lo[1]), Point::plane(box.hi[0], box.hi[1])};
}

void validate_system(const std::vector<AffineContraction>& maps, const BoundingBox& box) {
    if (maps.size() < 2) throw std::domain_error("IFSystem: at least two maps required");
    const int dim = maps.front().dimension();
    for (const auto& m : maps)
        if (m.dimension() != dim) throw std::domain_error("IFSystem: mixed dimensions");
    if (box.dim != dim) throw std::domain_error("IFSystem: box dimension mismatch");
    // Affine image of a box is spanned by corner images; checking corners
    // (with a hair of slack for roundoff) certifies invariance.
    const double slack = 1e-12 * std::max(1.0, box.diameter());
    for (const auto& m : maps)
        for (const auto& c : box_corners(box))
            if (!box.contains(m.apply(c), slack))
                throw std::domain_error("IFSystem: map does not keep the bounding box invariant");
}

BoundingBox auto_box(const std::vector<AffineContraction>& maps) {
    if (maps.size() < 2) throw std::domain_error("IFSystem: at least two maps required");
    const int dim = maps.front().dimension();
    double rmax = 0.0;
    for (const auto& m : maps) rmax = std::max(rmax, m.ratio());
    const Point c = maps.front().fixed_point();
    double reach = 0.0;
    for (const auto& m : maps) reach = std::max(reach, distance(m.apply(c), c));
    // Ball of radius reach/(1-r) about c is invariant; box it.
    const double radius = (reach / (1.0 - rmax)) * (1.0 + 1e-9) + 1e-15;
    BoundingBox box;
    box.dim = dim;
    for (int k = 0; k < dim; ++k) {
        box.lo[k] = c.coord[k] - radius;
        box.hi[k] = c.coord[k] + radius;
    }
    return box;
}

}  // namespace

IFSystem::IFSystem(std::vector<AffineContraction> maps, const BoundingBox& box)
    : maps_(std::move(maps)), box_(box) {
    validate_system(maps_, box_);
    dim_ = maps_.front().dimension();
    ratio_ = 0.0;
    for (const auto& m : maps_) ratio_ = std::max(ratio_, m.ratio());
}

IFSystem::IFSystem(std::vector<AffineContraction> maps) : IFSystem(maps, auto_box(maps)) {}

PointCloud::PointCloud(std::vector<Point> points, double dedup_tolerance)
    : dedup_tol_(dedup_tolerance) {
    if (points.empty()) throw std::domain_error("PointCloud: empty");
    if (dedup_tolerance < 0.0) throw std::domain_error("PointCloud: negative tolerance");
    const int dim = points.front().dim;
    points_.reserve(points.size());
    for (const auto& p : points) {
        if (p.dim != dim) throw std::domain_error("PointCloud: mixed dimensions");
        bool dup = false;
        for (const auto& q : points_) {
            if (same_point(p, q, dedup_tol_)) {
                dup = true;
                break;
            }
        }
        if (!dup) points_.push_back(p);
    }
}

double PointCloud::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            d = std::max(d, distance(points_[i], points_[j]));
    return d;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.size() == 0 || b.size() == 0) throw std::domain_error("hausdorff_distance: empty cloud");
    if (a.dimension() != b.dimension())
        throw std::domain_error("hausdorff_distance: dimension mismatch");
    auto directed = [](const PointCloud& from, const PointCloud& to) {
        double worst = 0.0;
        for (const auto& p : from.points()) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to.points()) best = std::min(best, distance(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

PointCloud hb_step(const IFSystem& ifs, const PointCloud& k) {
    std::vector<Point> images;
    images.reserve(ifs.size() * k.size());
    for (std::size_t i = 0; i < ifs.size(); ++i)
        for (const auto& p : k.points()) images.push_back(ifs.map(i).apply(p));
    return PointCloud(std::move(images), k.dedup_tolerance());
}

AttractorResult attractor(const IFSystem& ifs, double tol, int max_iter,
                          double dedup_tolerance) {
    if (!(tol > 0.0)) throw std::domain_error("attractor: tol must be positive");
    AttractorResult result{PointCloud({ifs.map(0).fixed_point()}, dedup_tolerance), 0, {}};
    for (int m = 0; m < max_iter; ++m) {
        PointCloud next = hb_step(ifs, result.cloud);
        const double gap = hausdorff_distance(result.cloud, next);
        result.gaps.push_back(gap);
        result.cloud = std::move(next);
        result.iterations = m + 1;
        if (gap <= tol) return result;
    }
    throw ConvergenceError("attractor: max_iter exceeded", result.gaps);
}

PointCloud word_image(const IFSystem& ifs, const Word& a, const PointCloud& base) {
    for (auto l : a.letters)
        if (l >= ifs.size()) throw std::domain_error("word_image: letter out of range");
    std::vector<Point> pts = base.points();
    // sigma_{a_1} o ... o sigma_{a_k}: innermost map is the last letter.
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
        for (auto& p : pts) p = ifs.map(*it).apply(p);
    return PointCloud(std::move(pts), base.dedup_tolerance());
}

}  // namespace ifskit
