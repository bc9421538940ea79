#ifndef IFSKIT_GEOMETRY_HPP
#define IFSKIT_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ifskit {

/// Point in the ambient space (dimension 1 or 2). One-dimensional points
/// keep y = 0 so Euclidean distance works uniformly.
struct Point {
    std::array<double, 2> coord{0.0, 0.0};
    int dim = 1;

    static Point line(double x) { return Point{{x, 0.0}, 1}; }
    static Point plane(double x, double y) { return Point{{x, y}, 2}; }

    double x() const { return coord[0]; }
    double y() const { return coord[1]; }
};

double distance(const Point& a, const Point& b);
bool same_point(const Point& a, const Point& b, double tol);

/// Word over the alphabet {0, ..., N-1}. Empty words are allowed.
struct Word {
    std::vector<std::uint8_t> letters;

    std::size_t length() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    std::string str() const;

    bool operator==(const Word& other) const { return letters == other.letters; }
};

/// Affine map x -> L x + b with spectral norm of L strictly below 1.
/// The Lipschitz ratio is the spectral norm, computed on construction
/// from a symmetric eigen-decomposition of L^T L.
class AffineContraction {
public:
    AffineContraction(double slope, double offset);                       // 1-D
    AffineContraction(const std::array<std::array<double, 2>, 2>& linear,
                      const std::array<double, 2>& offset);               // 2-D

    int dimension() const { return dim_; }
    double ratio() const { return ratio_; }

    Point apply(const Point& p) const;
    /// Exact affine inverse; requires an invertible linear part.
    Point apply_inverse(const Point& p) const;
    /// 1-D slope and offset accessors (domain error in 2-D).
    double slope() const;
    double offset1d() const;

    Point fixed_point() const;

private:
    int dim_;
    std::array<std::array<double, 2>, 2> linear_{};
    std::array<double, 2> offset_{};
    double ratio_;
};

/// Axis-aligned box guaranteed to contain the attractor.
struct BoundingBox {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    int dim = 1;

    double diameter() const;
    bool contains(const Point& p, double slack = 0.0) const;
};

class IFSystem {
public:
    /// Box is validated: every map must send it into itself.
    IFSystem(std::vector<AffineContraction> maps, const BoundingBox& box);
    /// Convenience: derive an invariant box from the maps' fixed points.
    explicit IFSystem(std::vector<AffineContraction> maps);

    std::size_t size() const { return maps_.size(); }
    int dimension() const { return dim_; }
    double ratio() const { return ratio_; }
    const AffineContraction& map(std::size_t i) const { return maps_.at(i); }
    const BoundingBox& bounding_box() const { return box_; }

private:
    std::vector<AffineContraction> maps_;
    BoundingBox box_;
    int dim_;
    double ratio_;
};

/// Finite point set with a minimum-separation invariant: stored points are
/// pairwise farther apart than dedup_tolerance (exact duplicates only when 0).
class PointCloud {
public:
    PointCloud(std::vector<Point> points, double dedup_tolerance = 0.0);

    const std::vector<Point>& points() const { return points_; }
    double dedup_tolerance() const { return dedup_tol_; }
    std::size_t size() const { return points_.size(); }
    int dimension() const { return points_.front().dim; }
    double diameter() const;

private:
    std::vector<Point> points_;
    double dedup_tol_;
};

double hausdorff_distance(const PointCloud& a, const PointCloud& b);

/// One application of the Hutchinson-Barnsley operator K -> union sigma_i(K),
/// deduplicated at the cloud's tolerance. Maps are applied in index order and
/// merged deterministically.
PointCloud hb_step(const IFSystem& ifs, const PointCloud& k);

struct AttractorResult {
    PointCloud cloud;
    int iterations = 0;
    std::vector<double> gaps;  // Hausdorff distance between successive iterates
};

/// Iterates hb_step from the fixed point of sigma_0 until the Hausdorff gap
/// drops to tol. Throws ConvergenceError (with the gap history) past max_iter.
AttractorResult attractor(const IFSystem& ifs, double tol, int max_iter,
                          double dedup_tolerance = 0.0);

/// Image of a cloud under sigma_{a_1} o ... o sigma_{a_k}.
PointCloud word_image(const IFSystem& ifs, const Word& a, const PointCloud& base);

}  // namespace ifskit

#endif
