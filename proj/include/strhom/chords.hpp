#pragma once

// Binormal chords of compact submanifolds of Euclidean space, found as
// critical points of the smoothed broken-path length
//   L_r(q) = sum_l sqrt(|q^{l+1} - q^l|^2 + r)
// over polygonal paths q^0..q^nu with endpoints constrained to the submanifold.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace strhom::chords {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ParameterOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSegment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A compact component with a local chart around every parameter value.
class Component {
public:
    virtual ~Component() = default;
    virtual int dim() const = 0;
    virtual int ambient_dim() const = 0;
    virtual Vec point(const Vec& theta) const = 0;
    // Orthonormal columns spanning the tangent space at point(theta); this is
    // also the derivative of point(chart(theta, delta)) at delta = 0.
    virtual Mat tangent_basis(const Vec& theta) const = 0;
    virtual Vec chart(const Vec& theta, const Vec& delta) const = 0;
    // Second-order term: d^2/d delta_a d delta_b of <v, point(chart(theta, delta))>
    // at delta = 0, for a fixed ambient vector v.
    virtual Mat curvature(const Vec& theta, const Vec& v) const = 0;
    virtual std::vector<Vec> seeds(int per_circle, int per_sphere, std::uint64_t rng_seed) const = 0;
    virtual std::string describe() const = 0;
};

// Round sphere center + radius * frame * u, u a unit vector in R^{k+1}.
class EmbeddedSphere : public Component {
public:
    EmbeddedSphere(Vec center, Mat frame, double radius);

    int dim() const override { return static_cast<int>(frame_.cols()) - 1; }
    int ambient_dim() const override { return static_cast<int>(frame_.rows()); }
    Vec point(const Vec& u) const override;
    Mat tangent_basis(const Vec& u) const override;
    Vec chart(const Vec& u, const Vec& delta) const override;
    Mat curvature(const Vec& u, const Vec& v) const override;
    std::vector<Vec> seeds(int per_circle, int per_sphere, std::uint64_t rng_seed) const override;
    std::string describe() const override;

    const Vec& center() const { return center_; }
    const Mat& frame() const { return frame_; }
    double radius() const { return radius_; }

private:
    Mat local_tangent(const Vec& u) const;  // orthonormal basis of u-perp in R^{k+1}

    Vec center_;
    Mat frame_;
    double radius_;
};

struct ParamSubmanifold {
    std::string name;
    int ambient_dim = 0;
    std::vector<std::shared_ptr<const Component>> components;
};

ParamSubmanifold builtin_config(const std::string& name, int d, double z2star = 3.0);
ParamSubmanifold single_circle();

struct BrokenPath {
    std::size_t comp0 = 0, comp1 = 0;
    Vec theta0, theta1;
    std::vector<Vec> q;  // q[0] = point(theta0), q[nu] = point(theta1)

    int nu() const { return static_cast<int>(q.size()) - 1; }
    double polygonal_length() const;
    std::vector<double> segment_lengths() const;
};

// Equally spaced straight path between the two endpoints.
BrokenPath straight_path(const ParamSubmanifold& K, std::size_t c0, const Vec& theta0, std::size_t c1,
                         const Vec& theta1, int nu);
// Endpoints recomputed from the parameters.
void sync_endpoints(const ParamSubmanifold& K, BrokenPath& path);

double sigma(double z, double r);
double l_r_value(const BrokenPath& path, double r);

// Flat coordinates: [delta0 (dim c0), q^1 .. q^{nu-1}, delta1 (dim c1)].
std::size_t variable_count(const ParamSubmanifold& K, const BrokenPath& path);
Vec l_r_gradient(const ParamSubmanifold& K, const BrokenPath& path, double r);
Mat l_r_hessian(const ParamSubmanifold& K, const BrokenPath& path, double r);
// Moves the path by `step` in flat coordinates (endpoints through the charts).
BrokenPath apply_step(const ParamSubmanifold& K, const BrokenPath& path, const Vec& step);

// max_l sigma_r(|q^{l+1} - q^l|^2)
double max_segment_value(const BrokenPath& path, double r);

struct ChordConfig {
    int nu = 16;
    std::vector<double> r_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
    double grad_tol = 1e-10;
    double dedup_len_tol = 1e-6;
    double dedup_pt_tol = 1e-4;
    double length_bound = 1e300;  // a
    double epsilon_g = 1.0;
    double b0 = 100.0;
    double eps_min = 1e-3;
    int seeds_per_circle = 24;
    int seeds_per_sphere = 162;
    int max_descent_steps = 400;
    int max_polish_steps = 60;
    double interior_perturbation = 1e-3;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct DescentResult {
    BrokenPath path;
    bool converged = false;
    int accepted_steps = 0;
    double grad_norm = 0;
    int lr_violations = 0;  // accepted steps with L_r increasing
    int f_violations = 0;   // accepted steps with the max-segment value increasing
    std::vector<double> lr_trace, f_trace;
};

// Steepest descent with backtracking; a step is accepted only when it passes
// the Armijo test and does not raise the max-segment value.
DescentResult descend(const ParamSubmanifold& K, const BrokenPath& path, double r, const ChordConfig& cfg);

struct PolishResult {
    BrokenPath path;
    bool converged = false;
    double grad_norm = 0;
    int steps = 0;
};
// Levenberg-Marquardt on the gradient; converges to critical points of any index.
PolishResult polish(const ParamSubmanifold& K, const BrokenPath& path, double r, const ChordConfig& cfg);

// Midpoint insertion; doubles nu.
BrokenPath refine(const BrokenPath& path);

double binormality_residual(const ParamSubmanifold& K, const BrokenPath& path, double eps_min = 1e-3);

// Endpoint pairs where the chord p0 -> p1 is perpendicular to both components,
// from the seed grid for the ordered component pair (c0, c1).
struct EndpointCritical {
    std::size_t comp0 = 0, comp1 = 0;
    Vec theta0, theta1;
    double length = 0;
};
struct EndpointSearch {
    std::vector<EndpointCritical> points;  // one per distinct endpoint cluster
    std::size_t attempted = 0;
    std::size_t failed = 0;
};
EndpointSearch critical_endpoint_pairs(const ParamSubmanifold& K, std::size_t c0, std::size_t c1,
                                       const ChordConfig& cfg);

struct ChordResult {
    std::size_t comp0 = 0, comp1 = 0;
    Vec theta0, theta1;
    double length = 0;
    double refined_length = 0;  // after nu -> 2 nu and re-polish
    double residual = 0;
    double grad_norm = 0;
    int multiplicity = 0;
    BrokenPath path;
};

struct SpectrumReport {
    std::vector<ChordResult> chords;  // sorted by length
    std::size_t seeds_attempted = 0;
    std::size_t seeds_failed = 0;
    std::size_t chords_rejected = 0;  // failed the residual or refinement checks
    std::size_t straight_restarts = 0;  // perturbed run failed, unperturbed run used
    int descent_steps = 0;
    int lr_violations = 0;
    int f_violations = 0;

    double failure_rate() const;
    std::vector<double> lengths() const;
};

SpectrumReport find_spectrum(const ParamSubmanifold& K, const ChordConfig& cfg);

// Sums of m lengths (with repetition) below a, sorted and deduplicated.
std::vector<double> chord_sum_spectrum(const std::vector<double>& lengths, int m, double a, double tol = 1e-6);

}  // namespace strhom::chords
