#include "strhom/chords.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

namespace strhom::chords {

namespace {

// Vertices of the icosahedron subdivided `level` times, projected to S^2.
std::vector<Eigen::Vector3d> icosphere(int level) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            int idx = static_cast<int>(v.size()) - 1;
            mid.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        for (const auto& f : faces) {
            int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

EmbeddedSphere::EmbeddedSphere(Vec center, Mat frame, double radius)
    : center_(std::move(center)), frame_(std::move(frame)), radius_(radius) {
    if (center_.size() != frame_.rows()) throw std::invalid_argument("sphere center and frame disagree on dimension");
    if (frame_.cols() < 2) throw std::invalid_argument("sphere frame needs at least two columns");
    if (!(radius_ > 0)) throw std::invalid_argument("sphere radius must be positive");
    Mat gram = frame_.transpose() * frame_;
    if ((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("sphere frame must be orthonormal");
}

Vec EmbeddedSphere::point(const Vec& u) const { return center_ + radius_ * (frame_ * u); }

Mat EmbeddedSphere::local_tangent(const Vec& u) const {
    const Eigen::Index m = u.size();
    if (m == 2) {
        Mat t(2, 1);
        t << -u(1), u(0);
        return t;
    }
    // Householder reflection sending u to a coordinate axis; its other columns
    // are an orthonormal basis of the complement of u.
    Eigen::Index j = 0;
    u.cwiseAbs().maxCoeff(&j);
    Vec v = u;
    v(j) += u(j) >= 0 ? 1.0 : -1.0;
    Mat h = Mat::Identity(m, m) - 2.0 * v * v.transpose() / v.squaredNorm();
    Mat t(m, m - 1);
    for (Eigen::Index c = 0, k = 0; c < m; ++c)
        if (c != j) t.col(k++) = h.col(c);
    return t;
}

Mat EmbeddedSphere::tangent_basis(const Vec& u) const { return frame_ * local_tangent(u); }

Vec EmbeddedSphere::chart(const Vec& u, const Vec& delta) const {
    Vec w = u + local_tangent(u) * delta / radius_;
    return w.normalized();
}

Mat EmbeddedSphere::curvature(const Vec& u, const Vec& v) const {
    const double c = -v.dot(frame_ * u) / radius_;
    return c * Mat::Identity(dim(), dim());
}

std::vector<Vec> EmbeddedSphere::seeds(int per_circle, int per_sphere, std::uint64_t rng_seed) const {
    std::vector<Vec> out;
    const int k = dim();
    if (k == 1) {
        for (int i = 0; i < per_circle; ++i) {
            double a = 2 * std::numbers::pi * i / per_circle;
            Vec u(2);
            u << std::cos(a), std::sin(a);
            out.push_back(u);
        }
    } else if (k == 2 && per_sphere == 162) {
        for (const auto& p : icosphere(2)) out.push_back(Vec(p));
    } else {
        std::mt19937_64 rng(rng_seed);
        std::normal_distribution<double> n01;
        for (int i = 0; i < per_sphere; ++i) {
            Vec u(k + 1);
            for (int c = 0; c <= k; ++c) u(c) = n01(rng);
            out.push_back(u.normalized());
        }
    }
    return out;
}

std::string EmbeddedSphere::describe() const {
    std::ostringstream os;
    os << "S^" << dim() << " radius " << radius_ << " center (";
    for (Eigen::Index i = 0; i < center_.size(); ++i) os << (i ? "," : "") << center_(i);
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

ParamSubmanifold builtin_config(const std::string& name, int d, double z2star) {
    if (d < 2) throw ParameterOutOfRange("builtin configurations need d >= 2");
    const int n = 2 * d - 1;
    // Coordinates (z0, z1, z2) with z0 = 0..d-2, z1 = d-1, z2 = d..2d-2.
    Mat frame01 = Mat::Zero(n, d);
    for (int c = 0; c < d; ++c) frame01(c, c) = 1;
    auto k0 = std::make_shared<EmbeddedSphere>(Vec::Zero(n), frame01, 1.0);

    ParamSubmanifold K;
    K.ambient_dim = n;
    if (name == "hopf") {
        Mat frame12 = Mat::Zero(n, d);
        for (int c = 0; c < d; ++c) frame12(d - 1 + c, c) = 1;
        Vec center = Vec::Zero(n);
        center(d - 1) = 1;
        K.name = "hopf(" + std::to_string(d) + ")";
        K.components = {k0, std::make_shared<EmbeddedSphere>(center, frame12, 1.0)};
    } else if (name == "unlink") {
        if (!(std::abs(z2star) > 2)) throw ParameterOutOfRange("unlink configuration needs |z2*| > 2");
        Vec center = Vec::Zero(n);
        center(d) = z2star;
        std::ostringstream os;
        os << "unlink(" << d << "," << z2star << ")";
        K.name = os.str();
        K.components = {k0, std::make_shared<EmbeddedSphere>(center, frame01, 1.0)};
    } else {
        throw ParameterOutOfRange("unknown builtin configuration '" + name + "'");
    }
    return K;
}

ParamSubmanifold single_circle() {
    ParamSubmanifold K;
    K.name = "circle";
    K.ambient_dim = 2;
    K.components = {std::make_shared<EmbeddedSphere>(Vec::Zero(2), Mat::Identity(2, 2), 1.0)};
    return K;
}

// ---------------------------------------------------------------------------

double BrokenPath::polygonal_length() const {
    double total = 0;
    for (std::size_t l = 0; l + 1 < q.size(); ++l) total += (q[l + 1] - q[l]).norm();
    return total;
}

std::vector<double> BrokenPath::segment_lengths() const {
    std::vector<double> out;
    for (std::size_t l = 0; l + 1 < q.size(); ++l) out.push_back((q[l + 1] - q[l]).norm());
    return out;
}

BrokenPath straight_path(const ParamSubmanifold& K, std::size_t c0, const Vec& theta0, std::size_t c1,
                         const Vec& theta1, int nu) {
    if (nu < 1) throw std::invalid_argument("nu must be >= 1");
    BrokenPath p;
    p.comp0 = c0;
    p.comp1 = c1;
    p.theta0 = theta0;
    p.theta1 = theta1;
    Vec a = K.components.at(c0)->point(theta0), b = K.components.at(c1)->point(theta1);
    for (int l = 0; l <= nu; ++l) p.q.push_back(a + (b - a) * (static_cast<double>(l) / nu));
    p.q.front() = a;
    p.q.back() = b;
    return p;
}

void sync_endpoints(const ParamSubmanifold& K, BrokenPath& path) {
    path.q.front() = K.components.at(path.comp0)->point(path.theta0);
    path.q.back() = K.components.at(path.comp1)->point(path.theta1);
}

double sigma(double z, double r) { return std::sqrt(z + r); }

double l_r_value(const BrokenPath& path, double r) {
    if (!(r > 0)) throw std::invalid_argument("smoothing parameter r must be positive");
    double total = 0;
    for (std::size_t l = 0; l + 1 < path.q.size(); ++l) total += sigma((path.q[l + 1] - path.q[l]).squaredNorm(), r);
    return total;
}

double max_segment_value(const BrokenPath& path, double r) {
    double m = 0;
    for (std::size_t l = 0; l + 1 < path.q.size(); ++l) m = std::max(m, sigma((path.q[l + 1] - path.q[l]).squaredNorm(), r));
    return m;
}

std::size_t variable_count(const ParamSubmanifold& K, const BrokenPath& path) {
    const auto n = static_cast<std::size_t>(K.ambient_dim);
    return static_cast<std::size_t>(K.components.at(path.comp0)->dim()) + n * static_cast<std::size_t>(path.nu() - 1) +
           static_cast<std::size_t>(K.components.at(path.comp1)->dim());
}

namespace {

// Gradient of L_r with respect to every point q^l, endpoints included.
std::vector<Vec> ambient_gradient(const BrokenPath& path, double r) {
    std::vector<Vec> g(path.q.size(), Vec::Zero(path.q.front().size()));
    for (std::size_t l = 0; l + 1 < path.q.size(); ++l) {
        Vec d = path.q[l + 1] - path.q[l];
        Vec t = d / sigma(d.squaredNorm(), r);
        g[l] -= t;
        g[l + 1] += t;
    }
    return g;
}

}  // namespace

Vec l_r_gradient(const ParamSubmanifold& K, const BrokenPath& path, double r) {
    if (!(r > 0)) throw std::invalid_argument("smoothing parameter r must be positive");
    const auto& comp0 = *K.components.at(path.comp0);
    const auto& comp1 = *K.components.at(path.comp1);
    const int n = K.ambient_dim, nu = path.nu(), k0 = comp0.dim(), k1 = comp1.dim();
    auto g = ambient_gradient(path, r);
    Vec out(static_cast<Eigen::Index>(variable_count(K, path)));
    out.head(k0) = comp0.tangent_basis(path.theta0).transpose() * g.front();
    for (int l = 1; l < nu; ++l) out.segment(k0 + n * (l - 1), n) = g[static_cast<std::size_t>(l)];
    out.tail(k1) = comp1.tangent_basis(path.theta1).transpose() * g.back();
    return out;
}

Mat l_r_hessian(const ParamSubmanifold& K, const BrokenPath& path, double r) {
    const auto& comp0 = *K.components.at(path.comp0);
    const auto& comp1 = *K.components.at(path.comp1);
    const int n = K.ambient_dim, nu = path.nu(), k0 = comp0.dim(), k1 = comp1.dim();
    const int ambient_size = n * (nu + 1);
    Mat h = Mat::Zero(ambient_size, ambient_size);
    for (int l = 0; l < nu; ++l) {
        Vec d = path.q[static_cast<std::size_t>(l + 1)] - path.q[static_cast<std::size_t>(l)];
        double phi = sigma(d.squaredNorm(), r);
        Mat a = Mat::Identity(n, n) / phi - d * d.transpose() / (phi * phi * phi);
        h.block(n * l, n * l, n, n) += a;
        h.block(n * (l + 1), n * (l + 1), n, n) += a;
        h.block(n * l, n * (l + 1), n, n) -= a;
        h.block(n * (l + 1), n * l, n, n) -= a;
    }
    const auto vars = static_cast<int>(variable_count(K, path));
    Mat q = Mat::Zero(ambient_size, vars);
    q.block(0, 0, n, k0) = comp0.tangent_basis(path.theta0);
    for (int l = 1; l < nu; ++l) q.block(n * l, k0 + n * (l - 1), n, n) = Mat::Identity(n, n);
    q.block(n * nu, vars - k1, n, k1) = comp1.tangent_basis(path.theta1);
    Mat out = q.transpose() * h * q;
    auto g = ambient_gradient(path, r);
    out.block(0, 0, k0, k0) += comp0.curvature(path.theta0, g.front());
    out.block(vars - k1, vars - k1, k1, k1) += comp1.curvature(path.theta1, g.back());
    return out;
}

BrokenPath apply_step(const ParamSubmanifold& K, const BrokenPath& path, const Vec& step) {
    const auto& comp0 = *K.components.at(path.comp0);
    const auto& comp1 = *K.components.at(path.comp1);
    const int n = K.ambient_dim, nu = path.nu(), k0 = comp0.dim(), k1 = comp1.dim();
    if (step.size() != static_cast<Eigen::Index>(variable_count(K, path))) throw std::invalid_argument("step size mismatch");
    BrokenPath out = path;
    out.theta0 = comp0.chart(path.theta0, step.head(k0));
    for (int l = 1; l < nu; ++l) out.q[static_cast<std::size_t>(l)] += step.segment(k0 + n * (l - 1), n);
    out.theta1 = comp1.chart(path.theta1, step.tail(k1));
    sync_endpoints(K, out);
    return out;
}

// ---------------------------------------------------------------------------

void ChordConfig::validate() const {
    if (nu < 1) throw std::invalid_argument("nu must be >= 1");
    if (r_schedule.empty()) throw std::invalid_argument("r schedule must not be empty");
    for (std::size_t i = 0; i < r_schedule.size(); ++i) {
        if (!(r_schedule[i] > 0)) throw std::invalid_argument("r schedule entries must be positive");
        if (i && !(r_schedule[i] < r_schedule[i - 1])) throw std::invalid_argument("r schedule must strictly decrease");
    }
    for (double x : {grad_tol, dedup_len_tol, dedup_pt_tol, length_bound, epsilon_g, b0, eps_min})
        if (!(x > 0)) throw std::invalid_argument("chord tolerances and caps must be positive");
    if (seeds_per_circle < 1 || seeds_per_sphere < 1) throw std::invalid_argument("seed counts must be positive");
}

DescentResult descend(const ParamSubmanifold& K, const BrokenPath& start, double r, const ChordConfig& cfg) {
    DescentResult res;
    res.path = start;
    double value = l_r_value(res.path, r);
    double fmax = max_segment_value(res.path, r);
    res.lr_trace.push_back(value);
    res.f_trace.push_back(fmax);
    Vec g = l_r_gradient(K, res.path, r);
    double t = 1e-2;
    for (int it = 0; it < cfg.max_descent_steps; ++it) {
        const double gn2 = g.squaredNorm();
        if (std::sqrt(gn2) < cfg.grad_tol) break;
        bool accepted = false;
        while (t > 1e-18) {
            BrokenPath cand = apply_step(K, res.path, -t * g);
            double cv = l_r_value(cand, r);
            double cf = max_segment_value(cand, r);
            if (cv <= value - 1e-4 * t * gn2 && cf <= fmax) {
                if (cv > value) ++res.lr_violations;
                if (cf > fmax) ++res.f_violations;
                res.path = std::move(cand);
                value = cv;
                fmax = cf;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        ++res.accepted_steps;
        res.lr_trace.push_back(value);
        res.f_trace.push_back(fmax);
        g = l_r_gradient(K, res.path, r);
        t *= 2;
    }
    res.grad_norm = g.norm();
    res.converged = res.grad_norm < cfg.grad_tol;
    return res;
}

PolishResult polish(const ParamSubmanifold& K, const BrokenPath& start, double r, const ChordConfig& cfg) {
    PolishResult res;
    res.path = start;
    Vec g = l_r_gradient(K, res.path, r);
    double gn = g.norm();
    double lambda = 1e-8;
    for (int it = 0; it < cfg.max_polish_steps && gn >= cfg.grad_tol; ++it) {
        Mat h = l_r_hessian(K, res.path, r);
        Mat normal = h.transpose() * h;
        const double scale = std::max(normal.diagonal().maxCoeff(), 1e-300);
        bool accepted = false;
        while (lambda < 1e8) {
            Mat damped = normal + lambda * scale * Mat::Identity(normal.rows(), normal.cols());
            Vec step = damped.ldlt().solve(-h.transpose() * g);
            BrokenPath cand = apply_step(K, res.path, step);
            Vec cg = l_r_gradient(K, cand, r);
            double cn = cg.norm();
            if (std::isfinite(cn) && cn < gn) {
                res.path = std::move(cand);
                g = cg;
                gn = cn;
                lambda = std::max(lambda * 0.1, 1e-18);
                accepted = true;
                break;
            }
            lambda *= 10;
        }
        ++res.steps;
        if (!accepted) break;
    }
    res.grad_norm = gn;
    res.converged = gn < cfg.grad_tol;
    return res;
}

BrokenPath refine(const BrokenPath& path) {
    BrokenPath out = path;
    out.q.clear();
    for (std::size_t l = 0; l + 1 < path.q.size(); ++l) {
        out.q.push_back(path.q[l]);
        out.q.push_back(0.5 * (path.q[l] + path.q[l + 1]));
    }
    out.q.push_back(path.q.back());
    return out;
}

double binormality_residual(const ParamSubmanifold& K, const BrokenPath& path, double eps_min) {
    const int nu = path.nu();
    auto segs = path.segment_lengths();
    for (double s : segs)
        if (!(s > eps_min / nu)) throw DegenerateSegment("segment shorter than eps_min / nu");
    double worst = 0;
    Vec prev;
    for (int l = 0; l < nu; ++l) {
        Vec u = (path.q[static_cast<std::size_t>(l + 1)] - path.q[static_cast<std::size_t>(l)]) / segs[static_cast<std::size_t>(l)];
        if (l) worst = std::max(worst, (u - prev).norm());
        prev = u;
    }
    Vec u0 = (path.q[1] - path.q[0]) / segs.front();
    Vec u1 = (path.q.back() - path.q[path.q.size() - 2]) / segs.back();
    worst = std::max(worst, (K.components.at(path.comp0)->tangent_basis(path.theta0).transpose() * u0).norm());
    worst = std::max(worst, (K.components.at(path.comp1)->tangent_basis(path.theta1).transpose() * u1).norm());
    auto [mn, mx] = std::minmax_element(segs.begin(), segs.end());
    double mean = path.polygonal_length() / nu;
    worst = std::max(worst, (*mx - *mn) / mean);
    return worst;
}

// ---------------------------------------------------------------------------

namespace {

struct ReducedSolve {
    bool converged = false;
    Vec theta0, theta1;
    double length = 0;
};

// Newton / Levenberg-Marquardt on the gradient of E = |p0 - p1|^2 / 2 over
// the two endpoint parameters.
ReducedSolve solve_endpoints(const Component& a, const Component& b, Vec u0, Vec u1) {
    const int k0 = a.dim(), k1 = b.dim();
    auto grad = [&](const Vec& x0, const Vec& x1, Vec& g, Vec& r) {
        r = a.point(x0) - b.point(x1);
        g.resize(k0 + k1);
        g.head(k0) = a.tangent_basis(x0).transpose() * r;
        g.tail(k1) = -(b.tangent_basis(x1).transpose() * r);
    };
    Vec g, r;
    grad(u0, u1, g, r);
    double gn = g.norm();
    double lambda = 1e-10;
    ReducedSolve out;
    for (int it = 0; it < 100; ++it) {
        if (gn <= 1e-13 * std::max(1.0, r.norm())) {
            out.converged = true;
            break;
        }
        Mat j0 = a.tangent_basis(u0), j1 = b.tangent_basis(u1);
        Mat h(k0 + k1, k0 + k1);
        h.block(0, 0, k0, k0) = j0.transpose() * j0 + a.curvature(u0, r);
        h.block(k0, k0, k1, k1) = j1.transpose() * j1 + b.curvature(u1, -r);
        h.block(0, k0, k0, k1) = -(j0.transpose() * j1);
        h.block(k0, 0, k1, k0) = h.block(0, k0, k0, k1).transpose();
        Mat normal = h.transpose() * h;
        bool accepted = false;
        while (lambda < 1e10) {
            Mat damped = normal + lambda * Mat::Identity(k0 + k1, k0 + k1);
            Vec step = damped.ldlt().solve(-h.transpose() * g);
            // Keep chart steps moderate; the charts are only local.
            double sn = step.norm();
            if (sn > 0.5) step *= 0.5 / sn;
            Vec c0 = a.chart(u0, step.head(k0)), c1 = b.chart(u1, step.tail(k1));
            Vec cg, cr;
            grad(c0, c1, cg, cr);
            double cn = cg.norm();
            if (std::isfinite(cn) && cn < gn) {
                u0 = c0;
                u1 = c1;
                g = cg;
                r = cr;
                gn = cn;
                lambda = std::max(lambda * 0.1, 1e-14);
                accepted = true;
                break;
            }
            lambda *= 10;
        }
        if (!accepted) {
            out.converged = gn <= 1e-11 * std::max(1.0, r.norm());
            break;
        }
    }
    if (!out.converged && gn <= 1e-13 * std::max(1.0, r.norm())) out.converged = true;
    out.theta0 = u0;
    out.theta1 = u1;
    out.length = r.norm();
    return out;
}

}  // namespace

EndpointSearch critical_endpoint_pairs(const ParamSubmanifold& K, std::size_t c0, std::size_t c1,
                                       const ChordConfig& cfg) {
    const auto& a = *K.components.at(c0);
    const auto& b = *K.components.at(c1);
    auto s0 = a.seeds(cfg.seeds_per_circle, cfg.seeds_per_sphere, cfg.rng_seed + 17 * c0);
    auto s1 = b.seeds(cfg.seeds_per_circle, cfg.seeds_per_sphere, cfg.rng_seed + 17 * c1);
    EndpointSearch out;
    // Endpoint clusters, keyed by coarse rounding for quick lookup.
    std::map<std::vector<long>, std::size_t> buckets;
    const double cell = std::max(cfg.dedup_pt_tol, cfg.dedup_len_tol) * 10;
    for (std::size_t i = 0; i < s0.size(); ++i) {
        for (std::size_t j = 0; j < s1.size(); ++j) {
            if (c0 == c1 && i == j) continue;
            ++out.attempted;
            ReducedSolve rs = solve_endpoints(a, b, s0[i], s1[j]);
            if (!rs.converged) {
                ++out.failed;
                continue;
            }
            if (rs.length < cfg.eps_min) continue;
            Vec p0 = a.point(rs.theta0), p1 = b.point(rs.theta1);
            std::vector<long> key;
            key.push_back(std::lround(rs.length / cell));
            for (Eigen::Index c = 0; c < p0.size(); ++c) key.push_back(std::lround(p0(c) / cell));
            for (Eigen::Index c = 0; c < p1.size(); ++c) key.push_back(std::lround(p1(c) / cell));
            if (buckets.count(key)) continue;
            buckets.emplace(key, out.points.size());
            out.points.push_back({c0, c1, rs.theta0, rs.theta1, rs.length});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double SpectrumReport::failure_rate() const {
    std::size_t attempts = seeds_attempted + chords.size() + chords_rejected;
    if (attempts == 0) return 0;
    return static_cast<double>(seeds_failed + chords_rejected) / static_cast<double>(attempts);
}

std::vector<double> SpectrumReport::lengths() const {
    std::vector<double> out;
    for (const auto& c : chords) out.push_back(c.length);
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double x : out)
        if (uniq.empty() || x - uniq.back() > 1e-6) uniq.push_back(x);
    return uniq;
}

namespace {

struct PipelineOutcome {
    bool ok = false;
    ChordResult chord;
    int descent_steps = 0, lr_violations = 0, f_violations = 0;
};

PipelineOutcome run_pipeline(const ParamSubmanifold& K, const EndpointCritical& seed, double perturbation,
                             const ChordConfig& cfg) {
    PipelineOutcome out;
    BrokenPath path = straight_path(K, seed.comp0, seed.theta0, seed.comp1, seed.theta1, cfg.nu);
    if (perturbation > 0) {
        std::mt19937_64 rng(cfg.rng_seed * 7919 + seed.comp0 * 31 + seed.comp1);
        std::normal_distribution<double> n01;
        for (int l = 1; l < path.nu(); ++l)
            for (Eigen::Index c = 0; c < path.q[static_cast<std::size_t>(l)].size(); ++c)
                path.q[static_cast<std::size_t>(l)](c) += perturbation * seed.length * n01(rng);
    }
    for (double r : cfg.r_schedule) {
        DescentResult dr = descend(K, path, r, cfg);
        out.descent_steps += dr.accepted_steps;
        out.lr_violations += dr.lr_violations;
        out.f_violations += dr.f_violations;
        path = std::move(dr.path);
    }
    // At small r the spacing of interior points is nearly free, so the final
    // polish runs at the largest r: binormal chords with equal spacing are
    // critical for every r, and there the spacing is stiff.
    const double r_final = cfg.r_schedule.back(), r_stiff = cfg.r_schedule.front();
    PolishResult pr = polish(K, path, r_final, cfg);
    pr = polish(K, pr.path, r_stiff, cfg);
    path = pr.path;
    // Segment cap: refine until every segment is shorter than epsilon_g.
    while (true) {
        auto segs = path.segment_lengths();
        if (*std::max_element(segs.begin(), segs.end()) < cfg.epsilon_g) break;
        pr = polish(K, refine(path), r_stiff, cfg);
        path = pr.path;
    }
    double residual;
    try {
        residual = binormality_residual(K, path, cfg.eps_min);
    } catch (const DegenerateSegment&) {
        return out;
    }
    PolishResult fine = polish(K, refine(path), r_stiff, cfg);

    ChordResult& c = out.chord;
    c.comp0 = seed.comp0;
    c.comp1 = seed.comp1;
    c.theta0 = path.theta0;
    c.theta1 = path.theta1;
    c.length = path.polygonal_length();
    c.refined_length = fine.path.polygonal_length();
    c.residual = residual;
    c.grad_norm = pr.grad_norm;
    c.path = path;
    out.ok = pr.converged && fine.converged && residual < 1e-8 &&
             std::abs(c.refined_length - c.length) < cfg.dedup_len_tol &&
             std::abs(c.length - seed.length) < cfg.dedup_len_tol;
    return out;
}

}  // namespace

SpectrumReport find_spectrum(const ParamSubmanifold& K, const ChordConfig& cfg) {
    cfg.validate();
    SpectrumReport report;
    for (std::size_t c0 = 0; c0 < K.components.size(); ++c0) {
        for (std::size_t c1 = c0; c1 < K.components.size(); ++c1) {
            EndpointSearch search = critical_endpoint_pairs(K, c0, c1, cfg);
            report.seeds_attempted += search.attempted;
            report.seeds_failed += search.failed;
            auto pts = search.points;
            std::stable_sort(pts.begin(), pts.end(),
                             [](const EndpointCritical& x, const EndpointCritical& y) { return x.length < y.length; });
            // Group endpoint clusters by length; one full-path run per group.
            for (std::size_t i = 0; i < pts.size();) {
                std::size_t j = i;
                while (j < pts.size() && pts[j].length - pts[i].length < cfg.dedup_len_tol) ++j;
                const EndpointCritical& rep = pts[i];
                const int multiplicity = static_cast<int>(j - i);
                i = j;
                if (!(rep.length < cfg.length_bound) || !(rep.length < cfg.b0)) continue;
                PipelineOutcome po = run_pipeline(K, rep, cfg.interior_perturbation, cfg);
                if (!po.ok) {
                    // The perturbed start may have drifted off a saddle; the
                    // unperturbed straight path is already critical.
                    ++report.straight_restarts;
                    PipelineOutcome retry = run_pipeline(K, rep, 0.0, cfg);
                    retry.descent_steps += po.descent_steps;
                    retry.lr_violations += po.lr_violations;
                    retry.f_violations += po.f_violations;
                    po = std::move(retry);
                }
                report.descent_steps += po.descent_steps;
                report.lr_violations += po.lr_violations;
                report.f_violations += po.f_violations;
                if (!po.ok) {
                    ++report.chords_rejected;
                    continue;
                }
                po.chord.multiplicity = multiplicity;
                report.chords.push_back(std::move(po.chord));
            }
        }
    }
    std::stable_sort(report.chords.begin(), report.chords.end(),
                     [](const ChordResult& x, const ChordResult& y) { return x.length < y.length; });
    return report;
}

std::vector<double> chord_sum_spectrum(const std::vector<double>& lengths, int m, double a, double tol) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    std::vector<double> sorted = lengths;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> sums;
    std::vector<std::size_t> idx;
    // Nondecreasing index tuples enumerate multisets once each.
    auto rec = [&](auto&& self, std::size_t start, int left, double acc) -> void {
        if (left == 0) {
            if (acc < a) sums.push_back(acc);
            return;
        }
        for (std::size_t i = start; i < sorted.size(); ++i) {
            if (acc + sorted[i] * left >= a) break;
            self(self, i, left - 1, acc + sorted[i]);
        }
    };
    rec(rec, 0, m, 0.0);
    std::sort(sums.begin(), sums.end());
    std::vector<double> out;
    for (double s : sums)
        if (out.empty() || s - out.back() > tol) out.push_back(s);
    return out;
}

}  // namespace strhom::chords
