// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "strhom/chords.hpp"
#include "strhom/cord.hpp"
#include "strhom/free_dga.hpp"
#include "strhom/specseq.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace strhom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

dga::LengthWindow window(const std::string& a) { return dga::LengthWindow{exactlin::parse_rational(a)}; }

struct Criterion {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) detail << "failed: ";
            else detail << "; ";
            detail << what;
            ok = false;
        }
    }
};

int failures = 0;

void report(int n, const std::string& title, const std::function<void(Criterion&)>& body) {
    Criterion c;
    auto t = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t);
    if (!c.ok) ++failures;
    std::printf("AC%-2d %s  %s (%.2f s)%s%s\n", n, c.ok ? "PASS" : "FAIL", title.c_str(), s,
                c.detail.str().empty() ? "" : "  ", c.detail.str().c_str());
    std::fflush(stdout);
}

template <typename T>
std::string show(const std::vector<T>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

// Number of chord-generator words by (letter count, degree) with length < a.
std::map<std::pair<int, int>, std::size_t> chord_word_counts(const dga::Dga& g, double a) {
    std::vector<std::pair<int, double>> gens;
    for (const auto& gen : g.generators())
        if (gen.id[0] == 'c') gens.emplace_back(gen.degree, gen.length.to_double());
    std::map<std::pair<int, int>, std::size_t> out;
    std::function<void(int, int, double)> rec = [&](int m, int deg, double len) {
        ++out[{m, deg}];
        for (auto [gd, gl] : gens)
            if (len + gl < a - 1e-9) rec(m + 1, deg + gd, len + gl);
    };
    rec(0, 0, 0.0);
    return out;
}

struct ChordRun {
    std::string name;
    chords::SpectrumReport report;
    double seconds = 0;
};

bool lengths_match(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - want[i]) >= tol) return false;
    return true;
}

}  // namespace

int main() {
    report(1, "DGA well-formedness: D^2 = 0, degree drop, length filtration", [](Criterion& c) {
        auto t = Clock::now();
        for (int d = 2; d <= 5; ++d) {
            for (const auto& g : {dga::build_hopf(d), dga::build_unlink(d, 3)}) {
                auto sq = dga::d_squared_zero_check(g);
                c.require(sq.ok, g.name() + " D^2 nonzero on " + sq.witness);
                auto inv = dga::check_invariants(g);
                c.require(inv.ok, g.name() + " " + inv.generator + ": " + inv.message);
                c.require(g.size() == (g.name().rfind("hopf", 0) == 0 ? 24u : 12u), g.name() + " generator count");
            }
        }
        c.require(seconds_since(t) < 1.0, "runtime above 1 s");
    });

    report(2, "Hopf d = 2 degree-0 homology by word weight = [1,2,2,2,2]", [](Criterion& c) {
        auto t = Clock::now();
        auto dims = dga::h0_dims_by_wordcount(dga::build_hopf(2), window("6.5"), 4);
        c.require(dims == std::vector<std::size_t>{1, 2, 2, 2, 2}, "got " + show(dims));
        c.require(seconds_since(t) < 5.0, "runtime above 5 s");
    });

    report(3, "Unlink d = 2 degree-0 homology by word weight = [1,2,4,8,16]", [](Criterion& c) {
        auto t = Clock::now();
        auto dims = dga::h0_dims_by_wordcount(dga::build_unlink(2, 3), window("20.5"), 4);
        c.require(dims == std::vector<std::size_t>{1, 2, 4, 8, 16}, "got " + show(dims));
        c.require(seconds_since(t) < 5.0, "runtime above 5 s");
    });

    report(4, "d = 3, 4 low-degree table and the degree 2d-4 discriminator 2 vs 4", [](Criterion& c) {
        for (int d = 3; d <= 4; ++d) {
            auto t = Clock::now();
            auto w = window(std::to_string(17 * d) + "/2");
            dga::Dga h = dga::build_hopf(d);
            for (int p = 0; p <= 2 * d - 5; ++p) {
                std::size_t want = p == 0 ? 1 : p == d - 2 ? 2 : 0;
                std::size_t got = dga::homology_dim(h, p, w);
                c.require(got == want, "d=" + std::to_string(d) + " H_" + std::to_string(p) + " = " + std::to_string(got));
            }
            std::size_t hd = dga::homology_dim(h, 2 * d - 4, w);
            std::size_t ud = dga::word_basis(dga::build_unlink(d, 3), 2 * d - 4, w).size();
            c.require(hd == 2, "d=" + std::to_string(d) + " hopf H_{2d-4} = " + std::to_string(hd));
            c.require(ud == 4, "d=" + std::to_string(d) + " unlink chains in degree 2d-4 = " + std::to_string(ud));
            c.require(seconds_since(t) < 60.0, "runtime above 60 s at d=" + std::to_string(d));
        }
    });

    report(5, "Stabilization: H_p(forget_F(hopf(d))) = chord-word count, d = 2, 3, a = 4.5, 6.5", [](Criterion& c) {
        for (int d = 2; d <= 3; ++d)
            for (const char* a : {"4.5", "6.5"}) {
                dga::Dga f = dga::forget_F(dga::build_hopf(d));
                auto w = window(a);
                auto bases = dga::word_bases(f, 0, 1000, w);
                const int top = bases.empty() ? 0 : bases.rbegin()->first;
                std::map<int, std::size_t> oracle;
                for (const auto& [key, n] : chord_word_counts(f, std::stod(a))) oracle[key.second] += n;
                auto hom = dga::homology_dims(f, 0, top, w);
                for (int p = 0; p <= top; ++p)
                    c.require(hom[p] == oracle[p], "d=" + std::to_string(d) + " a=" + a + " p=" + std::to_string(p) +
                                                       ": " + std::to_string(hom[p]) + " vs " + std::to_string(oracle[p]));
            }
    });

    report(6, "Spectral sequence of hopf(2), a = 4.5: E^1, convergence, forget_F E^2 on chord words", [](Criterion& c) {
        auto w = window("4.5");
        auto fc = specseq::from_dga(dga::build_hopf(2), w);
        auto e1 = specseq::page(fc, 1);
        for (int p = fc.min_filtration(); p <= fc.max_filtration(); ++p)
            for (int n = fc.min_degree(); n <= fc.max_degree(); ++n)
                c.require(e1.at(p, n - p) == fc.graded_homology_dim(p, n),
                          "E^1 differs from graded homology at p=" + std::to_string(p) + " n=" + std::to_string(n));
        c.require(specseq::convergence_check(fc), "hopf(2) does not converge");

        dga::Dga f = dga::forget_F(dga::build_hopf(2));
        auto ff = specseq::from_dga(f, w);
        auto e2 = specseq::page(ff, 2);
        auto oracle = chord_word_counts(f, 4.5);
        std::size_t support = 0;
        for (const auto& [pq, dim] : e2.dims) {
            const int m = -pq.first, n = pq.first + pq.second;
            auto it = oracle.find({m, n});
            c.require(it != oracle.end() && it->second == dim,
                      "forget_F E^2 entry (" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ")");
            ++support;
        }
        c.require(support == oracle.size(), "forget_F E^2 support differs from the chord words");
        c.require(specseq::convergence_check(ff), "forget_F does not converge");
    });

    // Chord runs shared by criteria 7, 9 and 10.
    std::vector<ChordRun> runs;
    const std::vector<std::pair<std::string, std::vector<double>>> frozen = {
        {"hopf(2)", {1, 2, 3}}, {"unlink(2,3)", {2, 3, std::sqrt(13.0)}}, {"hopf(3)", {1, 2, 3}}};
    report(7, "Chord spectra: hopf {1,2,3}, unlink {2,3,sqrt 13}, d = 3 spheres {1,2,3}", [&](Criterion& c) {
        const std::vector<chords::ParamSubmanifold> configs = {chords::builtin_config("hopf", 2),
                                                               chords::builtin_config("unlink", 2, 3.0),
                                                               chords::builtin_config("hopf", 3)};
        for (std::size_t i = 0; i < configs.size(); ++i) {
            auto t = Clock::now();
            ChordRun run{configs[i].name, chords::find_spectrum(configs[i], chords::ChordConfig{}), 0};
            run.seconds = seconds_since(t);
            auto lengths = run.report.lengths();
            std::ostringstream got;
            for (double x : lengths) got << x << ' ';
            c.require(lengths_match(lengths, frozen[i].second, 1e-6), run.name + " lengths " + got.str());
            for (const auto& ch : run.report.chords)
                c.require(ch.residual < 1e-8, run.name + " residual " + std::to_string(ch.residual));
            c.require(run.seconds < 30.0, run.name + " runtime " + std::to_string(run.seconds) + " s");
            c.require(run.report.failure_rate() <= 0.2, run.name + " failure rate above 20%");
            c.detail << (c.detail.str().empty() ? "" : ", ") << run.name << " " << run.seconds << " s";
            runs.push_back(std::move(run));
        }
    });

    report(8, "Gradient: analytic vs central differences on 100 random paths, r = 1e-2, 1e-6", [](Criterion& c) {
        const std::vector<chords::ParamSubmanifold> configs = {chords::builtin_config("hopf", 2),
                                                               chords::builtin_config("unlink", 2, 3.0),
                                                               chords::builtin_config("hopf", 3)};
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> n01;
        double worst = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto& K = configs[static_cast<std::size_t>(trial) % configs.size()];
            std::size_t c0 = rng() % 2, c1 = rng() % 2;
            auto param = [&](const chords::Component& comp) {
                chords::Vec u(comp.dim() + 1);
                for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = n01(rng);
                return chords::Vec(u.normalized());
            };
            const int nu = 2 + trial % 15;
            auto path = chords::straight_path(K, c0, param(*K.components[c0]), c1, param(*K.components[c1]), nu);
            for (int l = 1; l < nu; ++l)
                for (Eigen::Index k = 0; k < path.q[static_cast<std::size_t>(l)].size(); ++k)
                    path.q[static_cast<std::size_t>(l)](k) += 0.2 * n01(rng);
            for (double r : {1e-2, 1e-6}) {
                auto g = chords::l_r_gradient(K, path, r);
                chords::Vec fd(g.size());
                for (Eigen::Index i = 0; i < g.size(); ++i) {
                    chords::Vec e = chords::Vec::Zero(g.size());
                    e(i) = 1e-6;
                    fd(i) = (chords::l_r_value(chords::apply_step(K, path, e), r) -
                             chords::l_r_value(chords::apply_step(K, path, -e), r)) / 2e-6;
                }
                worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1e-12));
            }
        }
        c.require(worst < 1e-5, "worst relative error " + std::to_string(worst));
        c.detail << "worst relative error " << worst;
    });

    report(9, "Flow monotonicity: L_r and max-segment value never rise on accepted steps", [&](Criterion& c) {
        c.require(runs.size() == 3, "chord runs missing");
        int steps = 0;
        for (const auto& run : runs) {
            c.require(run.report.lr_violations == 0, run.name + " L_r rose");
            c.require(run.report.f_violations == 0, run.name + " max-segment value rose");
            steps += run.report.descent_steps;
        }
        // Independent trace check from perturbed starts near each chord.
        chords::ChordConfig cfg;
        std::mt19937_64 rng(7);
        std::normal_distribution<double> n01;
        const std::vector<chords::ParamSubmanifold> configs = {chords::builtin_config("hopf", 2),
                                                               chords::builtin_config("unlink", 2, 3.0),
                                                               chords::builtin_config("hopf", 3)};
        for (std::size_t i = 0; i < runs.size() && i < configs.size(); ++i)
            for (const auto& ch : runs[i].report.chords) {
                auto path = chords::straight_path(configs[i], ch.comp0, ch.theta0, ch.comp1, ch.theta1, cfg.nu);
                for (int l = 1; l < cfg.nu; ++l)
                    for (Eigen::Index k = 0; k < path.q[static_cast<std::size_t>(l)].size(); ++k)
                        path.q[static_cast<std::size_t>(l)](k) += 0.05 * n01(rng);
                for (double r : {1e-2, 1e-6}) {
                    auto dr = chords::descend(configs[i], path, r, cfg);
                    for (std::size_t s = 1; s < dr.lr_trace.size(); ++s) {
                        c.require(dr.lr_trace[s] <= dr.lr_trace[s - 1], runs[i].name + " L_r trace rose");
                        c.require(dr.f_trace[s] <= dr.f_trace[s - 1], runs[i].name + " max-segment trace rose");
                    }
                    steps += dr.accepted_steps;
                }
            }
        c.detail << steps << " accepted steps checked";
    });

    report(10, "Refinement stability: lengths shift < 1e-6 under nu = 16 -> 32", [&](Criterion& c) {
        for (const auto& run : runs)
            for (const auto& ch : run.report.chords)
                c.require(std::abs(ch.refined_length - ch.length) < 1e-6, run.name + " refined chord moved");
        chords::ChordConfig fine;
        fine.nu = 32;
        auto base = runs.empty() ? std::vector<double>{} : runs[0].report.lengths();
        auto doubled = chords::find_spectrum(chords::builtin_config("hopf", 2), fine).lengths();
        c.require(lengths_match(doubled, base, 1e-6), "hopf(2) spectrum at nu = 32 differs");
    });

    report(11, "Cord algebra matches degree-0 homology; unknot [1,0,0,0]; stable under kmax + 2", [](Criterion& c) {
        auto hopf = cord::compare_with_h0(cord::builtin_presentation("hopf_link", 4), dga::build_hopf(2), window("6.5"), 4);
        c.require(hopf.match, "hopf_link MISMATCH");
        auto unlink =
            cord::compare_with_h0(cord::builtin_presentation("unlink2", 4), dga::build_unlink(2, 3), window("20.5"), 4);
        c.require(unlink.match, "unlink2 MISMATCH");
        auto unknot = cord::quotient_dims_by_wordcount(cord::builtin_presentation("unknot", 4), 3);
        c.require(unknot == std::vector<std::size_t>{1, 0, 0, 0}, "unknot " + show(unknot));
        c.require(cord::truncation_stable("hopf_link", 4, 4), "hopf_link unstable");
        c.require(cord::truncation_stable("unlink2", 4, 4), "unlink2 unstable");
        c.require(cord::truncation_stable("unknot", 4, 3), "unknot unstable");
    });

    std::printf("AC12 NOTE scope: string homology over all windows and the chain-level theory are not computed; "
                "criteria 1-11 test the finite algebraic models, the chord spectra and the degree-0 cord comparison\n");
    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
