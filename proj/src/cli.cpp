#include "strhom/cli.hpp"

#include "strhom/chords.hpp"
#include "strhom/cord.hpp"
#include "strhom/free_dga.hpp"
#include "strhom/specseq.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <gmp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace strhom::cli {

namespace {

using nlohmann::json;
using exactlin::Rational;

constexpr const char* kVersion = "1.0.0";

enum class Format { text, json, csv };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChordFailureRate : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TruncationUnstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // Shared.
    bool json_out = false, csv_out = false;
    std::string output, out_dir;
    // Sources.
    std::string builtin, spec, config, complex_file;
    int d = 2;
    std::string z2star = "3";
    bool forget_f = false;
    // Windows and ranges.
    std::string a;
    std::vector<int> degrees;
    bool h0 = false;
    int wmax = 4;
    int kmax = 0;
    bool compare = false;
    int rmax = 0;
    // Chords.
    int nu = 16;
    int m = 1;
    int seeds_per_circle = 24;
    int seeds_per_sphere = 162;
    std::uint64_t rng_seed = 1;

    Format format() const {
        if (json_out && csv_out) throw UsageError("--json and --csv are exclusive");
        return json_out ? Format::json : csv_out ? Format::csv : Format::text;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

template <typename T>
std::string list(const std::vector<T>& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

std::string list_lengths(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
    return s;
}

// Smallest multiple of 1e-6 that is at least x + 0.5.
Rational auto_bound(double x) {
    Rational q(static_cast<long>(std::ceil((x + 0.5) * 1e6)), 1000000);
    q.canonicalize();
    return q;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

dga::Dga load_dga(const Options& o) {
    if (o.builtin.empty() == o.spec.empty()) throw UsageError("give exactly one of --builtin and --spec");
    dga::Dga out = [&] {
        if (!o.spec.empty()) {
            dga::Dga g = dga::dga_from_json(read_json_file(o.spec));
            auto inv = dga::check_invariants(g);
            if (!inv.ok) throw dga::InvariantViolation("generator " + inv.generator + ": " + inv.message);
            auto sq = dga::d_squared_zero_check(g);
            if (!sq.ok) throw dga::InvariantViolation("D^2 is nonzero on " + sq.witness);
            return g;
        }
        if (o.builtin == "hopf") return dga::build_hopf(o.d);
        if (o.builtin == "unlink") return dga::build_unlink(o.d, exactlin::parse_rational(o.z2star));
        throw UsageError("unknown DGA builtin '" + o.builtin + "' (hopf, unlink)");
    }();
    return o.forget_f ? dga::forget_F(out) : out;
}

double max_generator_length(const dga::Dga& g) {
    double m = 0;
    for (const auto& gen : g.generators()) m = std::max(m, gen.length.to_double());
    return m;
}

// (wmax + 2) times the longest weight-1 degree-0 generator, plus 1/2: enough
// room for every degree-1 relation touching the slices up to wmax.
Rational auto_h0_bound(const dga::Dga& g, int wmax) {
    double l1 = 0;
    for (const auto& gen : g.generators())
        if (gen.degree == 0 && gen.weight == 1) l1 = std::max(l1, gen.length.to_double());
    if (l1 == 0) l1 = max_generator_length(g);
    return auto_bound((wmax + 2) * l1);
}

dga::LengthWindow window_from(const std::string& a, const Rational& fallback) {
    return dga::LengthWindow{a.empty() ? fallback : exactlin::parse_rational(a)};
}

// ---------------------------------------------------------------------------

int cmd_dga_homology(const Options& o, std::ostream& data) {
    const Format f = o.format();
    dga::Dga g = load_dga(o);
    json j{{"dga", g.name()}};
    std::ostringstream csv;
    std::ostringstream text;
    text << "dga " << g.name() << '\n';

    const bool want_degrees = !o.degrees.empty() || !o.h0;
    if (want_degrees) {
        std::vector<int> degrees = o.degrees;
        if (degrees.empty())
            for (int p = 0; p <= 2; ++p) degrees.push_back(p);
        auto w = window_from(o.a, auto_bound(max_generator_length(g)));
        j["a"] = exactlin::to_string(w.bound);
        text << "a = " << exactlin::to_string(w.bound) << '\n';
        csv << "degree,dim\n";
        json hom = json::object();
        for (int p : degrees) {
            std::size_t dim = dga::homology_dim(g, p, w);
            hom[std::to_string(p)] = dim;
            text << "H_" << p << " = " << dim << '\n';
            csv << p << ',' << dim << '\n';
        }
        j["homology"] = hom;
    }
    if (o.h0) {
        auto w = window_from(o.a, auto_h0_bound(g, o.wmax));
        auto dims = dga::h0_dims_by_wordcount(g, w, o.wmax);
        j["h0_a"] = exactlin::to_string(w.bound);
        j["h0"] = dims;
        text << "H_0 by word weight (a = " << exactlin::to_string(w.bound) << ", wmax = " << o.wmax
             << "): " << list(dims) << '\n';
        csv << "w,h0_dim\n";
        for (std::size_t i = 0; i < dims.size(); ++i) csv << i << ',' << dims[i] << '\n';
    }
    data << (f == Format::json ? j.dump(2) + "\n" : f == Format::csv ? csv.str() : text.str());
    return kExitOk;
}

int cmd_distinguish(const Options& o, std::ostream& data) {
    const Format f = o.format();
    if (o.d < 2) throw UsageError("--d must be >= 2");
    dga::Dga hopf = dga::build_hopf(o.d);
    dga::Dga unlink = dga::build_unlink(o.d, exactlin::parse_rational(o.z2star));
    json j{{"d", o.d}};
    std::ostringstream text, csv;
    bool distinct = false;
    if (o.d == 2) {
        auto hd = dga::h0_dims_by_wordcount(hopf, window_from("", auto_h0_bound(hopf, o.wmax)), o.wmax);
        auto ud = dga::h0_dims_by_wordcount(unlink, window_from("", auto_h0_bound(unlink, o.wmax)), o.wmax);
        j["invariant"] = "degree-0 homology by word weight";
        j["hopf"] = hd;
        j["unlink"] = ud;
        text << "degree-0 homology by word weight, w = 0.." << o.wmax << '\n'
             << "hopf   " << list(hd) << '\n'
             << "unlink " << list(ud) << '\n';
        csv << "w,hopf,unlink\n";
        for (std::size_t w = 0; w < hd.size(); ++w) {
            csv << w << ',' << hd[w] << ',' << ud[w] << '\n';
            if (!distinct && hd[w] != ud[w]) {
                distinct = true;
                j["first_difference"] = w;
                text << "DISTINCT at w = " << w << '\n';
            }
        }
    } else {
        const int p = 2 * o.d - 4;
        auto w = window_from(o.a, auto_bound(8 * o.d));
        std::size_t hd = dga::homology_dim(hopf, p, w), ud = dga::homology_dim(unlink, p, w);
        distinct = hd != ud;
        j["invariant"] = "homology in degree " + std::to_string(p);
        j["a"] = exactlin::to_string(w.bound);
        j["hopf"] = hd;
        j["unlink"] = ud;
        text << "homology in degree " << p << " (a = " << exactlin::to_string(w.bound) << ")\n"
             << "hopf   " << hd << '\n'
             << "unlink " << ud << '\n';
        if (distinct) text << "DISTINCT at degree " << p << '\n';
        csv << "degree,hopf,unlink\n" << p << ',' << hd << ',' << ud << '\n';
    }
    if (!distinct) text << "SAME\n";
    j["verdict"] = distinct ? "DISTINCT" : "SAME";
    csv << "verdict," << (distinct ? "DISTINCT" : "SAME") << '\n';
    data << (f == Format::json ? j.dump(2) + "\n" : f == Format::csv ? csv.str() : text.str());
    return kExitOk;
}

chords::ParamSubmanifold load_chord_config(const Options& o) {
    if (o.builtin.empty() == o.config.empty()) throw UsageError("give exactly one of --builtin and --config");
    if (!o.builtin.empty()) return chords::builtin_config(o.builtin, o.d, std::stod(o.z2star));
    json j = read_json_file(o.config);
    chords::ParamSubmanifold K;
    K.name = j.value("name", o.config);
    for (const auto& c : j.at("components")) {
        auto center = c.at("center").get<std::vector<double>>();
        auto cols = c.at("frame").get<std::vector<std::vector<double>>>();
        const auto n = static_cast<Eigen::Index>(center.size());
        chords::Mat frame(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (static_cast<Eigen::Index>(cols[k].size()) != n) throw UsageError("frame column has the wrong dimension");
            for (Eigen::Index i = 0; i < n; ++i) frame(i, static_cast<Eigen::Index>(k)) = cols[k][static_cast<std::size_t>(i)];
        }
        chords::Vec cv = Eigen::Map<chords::Vec>(center.data(), n);
        K.components.push_back(std::make_shared<chords::EmbeddedSphere>(cv, frame, c.value("radius", 1.0)));
        if (K.ambient_dim && K.ambient_dim != n) throw UsageError("components live in different dimensions");
        K.ambient_dim = static_cast<int>(n);
    }
    if (K.components.empty()) throw UsageError("chord config has no components");
    return K;
}

json vec_json(const chords::Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

int cmd_chords(const Options& o, std::ostream& data, std::ostream& err) {
    const Format f = o.format();
    if (o.m < 1) throw UsageError("--m must be >= 1");
    auto K = load_chord_config(o);
    chords::ChordConfig cfg;
    cfg.nu = o.nu;
    cfg.seeds_per_circle = o.seeds_per_circle;
    cfg.seeds_per_sphere = o.seeds_per_sphere;
    cfg.rng_seed = o.rng_seed;
    if (!o.a.empty()) cfg.length_bound = std::stod(o.a);
    auto report = chords::find_spectrum(K, cfg);
    auto lengths = report.lengths();
    double a = cfg.length_bound;
    if (o.a.empty()) {
        // Default bound: half a unit above the largest m-fold sum.
        double top = lengths.empty() ? 0 : lengths.back() * o.m;
        a = auto_bound(top).get_d();
    }
    auto sums = chords::chord_sum_spectrum(lengths, o.m, a, cfg.dedup_len_tol);
    // The window bound must avoid the length spectrum.
    for (double s : chords::chord_sum_spectrum(lengths, o.m, a + 1.0, cfg.dedup_len_tol))
        if (std::abs(s - a) < 1e-6) err << "warning: a = " << fmt(a) << " lies in the length spectrum\n";

    json j;
    j["config"] = {{"name", K.name},
                   {"nu", cfg.nu},
                   {"a", a},
                   {"m", o.m},
                   {"seeds_per_circle", cfg.seeds_per_circle},
                   {"seeds_per_sphere", cfg.seeds_per_sphere},
                   {"rng_seed", cfg.rng_seed}};
    j["chords"] = json::array();
    for (const auto& c : report.chords)
        j["chords"].push_back({{"components", {c.comp0, c.comp1}},
                               {"theta0", vec_json(c.theta0)},
                               {"theta1", vec_json(c.theta1)},
                               {"length", c.length},
                               {"refined_length", c.refined_length},
                               {"residual", c.residual},
                               {"multiplicity", c.multiplicity}});
    j["lengths"] = lengths;
    j["sums"] = sums;
    j["seeds_attempted"] = report.seeds_attempted;
    j["seeds_failed"] = report.seeds_failed;
    j["chords_rejected"] = report.chords_rejected;
    j["failure_rate"] = report.failure_rate();
    j["lr_violations"] = report.lr_violations;
    j["f_violations"] = report.f_violations;

    if (f == Format::json) {
        data << j.dump(2) << '\n';
    } else if (f == Format::csv) {
        data << "components,length,refined_length,residual,multiplicity\n";
        for (const auto& c : report.chords)
            data << c.comp0 << '-' << c.comp1 << ',' << fmt(c.length) << ',' << fmt(c.refined_length) << ','
                 << fmt(c.residual) << ',' << c.multiplicity << '\n';
    } else {
        data << "config " << K.name << ", nu = " << cfg.nu << ", a = " << fmt(a) << '\n';
        data << "components  length        residual    multiplicity\n";
        for (const auto& c : report.chords) {
            char line[128];
            std::snprintf(line, sizeof line, "%zu-%zu         %-12.10g  %-10.2e  %d\n", c.comp0, c.comp1, c.length,
                          c.residual, c.multiplicity);
            data << line;
        }
        data << "lengths: " << list_lengths(lengths) << '\n';
        data << "sums of " << o.m << " below a: " << list_lengths(sums) << '\n';
        data << "seeds: " << report.seeds_attempted << " attempted, " << report.seeds_failed << " failed\n";
    }
    if (report.failure_rate() > 0.2)
        throw ChordFailureRate("chord convergence failure rate " + fmt(report.failure_rate()) + " exceeds 0.2");
    return kExitOk;
}

int cmd_cord(const Options& o, std::ostream& data) {
    const Format f = o.format();
    if (o.builtin.empty()) throw UsageError("--builtin is required (unknot, hopf_link, unlink2)");
    const int kmax = o.kmax > 0 ? o.kmax : std::max(2, o.wmax - 1);
    auto pres = cord::builtin_presentation(o.builtin, kmax);
    auto dims = cord::quotient_dims_by_wordcount(pres, o.wmax);
    auto wider = cord::quotient_dims_by_wordcount(cord::builtin_presentation(o.builtin, kmax + 2), o.wmax);
    const bool stable = dims == wider;

    json j{{"presentation", pres.name}, {"kmax", kmax}, {"wmax", o.wmax}, {"dims", dims}, {"truncation_stable", stable}};
    std::ostringstream text, csv;
    text << "cord " << pres.name << " (kmax = " << kmax << ")\n"
         << "dims by word weight, w = 0.." << o.wmax << ": " << list(dims) << '\n'
         << "truncation: " << (stable ? "stable" : "UNSTABLE") << " (kmax " << kmax << " vs " << kmax + 2 << ")\n";
    csv << "w,cord_dim\n";
    for (std::size_t w = 0; w < dims.size(); ++w) csv << w << ',' << dims[w] << '\n';

    if (o.compare) {
        std::optional<dga::Dga> target;
        if (pres.name == "hopf_link") target = dga::build_hopf(2);
        else if (pres.name == "unlink2") target = dga::build_unlink(2, exactlin::parse_rational(o.z2star));
        else throw UsageError("presentation '" + pres.name + "' has no DGA counterpart to compare with");
        auto w = window_from(o.a, auto_h0_bound(*target, o.wmax));
        auto cmp = cord::compare_with_h0(pres, *target, w, o.wmax);
        j["compare"] = {{"dga", target->name()}, {"a", exactlin::to_string(w.bound)}, {"match", cmp.match}};
        j["compare"]["rows"] = json::array();
        for (const auto& r : cmp.rows)
            j["compare"]["rows"].push_back({{"w", r.w}, {"cord_dim", r.cord_dim}, {"h0_dim", r.h0_dim}, {"match", r.match}});
        text << "compared with H_0 of " << target->name() << " (a = " << exactlin::to_string(w.bound) << ")\n";
        text << "w  cord  h0\n";
        for (const auto& r : cmp.rows) text << r.w << "  " << r.cord_dim << "     " << r.h0_dim << '\n';
        text << (cmp.match ? "MATCH" : "MISMATCH") << '\n';
        csv.str("");
        cord::write_csv(csv, cmp);
    }
    data << (f == Format::json ? j.dump(2) + "\n" : f == Format::csv ? csv.str() : text.str());
    if (!stable) throw TruncationUnstable("cord dims change between kmax " + std::to_string(kmax) + " and " +
                                          std::to_string(kmax + 2));
    return kExitOk;
}

int cmd_specseq(const Options& o, std::ostream& data) {
    const Format f = o.format();
    std::optional<specseq::FilteredComplex> fc;
    std::string a_used;
    if (!o.complex_file.empty()) {
        if (!o.builtin.empty() || !o.spec.empty()) throw UsageError("--complex excludes --builtin and --spec");
        fc = specseq::complex_from_json(read_json_file(o.complex_file));
    } else {
        dga::Dga g = load_dga(o);
        auto w = window_from(o.a, auto_bound(max_generator_length(g)));
        a_used = exactlin::to_string(w.bound);
        fc = specseq::from_dga(g, w);
    }
    const int rmax = o.rmax > 0 ? o.rmax : specseq::stable_page_index(*fc);
    std::vector<specseq::PageTable> pages;
    for (int r = 1; r <= rmax; ++r) pages.push_back(specseq::page(*fc, r));
    pages.push_back(specseq::infinity_page(*fc));
    const bool converges = specseq::convergence_check(*fc);

    if (f == Format::json) {
        json j{{"cells", fc->size()}, {"converges", converges}};
        if (!a_used.empty()) j["a"] = a_used;
        j["pages"] = json::array();
        for (const auto& pg : pages) {
            json entries = json::array();
            for (const auto& [pq, dim] : pg.dims) entries.push_back({{"p", pq.first}, {"q", pq.second}, {"dim", dim}});
            j["pages"].push_back({{"r", pg.infinity ? json("inf") : json(pg.r)}, {"dims", entries}});
        }
        data << j.dump(2) << '\n';
    } else if (f == Format::csv) {
        specseq::write_csv(data, pages);
    } else {
        data << fc->size() << " cells";
        if (!a_used.empty()) data << ", a = " << a_used;
        data << '\n';
        for (const auto& pg : pages) {
            data << "E^" << (pg.infinity ? std::string("inf") : std::to_string(pg.r)) << '\n';
            for (const auto& [pq, dim] : pg.dims)
                data << "  p = " << pq.first << ", q = " << pq.second << ": " << dim << '\n';
        }
        data << "converges: " << (converges ? "yes" : "no") << '\n';
    }
    return kExitOk;
}

int cmd_dga_export(const Options& o, std::ostream& data) {
    data << dga::to_json(load_dga(o)).dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

json versions() {
    return {{"strhom", kVersion},
            {"gmp", gmp_version},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"cli11", CLI11_VERSION}};
}

void write_manifest(const Options& o, const std::string& command, const std::vector<std::string>& args,
                    double seconds, int code, std::ostream& err) {
    namespace fs = std::filesystem;
    fs::path dir = !o.out_dir.empty()                     ? fs::path(o.out_dir)
                   : std::getenv(kOutputDirEnv) != nullptr ? fs::path(std::getenv(kOutputDirEnv))
                                                           : fs::current_path();
    json outputs = json::array();
    if (!o.output.empty()) outputs.push_back(o.output);
    json m{{"command", command},
           {"parameters", args},
           {"versions", versions()},
           {"wall_time_seconds", seconds},
           {"outputs", outputs},
           {"exit_code", code}};
    std::error_code ec;
    fs::create_directories(dir, ec);
    fs::path file = dir / ("strhom-" + (command.empty() ? std::string("none") : command) + "-manifest.json");
    std::ofstream os(file);
    if (!os) {
        err << "warning: cannot write run manifest to " << file.string() << '\n';
        return;
    }
    os << m.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    Options o;
    CLI::App app{"Finite computations for string homology of links: DGA homology, chord spectra, "
                 "spectral sequences and cord algebras"};
    app.name("strhom");
    app.require_subcommand(1);

    auto add_format = [&](CLI::App* s) {
        s->add_flag("--json", o.json_out, "JSON output");
        s->add_flag("--csv", o.csv_out, "CSV output");
        s->add_option("--output", o.output, "write results to this file instead of stdout");
        s->add_option("--out-dir", o.out_dir, "directory for the run manifest");
    };
    auto add_dga_source = [&](CLI::App* s) {
        s->add_option("--builtin", o.builtin, "hopf or unlink");
        s->add_option("--spec", o.spec, "DGA JSON file");
        s->add_option("--d", o.d, "dimension parameter d >= 2")->capture_default_str();
        s->add_option("--z2star", o.z2star, "unlink offset, |z2*| > 2")->capture_default_str();
        s->add_flag("--forget-F", o.forget_f, "drop the stabilization generators");
    };

    auto* dh = app.add_subcommand("dga-homology", "homology of a length-filtered DGA");
    add_dga_source(dh);
    dh->add_option("--degree", o.degrees, "degree(s) to compute");
    dh->add_option("--a", o.a, "length window bound");
    dh->add_flag("--h0", o.h0, "degree-0 homology split by word weight");
    dh->add_option("--wmax", o.wmax, "largest word weight for --h0")->capture_default_str();
    add_format(dh);

    auto* di = app.add_subcommand("distinguish", "compare the Hopf link and the unlink");
    di->add_option("--d", o.d, "dimension parameter d >= 2")->capture_default_str();
    di->add_option("--z2star", o.z2star, "unlink offset")->capture_default_str();
    di->add_option("--wmax", o.wmax, "word weights compared at d = 2")->capture_default_str();
    di->add_option("--a", o.a, "length window bound for d >= 3");
    add_format(di);

    auto* ch = app.add_subcommand("chords", "binormal chord length spectrum");
    ch->add_option("--builtin", o.builtin, "hopf or unlink");
    ch->add_option("--config", o.config, "chord configuration JSON file");
    ch->add_option("--d", o.d, "dimension parameter d >= 2")->capture_default_str();
    ch->add_option("--z2star", o.z2star, "unlink offset")->capture_default_str();
    ch->add_option("--a", o.a, "length bound");
    ch->add_option("--nu", o.nu, "segments per broken path")->capture_default_str();
    ch->add_option("--m", o.m, "report sums of m chord lengths")->capture_default_str();
    ch->add_option("--seeds-per-circle", o.seeds_per_circle, "seed grid per circle")->capture_default_str();
    ch->add_option("--seeds-per-sphere", o.seeds_per_sphere, "seeds per higher sphere")->capture_default_str();
    ch->add_option("--rng-seed", o.rng_seed, "seed for random sphere seeds and perturbations")->capture_default_str();
    add_format(ch);

    auto* co = app.add_subcommand("cord", "cord algebra dimensions by word weight");
    co->add_option("--builtin", o.builtin, "unknot, hopf_link or unlink2");
    co->add_option("--wmax", o.wmax, "largest word weight")->capture_default_str();
    co->add_option("--kmax", o.kmax, "meridian truncation (default max(2, wmax - 1))");
    co->add_flag("--compare", o.compare, "compare with degree-0 DGA homology");
    co->add_option("--z2star", o.z2star, "unlink offset for --compare")->capture_default_str();
    co->add_option("--a", o.a, "length window for --compare");
    add_format(co);

    auto* ss = app.add_subcommand("specseq", "spectral sequence of the word-weight filtration");
    add_dga_source(ss);
    ss->add_option("--complex", o.complex_file, "filtered complex JSON file");
    ss->add_option("--a", o.a, "length window bound");
    ss->add_option("--rmax", o.rmax, "last finite page (default: stable index)");
    add_format(ss);

    auto* ex = app.add_subcommand("dga-export", "write a DGA as JSON");
    add_dga_source(ex);
    ex->add_option("--output", o.output, "write to this file instead of stdout");
    ex->add_option("--out-dir", o.out_dir, "directory for the run manifest");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::string command;
    for (auto* s : app.get_subcommands()) command = s->get_name();

    std::ostringstream data;
    int code = kExitOk;
    try {
        if (command == "dga-homology") code = cmd_dga_homology(o, data);
        else if (command == "distinguish") code = cmd_distinguish(o, data);
        else if (command == "chords") code = cmd_chords(o, data, err);
        else if (command == "cord") code = cmd_cord(o, data);
        else if (command == "specseq") code = cmd_specseq(o, data);
        else if (command == "dga-export") code = cmd_dga_export(o, data);
    } catch (const dga::InvalidWindow& e) {
        err << "error: invalid window: " << e.what() << '\n';
        code = kExitInvalidWindow;
    } catch (const dga::InvariantViolation& e) {
        err << "error: invariant failure: " << e.what() << '\n';
        code = kExitInvariant;
    } catch (const ChordFailureRate& e) {
        err << "error: " << e.what() << '\n';
        code = kExitChordFailures;
    } catch (const TruncationUnstable& e) {
        err << "error: " << e.what() << '\n';
        code = kExitTruncation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kExitUsage;
    }

    if (!o.output.empty()) {
        std::ofstream file(o.output);
        if (!file) {
            err << "error: cannot write '" << o.output << "'\n";
            if (code == kExitOk) code = kExitUsage;
        } else {
            file << data.str();
        }
    } else {
        out << data.str();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(o, command, args, seconds, code, err);
    return code;
}

}  // namespace strhom::cli
