#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "analysis.hpp"
#include "config_io.hpp"
#include "magalg/errors.hpp"
#include "magalg/random.hpp"
#include "magalg/sphere.hpp"

#ifndef MAGALG_VERSION
#define MAGALG_VERSION "0.0.0"
#endif

namespace magalg::cli {

using nlohmann::json;

namespace {

json tool_json() { return {{"name", "magalg"}, {"version", MAGALG_VERSION}}; }

void emit(const json& j, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) out << j.dump(2) << '\n';
    else write_text(out_path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string config, out;
    AnalyzeParams params;
    bool si = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
    validate(a.params);
    ConfigFile cfg = load_config(a.config);
    if (cfg.field_points.empty()) throw CliError(kExitInput, "config has no field points");
    cfg.si_prefactor = cfg.si_prefactor || a.si;

    json results = json::array();
    bool chain_ok = true;
    for (const Vec3& fp : cfg.field_points) {
        const PointAnalysis pa = analyze_point(cfg.at(fp), a.params);
        if (pa.report && !pa.report->chain.all()) chain_ok = false;
        results.push_back(to_json(pa));
    }
    const json report = {
        {"tool", tool_json()},
        {"parameters",
         {{"tol", a.params.tol},
          {"samples", a.params.samples},
          {"refine", a.params.refine},
          {"seed", a.params.seed},
          {"si", cfg.si_prefactor},
          {"sampling_constant", kSamplingConstant},
          {"plane_tolerance", kDefaultPlaneTolerance},
          {"branch_band", ReportOptions{}.branch_band}}},
        {"config", to_json(cfg)},
        {"results", results}};
    emit(report, a.out, out);
    if (!chain_ok) {
        err << "magalg: bound chain violated (see chain_ok in the report)\n";
        return kExitViolation;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct Axis {
    double start = 0.0, stop = 0.0;
    int count = 0;
    double at(int i) const { return count == 1 ? start : start + (stop - start) * double(i) / double(count - 1); }
};

std::array<Axis, 3> parse_grid(const std::string& text) {
    std::array<Axis, 3> axes;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t end = k < 2 ? text.find(',', pos) : text.size();
        if (end == std::string::npos) throw CliError(kExitInput, "--grid: expected three axes x0:x1:nx,y0:y1:ny,z0:z1:nz");
        const std::string part = text.substr(pos, end - pos);
        const std::size_t c1 = part.find(':'), c2 = c1 == std::string::npos ? c1 : part.find(':', c1 + 1);
        if (c2 == std::string::npos) throw CliError(kExitInput, "--grid: bad axis '" + part + "'");
        try {
            std::size_t used = 0;
            const std::string s0 = part.substr(0, c1), s1 = part.substr(c1 + 1, c2 - c1 - 1), s2 = part.substr(c2 + 1);
            axes[k].start = std::stod(s0, &used);
            if (used != s0.size()) throw std::invalid_argument(s0);
            axes[k].stop = std::stod(s1, &used);
            if (used != s1.size()) throw std::invalid_argument(s1);
            axes[k].count = std::stoi(s2, &used);
            if (used != s2.size()) throw std::invalid_argument(s2);
        } catch (const std::logic_error&) {
            throw CliError(kExitInput, "--grid: bad axis '" + part + "'");
        }
        if (axes[k].count < 1) throw CliError(kExitInput, "--grid: empty grid (count must be at least 1)");
        pos = end + 1;
    }
    return axes;
}

struct SweepArgs {
    std::string config, grid, out;
    AnalyzeParams params;
};

int cmd_sweep(SweepArgs a, std::ostream& out, std::ostream& err) {
    validate(a.params);
    const std::array<Axis, 3> axes = parse_grid(a.grid);
    const ConfigFile cfg = load_config(a.config);

    std::vector<Vec3> points;
    for (int k = 0; k < axes[2].count; ++k)
        for (int j = 0; j < axes[1].count; ++j)
            for (int i = 0; i < axes[0].count; ++i) points.push_back({axes[0].at(i), axes[1].at(j), axes[2].at(k)});

    std::vector<std::string> rows(points.size());
    std::vector<std::string> warnings(points.size());
    AnalyzeParams inner = a.params;
    inner.threads = 1;
    inner.candidates = false;
    parallel_for(points.size(), a.params.threads, [&](std::size_t i) {
        try {
            rows[i] = csv_row(analyze_point(cfg.at(points[i]), inner));
        } catch (const SingularFieldPoint& e) {
            rows[i] = csv_singular_row(points[i]);
            warnings[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!warnings[i].empty())
            err << "magalg: warning: skipping grid point " << format_number(points[i].x) << ','
                << format_number(points[i].y) << ',' << format_number(points[i].z) << ": " << warnings[i] << '\n';

    std::string csv = kCsvHeader + "\n";
    for (const std::string& r : rows) csv += r + "\n";
    if (a.out.empty()) out << csv;
    else write_text(a.out, csv);
    return kExitOk;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string kind, out, field_point = "0,0,0";
    double sep = 2.0;
    std::string axis = "x";
    std::string normal = "0,0,1";
    std::vector<std::string> pairs, in_plane;
    double spacing = 1.0;
    int k = 1;
    bool exclude_origin = false;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    DipoleConfig dc;
    if (a.kind == "pair") {
        const std::size_t ax = a.axis == "x" ? 0 : a.axis == "y" ? 1 : a.axis == "z" ? 2 : 3;
        if (ax == 3) throw CliError(kExitInput, "--axis must be x, y or z");
        if (!(a.sep > 0.0)) throw CliError(kExitInput, "--sep must be positive");
        const Vec3 h = 0.5 * a.sep * Vec3::unit(ax);
        dc = gen_pair(h, Vec3{} - h);
    } else if (a.kind == "mirror") {
        const Vec3 n = parse_vec3(a.normal, "--normal");
        if (!(norm(n) > 0.0)) throw CliError(kExitInput, "--normal must be nonzero");
        const Vec3 nh = normalized(n);
        std::vector<MirrorBasePoint> base;
        for (const std::string& s : a.pairs) {
            const Vec3 p = parse_vec3(s, "--mirror-pair");
            const double t = dot(p, nh);
            if (!(std::abs(t) > 0.0)) throw CliError(kExitInput, "--mirror-pair point lies in the plane; use --in-plane");
            base.push_back({p, std::abs(t)});
        }
        std::vector<Vec3> singles;
        for (const std::string& s : a.in_plane) singles.push_back(parse_vec3(s, "--in-plane"));
        if (base.empty() && singles.empty()) throw CliError(kExitInput, "mirror configuration needs at least one point");
        dc = gen_mirror_symmetric(base, singles, nh);
    } else {
        dc = gen_cubic_lattice(a.spacing, a.k, a.exclude_origin);
    }
    ConfigFile cfg;
    cfg.magnets = dc.magnets;
    cfg.field_points = {parse_vec3(a.field_point, "--field-point")};
    emit(to_json(cfg), a.out, out);
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    int trials = 100;
    std::uint64_t seed = 0;
    int samples = 20000;
    std::string config, out;
};

struct Tally {
    double worst = -std::numeric_limits<double>::infinity();
    double margin = -std::numeric_limits<double>::infinity();  ///< worst - tolerance
    int evaluated = 0;
    int failures = 0;
};

struct Suite {
    std::map<std::string, Tally> tallies;
    json violations = json::array();

    void record(const TheoremCheck& c, const ConfigFile& cfg) {
        if (!c.applicable) return;
        Tally& t = tallies[c.name];
        t.worst = std::max(t.worst, c.worst);
        t.margin = std::max(t.margin, c.worst - c.tolerance);
        ++t.evaluated;
        if (!c.passed) {
            ++t.failures;
            violations.push_back({{"check", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance},
                                  {"config", to_json(cfg)}});
        }
    }
};

// Identity and decomposition checks over `probes` random moments.
std::vector<TheoremCheck> structural_checks(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                                            int probes, std::uint64_t seed) {
    const double s = alg.scale();
    TheoremCheck trace{"trace_zero"}, det{"det_identity"}, spectral{"spectral_identity"}, recip{"reciprocity"},
        dec{"decomposition"};
    trace.tolerance = 1e-12 * s;
    det.tolerance = 1e-12 * s * s * s;
    spectral.tolerance = 1e-9;
    recip.tolerance = 1e-12 * s;
    dec.tolerance = 1e-10 * s;
    dec.applicable = plane.has_value();
    recip.worst = check_algebra(alg).reciprocity_residual;

    Rng rng(seed);
    for (int i = 0; i < probes; ++i) {
        const Vec3 m = rng.unit_vector();
        const SymMat3 f = alg.apply(m).sym();
        trace.worst = std::max(trace.worst, std::abs(f.trace()));
        det.worst = std::max(det.worst, std::abs(determinant(f) - trace_cube(f) / 3.0));
        const EigenTriple e = eig_traceless(alg.apply(m));
        const double tr2 = trace_sq(f);
        if (tr2 > 0.0)
            spectral.worst = std::max(spectral.worst, std::abs(tr2 - 0.5 * (3.0 + e.r * e.r) * e.lambda * e.lambda) / tr2);
        if (plane)
            for (double gamma : {-1.0, 0.0, 1.0, 5.0})
                dec.worst = std::max(dec.worst, decompose(alg, *plane, gamma).image_residual(m));
    }
    std::vector<TheoremCheck> out{trace, det, spectral, recip, dec};
    for (TheoremCheck& c : out) c.passed = c.worst <= c.tolerance;
    return out;
}

void run_suite(Suite& suite, const ConfigFile& cfg, const MagneticAlgebra& alg,
               const std::optional<PlanarStructure>& plane, int probes, std::uint64_t seed, int samples) {
    SamplingOptions so;
    so.n_samples = samples;
    so.seed = seed;
    for (const TheoremCheck& c : verify_theorems(alg, plane, probes, seed, so).checks) suite.record(c, cfg);
    for (const TheoremCheck& c : structural_checks(alg, plane, probes, seed)) suite.record(c, cfg);
    if (plane && !alg.is_zero()) {
        ReportOptions ro;
        ro.sampling = so;
        const ExtremalReport r = bounds_report(alg, plane, ro);
        TheoremCheck c{"bound_chain"};
        c.worst = r.chain.all() ? 0.0 : 1.0;
        c.passed = r.chain.all();
        suite.record(c, cfg);
    }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.trials < 1) throw CliError(kExitInput, "--trials must be at least 1");
    if (a.samples < 100) throw CliError(kExitInput, "--samples must be at least 100");
    Suite suite;
    std::string mode;
    if (!a.config.empty()) {
        mode = "config";
        const ConfigFile cfg = load_config(a.config);
        if (cfg.field_points.empty()) throw CliError(kExitInput, "config has no field points");
        for (const Vec3& fp : cfg.field_points) {
            const DipoleConfig dc = cfg.at(fp);
            magalg::validate(dc);
            const MagneticAlgebra alg = build_algebra(dc);
            std::optional<PlanarStructure> plane;
            if (!alg.is_zero()) {
                const PlaneSet ps = find_invariant_planes(alg);
                if (const auto idx = select_plane(alg, ps)) plane = ps.planes[*idx];
            }
            ConfigFile one = cfg;
            one.field_points = {fp};
            run_suite(suite, one, alg, plane, a.trials, a.seed, a.samples);
        }
    } else {
        mode = "random_planar";
        Rng master(a.seed);
        for (int t = 0; t < a.trials; ++t) {
            const std::uint64_t sub = master.next();
            Rng rng(sub);
            const PlanarSample s = random_planar_config(rng);
            ConfigFile one;
            one.magnets = s.config.magnets;
            one.field_points = {s.config.field_point};
            const MagneticAlgebra alg = build_algebra(s.config);
            std::optional<PlanarStructure> plane;
            try {
                plane = planar_structure(alg, s.normal);
            } catch (const NotInvariantPlane& e) {
                TheoremCheck c{"planarity"};
                c.worst = e.residual();
                c.passed = false;
                suite.record(c, one);
            }
            run_suite(suite, one, alg, plane, 100, sub, a.samples);
        }
    }

    json checks = json::object();
    bool passed = true;
    for (const auto& [name, t] : suite.tallies) {
        checks[name] = {{"worst", t.worst}, {"worst_minus_tolerance", t.margin}, {"evaluated", t.evaluated},
                        {"failures", t.failures}, {"passed", t.failures == 0}};
        passed = passed && t.failures == 0;
        if (!a.out.empty())
            out << (t.failures == 0 ? "ok   " : "FAIL ") << name << "  worst " << format_number(t.worst) << "  ("
                << t.evaluated << " evaluated)\n";
    }
    const json report = {{"tool", tool_json()}, {"mode", mode},        {"seed", a.seed},
                         {"trials", a.trials},  {"samples", a.samples}, {"checks", checks},
                         {"violations", suite.violations}, {"passed", passed}};
    emit(report, a.out, out);
    if (!passed) {
        err << "magalg: theorem violation; offending configurations are listed under \"violations\"\n";
        return kExitViolation;
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Magnetic-gradient algebra of synchronised dipole arrays", "magalg"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MAGALG_VERSION);

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Structure, bounds and lambda_bar for each field point");
    analyze->add_option("--config", an.config, "config JSON")->required();
    analyze->add_option("--tol", an.params.tol, "chain tolerance relative to the algebra scale")->capture_default_str();
    analyze->add_option("--samples", an.params.samples, "sphere samples")->capture_default_str();
    analyze->add_option("--refine", an.params.refine, "ascent iterations")->capture_default_str();
    analyze->add_option("--seed", an.params.seed, "lattice rotation seed")->capture_default_str();
    analyze->add_option("--threads", an.params.threads, "worker threads (0 = all cores)")->capture_default_str();
    analyze->add_flag("--si", an.si, "report forces with the 3 mu0 / 4 pi prefactor");
    analyze->add_option("--out", an.out, "report path")->required();

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "CSV of bounds over a grid of field points");
    sweep->add_option("--config", sw.config, "config JSON (field_points ignored)")->required();
    sweep->add_option("--grid", sw.grid, "x0:x1:nx,y0:y1:ny,z0:z1:nz")->required();
    sweep->add_option("--out", sw.out, "CSV path")->required();
    sweep->add_option("--tol", sw.params.tol)->capture_default_str();
    sweep->add_option("--samples", sw.params.samples)->capture_default_str();
    sweep->add_option("--refine", sw.params.refine)->capture_default_str();
    sweep->add_option("--seed", sw.params.seed)->capture_default_str();
    sweep->add_option("--threads", sw.params.threads)->capture_default_str();

    GenArgs ge;
    auto* gen = app.add_subcommand("gen", "Write a generated configuration");
    gen->require_subcommand(1);
    gen->add_option("--field-point", ge.field_point, "x,y,z")->capture_default_str();
    gen->add_option("--out", ge.out, "output path (default stdout)");
    auto* pair = gen->add_subcommand("pair", "two magnets at +-sep/2 along an axis");
    pair->add_option("--sep", ge.sep)->capture_default_str();
    pair->add_option("--axis", ge.axis)->capture_default_str();
    auto* mirror = gen->add_subcommand("mirror", "mirror-symmetric set about a plane through the origin");
    mirror->add_option("--normal", ge.normal, "plane normal x,y,z")->capture_default_str();
    mirror->add_option("--mirror-pair", ge.pairs, "x,y,z; adds the point and its reflection");
    mirror->add_option("--in-plane", ge.in_plane, "x,y,z; projected onto the plane");
    auto* lattice = gen->add_subcommand("lattice", "finite cubic lattice");
    lattice->add_option("--spacing", ge.spacing)->capture_default_str();
    lattice->add_option("--k", ge.k, "half extent")->capture_default_str();
    lattice->add_flag("--exclude-origin", ge.exclude_origin);
    for (auto* sub : {pair, mirror, lattice}) {
        sub->fallthrough();
        sub->callback([&ge, sub] { ge.kind = sub->get_name(); });
    }

    VerifyArgs ve;
    auto* verify = app.add_subcommand("verify", "Property checks on random planar configs or a given config");
    verify->add_option("--trials", ve.trials)->capture_default_str();
    verify->add_option("--seed", ve.seed)->capture_default_str();
    verify->add_option("--samples", ve.samples)->capture_default_str();
    verify->add_option("--config", ve.config);
    verify->add_option("--out", ve.out, "report path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << MAGALG_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "magalg: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(an, out, err);
        if (sweep->parsed()) return cmd_sweep(sw, out, err);
        if (gen->parsed()) return cmd_gen(ge, out);
        if (verify->parsed()) return cmd_verify(ve, out, err);
    } catch (const CliError& e) {
        err << "magalg: " << e.what() << '\n';
        return e.code();
    } catch (const SingularFieldPoint& e) {
        err << "magalg: " << e.what() << '\n';
        return kExitSingular;
    } catch (const Error& e) {
        err << "magalg: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace magalg::cli
