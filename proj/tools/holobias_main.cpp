// Command-line surface for the holonomy-bias library: bias constants, signal
// traces, limiting densities by inversion or sampling, time averages,
// geodesic-table sums, the dihedral progression construction, and catalog
// validation. All outputs are deterministic for a fixed config (and seed).

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holobias/holobias.hpp"

namespace hb = holobias;
using nlohmann::ordered_json;

namespace {

hb::HolonomyTestFunction resolve_test_function(const std::string& spec) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(hb::read_file(spec));
        } catch (const nlohmann::json::exception& e) {
            throw hb::parse_error(std::string("test function table: ") + e.what());
        }
        std::map<int, std::complex<double>> coeffs;
        for (const auto& e : j) {
            const int p = e.at("p").get<int>();
            coeffs[p] = {e.value("re", 0.0), e.value("im", 0.0)};
        }
        return hb::HolonomyTestFunction::from_coeffs(coeffs);
    }
    return hb::parse_test_function_spec(spec);
}

struct CommonOpts {
    std::string catalog_path;
    std::string f_spec = "cos:1";
    std::string kernel_kind = "bump";
    double eta = 0.1;
    double eta0 = 0.0; // 0: default to eta
    std::string out_path;
    std::string svg_path;

    hb::KernelScale scale() const { return {eta, eta0 > 0.0 ? eta0 : eta}; }

    ordered_json config(const std::string& subcommand) const {
        ordered_json j;
        j["subcommand"] = subcommand;
        if (!catalog_path.empty()) j["catalog"] = catalog_path;
        j["f"] = f_spec;
        j["kernel"] = kernel_kind;
        j["eta"] = eta;
        j["eta0"] = eta0 > 0.0 ? eta0 : eta;
        if (!out_path.empty()) j["out"] = out_path;
        if (!svg_path.empty()) j["svg"] = svg_path;
        return j;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool catalog_required) {
    auto* cat = cmd->add_option("--catalog", o.catalog_path, "spectrum catalog (.json or .csv)");
    if (catalog_required) cat->required();
    cmd->add_option("--f", o.f_spec, "test function: cos:k, sin:k, or a .json coefficient table");
    cmd->add_option("--kernel", o.kernel_kind, "smoothing kernel kind")->default_str("bump");
    cmd->add_option("--eta", o.eta, "smoothing scale eta");
    cmd->add_option("--eta0", o.eta0, "scale ceiling eta0 (default: eta)");
    cmd->add_option("--out", o.out_path, "output file path");
    cmd->add_option("--svg", o.svg_path, "optional SVG plot path");
}

hb::SpectrumCatalog load_or_empty(const CommonOpts& o) {
    if (o.catalog_path.empty()) return {};
    return hb::load_catalog_file(o.catalog_path);
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"holonomy bias toolkit"};
    app.require_subcommand(1);

    CommonOpts bias_o, signal_o, density_o, sample_o, timeavg_o, geo_o, validate_o;

    auto* cmd_bias = app.add_subcommand("bias", "bias constant and its components");
    add_common(cmd_bias, bias_o, false);

    auto* cmd_signal = app.add_subcommand("signal", "truncated bias signal over a y-grid");
    add_common(cmd_signal, signal_o, true);
    double sig_T = 1e9, sig_Y = 100.0, sig_step = 0.05, sig_y0 = 0.0;
    cmd_signal->add_option("--T", sig_T, "spectral cutoff");
    cmd_signal->add_option("--Y", sig_Y, "grid end")->required();
    cmd_signal->add_option("--grid-step", sig_step, "grid step");
    cmd_signal->add_option("--y0", sig_y0, "grid start (default eta0)");

    auto* cmd_density = app.add_subcommand("density", "limiting density by Fourier inversion");
    add_common(cmd_density, density_o, true);
    std::size_t den_points = 801;
    double den_tail = 1e-8;
    bool den_share = false;
    cmd_density->add_option("--grid-points", den_points, "density grid size");
    cmd_density->add_option("--tail-epsilon", den_tail, "envelope truncation threshold");
    cmd_density->add_flag("--share-equal-s", den_share, "share torus coordinates for equal s");

    auto* cmd_sample = app.add_subcommand("sample", "empirical distribution by torus sampling");
    add_common(cmd_sample, sample_o, true);
    std::size_t smp_n = 0;
    std::uint64_t smp_seed = 0;
    std::size_t smp_bins = 200;
    unsigned smp_threads = 0;
    bool smp_qmc = false, smp_share = false;
    cmd_sample->add_option("--samples", smp_n, "number of samples")->required();
    cmd_sample->add_option("--seed", smp_seed, "RNG seed")->required();
    cmd_sample->add_option("--bins", smp_bins, "histogram bins");
    cmd_sample->add_option("--threads", smp_threads, "worker threads (0 = auto)");
    cmd_sample->add_flag("--qmc", smp_qmc, "rank-1 lattice sampling");
    cmd_sample->add_flag("--share-equal-s", smp_share, "share torus coordinates for equal s");

    auto* cmd_timeavg = app.add_subcommand("timeavg", "long-run time average of h(E^(T))");
    add_common(cmd_timeavg, timeavg_o, true);
    double ta_T = 1e9, ta_Y = 10000.0, ta_step = 0.05, ta_threshold = 0.0;
    std::string ta_h = "identity";
    cmd_timeavg->add_option("--T", ta_T, "spectral cutoff");
    cmd_timeavg->add_option("--Y", ta_Y, "averaging horizon")->required();
    cmd_timeavg->add_option("--grid-step", ta_step, "quadrature step");
    cmd_timeavg->add_option("--functional", ta_h, "functional: identity|square|indicator|clipped-exp");
    cmd_timeavg->add_option("--threshold", ta_threshold, "indicator threshold");

    auto* cmd_geo = app.add_subcommand("geodesics", "geometric-side sums from a table");
    add_common(cmd_geo, geo_o, false);
    std::string geo_path, geo_weighting = "length-times-f";
    double geo_y = 0.0;
    bool geo_primitive = false;
    cmd_geo->add_option("--geodesics", geo_path, "geodesic table CSV")->required();
    cmd_geo->add_option("--y", geo_y, "window center")->required();
    cmd_geo->add_option("--weighting", geo_weighting, "plain|length-times-f|weyl-tilde");
    cmd_geo->add_flag("--primitive-only", geo_primitive, "restrict to primitive records");

    auto* cmd_dihedral = app.add_subcommand("dihedral", "dihedral character solution and export");
    std::string dh_export, dh_out;
    int dh_p = 4;
    long long dh_mult = 1;
    cmd_dihedral->add_option("--export", dh_export, "progression range, e.g. n=0..9");
    cmd_dihedral->add_option("--p", dh_p, "weight for exported lines");
    cmd_dihedral->add_option("--mult", dh_mult, "multiplicity for exported lines");
    cmd_dihedral->add_option("--out", dh_out, "catalog output path (with --export)");

    auto* cmd_validate = app.add_subcommand("validate", "catalog checks");
    add_common(cmd_validate, validate_o, true);
    double va_volume = 1.0, va_slack = 10.0;
    cmd_validate->add_option("--volume", va_volume, "manifold volume for the Weyl screen");
    cmd_validate->add_option("--slack", va_slack, "Weyl screen slack factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_bias->parsed()) {
            const auto cat = load_or_empty(bias_o);
            const auto f = resolve_test_function(bias_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(bias_o.kernel_kind);
            const auto b = hb::bias_constant(cat, f, kernel, bias_o.scale());
            ordered_json j;
            j["config"] = bias_o.config("bias");
            j["value"] = b.value;
            j["zero_line_contribution"] = b.zero_line_contribution;
            j["trivial_contribution"] = b.trivial_contribution;
            j["c0_eta"] = hb::c_s_eta(kernel, bias_o.scale(), 0.0).value.real();
            emit(j);
        } else if (cmd_signal->parsed()) {
            const auto cat = hb::load_catalog_file(signal_o.catalog_path);
            const auto f = resolve_test_function(signal_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(signal_o.kernel_kind);
            const auto scale = signal_o.scale();
            const hb::SignalEvaluator ev(cat, f, kernel, scale, sig_T);
            const double y0 = sig_y0 > 0.0 ? sig_y0 : scale.eta0;
            if (!(sig_Y > y0)) throw hb::precondition_error("signal: Y must exceed the grid start");
            std::vector<double> ys, es;
            for (double y = y0; y <= sig_Y + 1e-12; y += sig_step) {
                ys.push_back(y);
                es.push_back(ev(y));
            }
            if (signal_o.out_path.empty()) throw hb::precondition_error("signal requires --out");
            hb::write_xy_csv(signal_o.out_path, "y,E", ys, es);
            if (!signal_o.svg_path.empty())
                hb::write_svg_line(signal_o.svg_path, ys, es, "E^(T)[f, g_{y,eta}]");
            ordered_json j;
            j["config"] = signal_o.config("signal");
            j["config"]["T"] = sig_T;
            j["config"]["Y"] = sig_Y;
            j["config"]["grid_step"] = sig_step;
            j["config"]["y0"] = y0;
            j["bias_constant"] = ev.bias();
            j["terms"] = ev.term_count();
            j["rows"] = ys.size();
            emit(j);
        } else if (cmd_density->parsed()) {
            const auto cat = hb::load_catalog_file(density_o.catalog_path);
            const auto f = resolve_test_function(density_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(density_o.kernel_kind);
            const auto mode = den_share ? hb::CoordinateMode::share_equal_s
                                        : hb::CoordinateMode::per_class;
            const auto set = hb::build_amplitude_set(cat, f, kernel, density_o.scale(), mode);
            const auto d = hb::density_inversion(set, hb::default_density_grid(set, den_points),
                                                 den_tail);
            if (!density_o.out_path.empty())
                hb::write_xy_csv(density_o.out_path, "x,p", d.grid, d.density);
            if (!density_o.svg_path.empty())
                hb::write_svg_line(density_o.svg_path, d.grid, d.density, "limiting density");
            ordered_json j;
            j["config"] = density_o.config("density");
            j["config"]["grid_points"] = den_points;
            j["config"]["tail_epsilon"] = den_tail;
            j["config"]["share_equal_s"] = den_share;
            j["summary"] = hb::distribution_summary(d);
            if (cat.independence_declared && cat.has_equal_s_pairs())
                j["warnings"] = {"declared-independent catalog contains equal s values"};
            emit(j);
        } else if (cmd_sample->parsed()) {
            const auto cat = hb::load_catalog_file(sample_o.catalog_path);
            const auto f = resolve_test_function(sample_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(sample_o.kernel_kind);
            const auto mode = smp_share ? hb::CoordinateMode::share_equal_s
                                        : hb::CoordinateMode::per_class;
            const auto set = hb::build_amplitude_set(cat, f, kernel, sample_o.scale(), mode);
            auto lat = hb::relation_lattice(cat);
            if (mode == hb::CoordinateMode::share_equal_s && lat.n != set.n_coords)
                throw hb::precondition_error("--share-equal-s requires a matching relation lattice");
            hb::SampleOptions opts;
            opts.bins = smp_bins;
            opts.qmc = smp_qmc;
            opts.threads = smp_threads;
            const auto d = hb::sample_distribution(set, lat, smp_n, smp_seed, opts);
            if (!sample_o.out_path.empty())
                hb::write_xy_csv(sample_o.out_path, "x,p", d.grid, d.density);
            if (!sample_o.svg_path.empty())
                hb::write_svg_line(sample_o.svg_path, d.grid, d.density, "empirical density");
            ordered_json j;
            j["config"] = sample_o.config("sample");
            j["config"]["samples"] = smp_n;
            j["config"]["seed"] = smp_seed;
            j["config"]["bins"] = smp_bins;
            j["config"]["qmc"] = smp_qmc;
            j["config"]["share_equal_s"] = smp_share;
            j["summary"] = hb::distribution_summary(d);
            j["subtorus_rank"] = lat.r;
            emit(j);
        } else if (cmd_timeavg->parsed()) {
            const auto cat = hb::load_catalog_file(timeavg_o.catalog_path);
            const auto f = resolve_test_function(timeavg_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(timeavg_o.kernel_kind);
            const double v = hb::time_average(cat, f, kernel, timeavg_o.scale(), ta_T,
                                              hb::parse_functional(ta_h), ta_Y, ta_step,
                                              ta_threshold);
            ordered_json j;
            j["config"] = timeavg_o.config("timeavg");
            j["config"]["T"] = ta_T;
            j["config"]["Y"] = ta_Y;
            j["config"]["grid_step"] = ta_step;
            j["config"]["h"] = ta_h;
            j["config"]["threshold"] = ta_threshold;
            j["value"] = v;
            emit(j);
        } else if (cmd_geo->parsed()) {
            const auto recs = hb::load_geodesics_text(hb::read_file(geo_path));
            const auto f = resolve_test_function(geo_o.f_spec);
            const auto kernel = hb::SmoothingKernel::make(geo_o.kernel_kind);
            hb::GeoWeighting w;
            if (geo_weighting == "plain") w = hb::GeoWeighting::plain;
            else if (geo_weighting == "length-times-f") w = hb::GeoWeighting::length_times_f;
            else if (geo_weighting == "weyl-tilde") w = hb::GeoWeighting::weyl_tilde;
            else throw hb::parse_error("unknown weighting: " + geo_weighting);
            const auto r = hb::geometric_bias_sum(recs, f, kernel, geo_o.scale(), geo_y,
                                                  geo_primitive, w);
            ordered_json j;
            j["config"] = geo_o.config("geodesics");
            j["config"]["geodesics"] = geo_path;
            j["config"]["y"] = geo_y;
            j["config"]["weighting"] = geo_weighting;
            j["config"]["primitive_only"] = geo_primitive;
            j["records"] = recs.size();
            j["value"] = r.value;
            j["normalized"] = r.normalized;
            emit(j);
        } else if (cmd_dihedral->parsed()) {
            const auto sol = hb::solve_hecke_example();
            ordered_json j;
            j["config"]["subcommand"] = "dihedral";
            j["k1"] = {{"residue", sol.k1_residue}, {"modulus", sol.k1_modulus}};
            j["offset"] = hb::format_rational(sol.t_offset);
            j["scale"] = sol.t_scale;
            j["scale_symbolic"] = "2*pi/log(2+sqrt3)";
            auto places = ordered_json::array();
            for (const auto& pl : sol.places)
                places.push_back({{"generator", pl.generator},
                                  {"root_order", pl.root_order},
                                  {"root_exponent", pl.root_exponent},
                                  {"dlog_zeta12", pl.dlog_zeta12},
                                  {"dlog_unit", pl.dlog_unit},
                                  {"dlog_minus_one", pl.dlog_minus_one}});
            j["places"] = places;
            if (!dh_export.empty()) {
                if (dh_export.size() < 3 || dh_export.substr(0, 2) != "n=")
                    throw hb::parse_error("--export wants n=A..B");
                const auto dots = dh_export.find("..");
                if (dots == std::string::npos) throw hb::parse_error("--export wants n=A..B");
                long long lo = 0, hi = 0;
                try {
                    lo = std::stoll(dh_export.substr(2, dots - 2));
                    hi = std::stoll(dh_export.substr(dots + 2));
                } catch (const std::exception&) {
                    throw hb::parse_error("--export wants n=A..B");
                }
                const auto cat = hb::export_progression(sol, lo, hi, dh_p, dh_mult);
                j["config"]["export"] = dh_export;
                j["config"]["p"] = dh_p;
                j["config"]["mult"] = dh_mult;
                j["catalog"] = hb::catalog_to_json(cat);
                if (!dh_out.empty()) {
                    std::ofstream out(dh_out, std::ios::binary);
                    if (!out) throw hb::parse_error("cannot write file: " + dh_out);
                    out << hb::catalog_to_json(cat).dump(2) << "\n";
                    j["config"]["out"] = dh_out;
                }
            }
            emit(j);
        } else if (cmd_validate->parsed()) {
            const auto cat = hb::load_catalog_file(validate_o.catalog_path);
            ordered_json j;
            j["config"] = validate_o.config("validate");
            j["config"]["volume"] = va_volume;
            j["config"]["slack"] = va_slack;
            j["lines"] = cat.lines.size();
            j["zero_lines"] = cat.zero_lines.size();
            auto windows = ordered_json::array();
            for (const auto& w : hb::validate_weyl(cat, va_volume, va_slack))
                windows.push_back({{"n", w.n}, {"R", w.R}, {"mult_sum", w.mult_sum},
                                   {"bound", w.bound}});
            j["weyl_flags"] = windows;
            j["equal_s_pairs"] = cat.has_equal_s_pairs();
            if (cat.independence_declared || cat.all_lines_exact()) {
                const auto lat = hb::relation_lattice(cat);
                j["relation_lattice"] = {{"n", lat.n}, {"r", lat.r},
                                         {"relations", lat.relations.size()}};
            }
            emit(j);
        }
    } catch (const hb::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hb::constraint_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hb::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hb::numeric_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
