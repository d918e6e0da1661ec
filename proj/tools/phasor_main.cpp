#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phasor/analysis.hpp"
#include "phasor/boundary.hpp"
#include "phasor/color.hpp"
#include "phasor/expr.hpp"
#include "phasor/flow.hpp"
#include "phasor/image.hpp"
#include "phasor/render.hpp"

using namespace phasor;

namespace {


CLI::App* add_sub(CLI::App& parent, const std::string& name, const std::string& desc) {
    CLI::App* sub = parent.add_subcommand(name, desc);
    sub->fallthrough();
    sub->configurable();
    return sub;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> split_doubles(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("bad numeric list element '" + tok + "'");
        }
    }
    return out;
}

analysis::RectBounds parse_rect(const std::string& text) {
    const auto v = split_doubles(text, ',');
    if (v.size() != 4) throw UsageError("expected xmin,xmax,ymin,ymax");
    if (v[0] >= v[1] || v[2] >= v[3]) throw UsageError("rectangle bounds must be ordered");
    return {v[0], v[1], v[2], v[3]};
}

std::pair<int, int> parse_res(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw UsageError("expected WxH resolution");
    try {
        const int w = std::stoi(text.substr(0, x));
        const int h = std::stoi(text.substr(x + 1));
        if (w <= 0 || h <= 0) throw UsageError("resolution must be positive");
        return {w, h};
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad resolution '" + text + "'");
    }
}

cplx parse_complex_pair(const std::string& text) {
    const auto v = split_doubles(text, ',');
    if (v.size() == 1) return cplx(v[0], 0.0);
    if (v.size() != 2) throw UsageError("expected re,im");
    return cplx(v[0], v[1]);
}

std::vector<expr::BlaschkeZero> parse_zero_list(const std::string& text) {
    std::vector<expr::BlaschkeZero> zeros;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto v = split_doubles(item, ',');
        if (v.size() < 2 || v.size() > 3) throw UsageError("zero entries are re,im[,mult]");
        const int mult = v.size() == 3 ? int(v[2]) : 1;
        zeros.push_back({cplx(v[0], v[1]), mult});
    }
    if (zeros.empty()) throw UsageError("empty zero list");
    return zeros;
}

std::vector<boundary::PrescribedSingularity> parse_singularities(const std::string& text) {
    std::vector<boundary::PrescribedSingularity> out;
    for (const auto& z : parse_zero_list(text)) out.push_back({z.location, z.multiplicity});
    return out;
}

void write_image_file(const render::Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + path + "'");
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".png")
        render::write_png(img, out);
    else
        render::write_ppm(img, out);
}

render::Frame frame_of(const analysis::RectBounds& r, int w, int h) {
    render::Frame f;
    f.xmin = r.xmin;
    f.xmax = r.xmax;
    f.ymin = r.ymin;
    f.ymax = r.ymax;
    f.xres = w;
    f.yres = h;
    return f;
}

// ---------------------------------------------------------------------------
// demos: fixed configurations echoing the reference figures

void demo_jentzsch(const std::string& outdir, int threads) {
    const expr::ExprAst poly = analysis::geometric_partial_sum(20);
    render::RenderOptions opts;
    opts.threads = threads;
    const render::Frame frame = frame_of({-1.3, 1.3, -1.3, 1.3}, 512, 512);
    write_image_file(render::render_image(poly, frame, color::ColorScheme{}, opts),
                     outdir + "/jentzsch.png");
    const auto report = analysis::localize_singularities(poly, {-1.3, 1.3, -1.3, 1.3}, 1e-6);
    std::ofstream txt(outdir + "/jentzsch_zeros.txt");
    txt << report.to_text();
    std::printf("wrote jentzsch.png and jentzsch_zeros.txt (%zu zeros)\n",
                report.entries.size());
}

void demo_zeta(const std::string& outdir, int threads) {
    render::RenderOptions opts;
    opts.threads = threads;
    const render::Frame frame = frame_of({-40.0, 10.0, -2.0, 48.0}, 500, 500);
    write_image_file(render::render_image(expr::parse("zeta(z)"), frame, color::ColorScheme{},
                                          opts),
                     outdir + "/zeta.png");
    std::printf("wrote zeta.png\n");
}

void demo_wilmshurst(const std::string& outdir, int threads) {
    // harmonic polynomial with the maximal 16 zeros at degree 4; the jump
    // scheme marks the zero lines of the real and imaginary parts
    const char* src =
        "im(exp(complex(0,-0.78539816339744831))*z^4)"
        "+complex(0,1)*im(exp(complex(0,0.78539816339744831))*(z-1)^4)";
    render::RenderOptions opts;
    opts.threads = threads;
    const render::Frame frame = frame_of({-1.5, 2.5, -3.0, 3.0}, 400, 600);
    write_image_file(render::render_image(expr::parse(src), frame,
                                          color::parse_scheme("jump:0,0.25,0.5,0.75"), opts),
                     outdir + "/wilmshurst.png");
    std::printf("wrote wilmshurst.png\n");
}

void demo_blaschke(const std::string& outdir, int threads) {
    const std::vector<expr::BlaschkeZero> zeros = {{cplx(0.5, 0.0), 1},
                                                   {cplx(0.0, 0.5), 1},
                                                   {cplx(-0.6, 0.0), 1},
                                                   {cplx(-0.3, -0.3), 1},
                                                   {cplx(0.2, 0.6), 1}};
    render::RenderOptions opts;
    opts.threads = threads;
    const render::Frame view = frame_of({-1.1, 1.1, -1.1, 1.1}, 512, 512);
    write_image_file(
        render::render_image(expr::blaschke(zeros, cplx(1.0, 0.0)), view,
                             color::ColorScheme{}, opts),
        outdir + "/blaschke.png");

    flow::BasinOptions basin_opts;
    basin_opts.threads = threads;
    const render::Frame grid = frame_of({-1.0, 1.0, -1.0, 1.0}, 96, 96);
    flow::BasinDecomposition decomp =
        flow::basin_decomposition(zeros, cplx(1.0, 0.0), grid, basin_opts);
    std::ofstream txt(outdir + "/blaschke_diagram.txt");
    txt << decomp.to_text();

    // label map rendered through distinct hues
    render::Image basins;
    basins.width = grid.xres;
    basins.height = grid.yres;
    basins.pixels.resize(std::size_t(grid.xres) * grid.yres);
    for (int row = 0; row < grid.yres; ++row)
        for (int col = 0; col < grid.xres; ++col) {
            const int label = decomp.labels[std::size_t(row) * grid.xres + col];
            color::Rgb c{255, 255, 255};
            if (label == -2) c = color::Rgb{0, 0, 0};
            if (label >= 0)
                c = color::phase_to_color(ExtendedComplex(
                    std::polar(1.0, 2.0 * 3.14159265358979 * label / double(zeros.size()))));
            basins.at(col, row) = c;
        }
    write_image_file(basins, outdir + "/blaschke_basins.png");
    std::printf("wrote blaschke.png, blaschke_basins.png and blaschke_diagram.txt\n");
    std::printf("%s", decomp.to_text().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase plots and phase-based analysis of complex functions"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key = value configuration file");
    app.allow_config_extras(false);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    // ---- render -----------------------------------------------------------
    auto* cmd_render = add_sub(app, "render", "render a phase plot image");
    std::string r_expr, r_frame = "-1,1,-1,1", r_res = "512x512", r_scheme = "plain", r_out;
    bool r_super = false;
    cmd_render->add_option("-f,--function", r_expr, "expression in z")->required();
    cmd_render->add_option("--frame", r_frame, "xmin,xmax,ymin,ymax");
    cmd_render->add_option("--res", r_res, "WxH pixels");
    cmd_render->add_option("--scheme", r_scheme,
                           "plain | sawtooth | grid | domain | jump:<turns,...>");
    cmd_render->add_option("-o,--output", r_out, "output image (.png or .ppm)")->required();
    cmd_render->add_flag("--supersample", r_super, "2x2 supersampling");

    // ---- analyze ----------------------------------------------------------
    auto* cmd_analyze = add_sub(app, "analyze", "phase-based function analysis");
    cmd_analyze->require_subcommand(1);
    std::string a_expr, a_rect = "-1,1,-1,1";
    double a_minbox = 1e-3;
    std::string a_center = "0,0", a_radii = "0.2,0.1,0.05";
    double a_colorturn = 0.0;
    std::string a_candidates = "6.283185307179586,0;0,6.283185307179586";

    auto* cmd_count = add_sub(*cmd_analyze, "count", "zeros minus poles in a rectangle");
    cmd_count->add_option("-f,--function", a_expr)->required();
    cmd_count->add_option("--rect", a_rect, "xmin,xmax,ymin,ymax");

    auto* cmd_locate = add_sub(*cmd_analyze, "locate", "localize zeros and poles");
    cmd_locate->add_option("-f,--function", a_expr)->required();
    cmd_locate->add_option("--rect", a_rect);
    cmd_locate->add_option("--min-box", a_minbox, "stop splitting below this box side");

    auto* cmd_saddles = add_sub(*cmd_analyze, "saddles", "find color saddles");
    cmd_saddles->add_option("-f,--function", a_expr)->required();
    cmd_saddles->add_option("--rect", a_rect);

    auto* cmd_probe =
        add_sub(*cmd_analyze, "probe", "essential-singularity crossing counts");
    cmd_probe->add_option("-f,--function", a_expr)->required();
    cmd_probe->add_option("--center", a_center, "singularity location re,im");
    cmd_probe->add_option("--color-turn", a_colorturn, "probe color as a turn in [0,1)");
    cmd_probe->add_option("--radii", a_radii, "descending radii r1,r2,...");

    auto* cmd_period = add_sub(*cmd_analyze, "period", "periodicity classification");
    cmd_period->add_option("-f,--function", a_expr)->required();
    cmd_period->add_option("--rect", a_rect, "probe rectangle");
    cmd_period->add_option("--candidates", a_candidates, "semicolon list of re,im periods");

    // ---- flow -------------------------------------------------------------
    auto* cmd_flow = add_sub(app, "flow", "phase-flow dynamics");
    cmd_flow->require_subcommand(1);
    std::string f_expr, f_start = "0.5,0", f_domain = "-2,2,-2,2", f_out;
    bool f_reversed = false;
    std::string f_zeros, f_phase = "1,0", f_res = "96x96";

    auto* cmd_orbits = add_sub(*cmd_flow, "orbits", "integrate a phase-flow orbit");
    cmd_orbits->add_option("-f,--function", f_expr)->required();
    cmd_orbits->add_option("--start", f_start, "starting point re,im");
    cmd_orbits->add_option("--domain", f_domain, "integration rectangle");
    cmd_orbits->add_flag("--reversed", f_reversed, "follow the reversed flow");
    cmd_orbits->add_option("-o,--output", f_out, "write the polyline to a file");

    auto* cmd_basins = add_sub(*cmd_flow, "basins", "basins of a Blaschke product");
    cmd_basins->add_option("--zeros", f_zeros, "re,im[,mult];... inside the unit disk")
        ->required();
    cmd_basins->add_option("--phase-c", f_phase, "unimodular constant re,im");
    cmd_basins->add_option("--res", f_res, "label grid WxH");
    cmd_basins->add_option("-o,--output", f_out, "label image (.png/.ppm)");

    auto* cmd_sequence = add_sub(*cmd_flow, "sequence", "structure sequence only");
    cmd_sequence->add_option("--zeros", f_zeros)->required();
    cmd_sequence->add_option("--phase-c", f_phase);

    // ---- boundary ---------------------------------------------------------
    auto* cmd_boundary = add_sub(app, "boundary", "boundary value problems on the disk");
    cmd_boundary->require_subcommand(1);
    std::string b_file, b_zeros, b_poles, b_res = "256x256", b_out;
    auto* cmd_solve = add_sub(*cmd_boundary, "solve", "reconstruct an analytic phase plot");
    cmd_solve->add_option("-B,--boundary", b_file, "coloring file: N then N lines re im")
        ->required();
    cmd_solve->add_option("--zeros", b_zeros, "prescribed zeros re,im[,order];...");
    cmd_solve->add_option("--poles", b_poles, "prescribed poles re,im[,order];...");
    cmd_solve->add_option("--res", b_res, "output grid WxH");
    cmd_solve->add_option("-o,--output", b_out, "phase image (.png/.ppm)");

    // ---- demo -------------------------------------------------------------
    auto* cmd_demo = add_sub(app, "demo", "reproduce reference-figure analogs");
    cmd_demo->require_subcommand(1);
    std::string d_outdir = ".";
    cmd_demo->add_option("--outdir", d_outdir, "output directory");
    auto* demo_j = add_sub(*cmd_demo, "jentzsch", "partial-sum zeros on the unit circle");
    auto* demo_z = add_sub(*cmd_demo, "zeta", "the zeta landscape window");
    auto* demo_w = add_sub(*cmd_demo, "wilmshurst", "harmonic polynomial, jump scheme");
    auto* demo_b = add_sub(*cmd_demo, "blaschke", "five-zero basin decomposition");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*cmd_render) {
            const auto [w, h] = parse_res(r_res);
            render::RenderOptions opts;
            opts.threads = threads;
            opts.supersample = r_super;
            const render::Image img = render::render_image(
                expr::parse(r_expr), frame_of(parse_rect(r_frame), w, h),
                color::parse_scheme(r_scheme), opts);
            write_image_file(img, r_out);
        } else if (*cmd_count) {
            std::printf("%d\n",
                        analysis::count_zeros_poles(expr::parse(a_expr), parse_rect(a_rect)));
        } else if (*cmd_locate) {
            const auto rep = analysis::localize_singularities(expr::parse(a_expr),
                                                              parse_rect(a_rect), a_minbox);
            std::fputs(rep.to_text().c_str(), stdout);
            for (const auto& warning : rep.warnings)
                std::fprintf(stderr, "warning: %s\n", warning.c_str());
        } else if (*cmd_saddles) {
            const auto rep = analysis::find_saddles(expr::parse(a_expr), parse_rect(a_rect));
            std::fputs(rep.to_text().c_str(), stdout);
        } else if (*cmd_probe) {
            std::vector<double> radii = split_doubles(a_radii, ',');
            const auto counts = analysis::essential_probe(
                expr::parse(a_expr), parse_complex_pair(a_center),
                std::polar(1.0, 2.0 * 3.141592653589793 * a_colorturn), radii);
            for (const auto& [r, n] : counts) std::printf("%.12g %d\n", r, n);
        } else if (*cmd_period) {
            std::vector<cplx> candidates;
            {
                std::stringstream ss(a_candidates);
                std::string tok;
                while (std::getline(ss, tok, ';'))
                    candidates.push_back(parse_complex_pair(tok));
            }
            const auto cls = analysis::classify_periodicity(expr::parse(a_expr), candidates,
                                                            parse_rect(a_rect));
            using Type = analysis::PeriodicityClass::Type;
            switch (cls.type) {
                case Type::Striped:
                    std::printf("striped %.12g %.12g %.12g %.12g\n", cls.a.real(), cls.a.imag(),
                                cls.b.real(), cls.b.imag());
                    break;
                case Type::SimplyPeriodicPhase:
                    std::printf("simply-periodic-phase %.12g %.12g %.12g\n", cls.p1.real(),
                                cls.p1.imag(), cls.alpha1);
                    break;
                case Type::DoublyPeriodic:
                    std::printf("doubly-periodic %.12g %.12g %.12g %.12g %.12g %.12g\n",
                                cls.p1.real(), cls.p1.imag(), cls.alpha1, cls.p2.real(),
                                cls.p2.imag(), cls.alpha2);
                    break;
                case Type::Aperiodic: std::printf("aperiodic\n"); break;
            }
        } else if (*cmd_orbits) {
            flow::FlowSystem sys(expr::parse(f_expr));
            const analysis::RectBounds rect = parse_rect(f_domain);
            const auto fixed = flow::classify_fixed_points(sys.f(), rect);
            std::vector<flow::FixedPoint> fps;
            for (const auto& e : fixed.entries) fps.push_back({e.location, e.kind, e.order, 1e-6});
            const flow::Orbit orbit = flow::integrate_orbit(
                sys, parse_complex_pair(f_start), f_reversed, flow::Domain{rect, {}}, fps);
            const char* names[] = {"reached-zero", "reached-pole", "reached-saddle",
                                   "exited-domain", "step-limit"};
            std::ostringstream text;
            text << names[int(orbit.termination)];
            if (orbit.fixed_index >= 0) text << ' ' << orbit.fixed_index;
            text << '\n';
            char line[64];
            for (const cplx& z : orbit.points) {
                std::snprintf(line, sizeof line, "%.12g %.12g\n", z.real(), z.imag());
                text << line;
            }
            if (f_out.empty()) {
                std::fputs(text.str().c_str(), stdout);
            } else {
                std::ofstream out(f_out);
                out << text.str();
                std::printf("%s", text.str().substr(0, text.str().find('\n') + 1).c_str());
            }
        } else if (*cmd_basins || *cmd_sequence) {
            const auto zeros = parse_zero_list(f_zeros);
            const cplx c = parse_complex_pair(f_phase);
            flow::BasinOptions opts;
            opts.threads = threads;
            const auto [w, h] =
                *cmd_basins ? parse_res(f_res) : std::pair<int, int>{2, 2};
            const auto decomp = flow::basin_decomposition(
                zeros, c, frame_of({-1.0, 1.0, -1.0, 1.0}, w, h), opts);
            std::fputs(decomp.to_text().c_str(), stdout);
            if (*cmd_basins && !f_out.empty()) {
                render::Image img;
                img.width = w;
                img.height = h;
                img.pixels.resize(std::size_t(w) * h);
                for (int row = 0; row < h; ++row)
                    for (int col = 0; col < w; ++col) {
                        const int label = decomp.labels[std::size_t(row) * w + col];
                        color::Rgb px{255, 255, 255};
                        if (label == -2) px = color::Rgb{0, 0, 0};
                        if (label >= 0)
                            px = color::phase_to_color(ExtendedComplex(std::polar(
                                1.0, 2.0 * 3.141592653589793 * label / double(zeros.size()))));
                        img.at(col, row) = px;
                    }
                write_image_file(img, f_out);
            }
        } else if (*cmd_solve) {
            std::ifstream in(b_file);
            if (!in) throw Error("cannot open boundary file '" + b_file + "'");
            const auto coloring = boundary::load_coloring(in);
            const auto [w, h] = parse_res(b_res);
            const render::Frame grid = frame_of({-1.0, 1.0, -1.0, 1.0}, w, h);
            boundary::DiskColoring disk =
                (b_zeros.empty() && b_poles.empty())
                    ? boundary::extend_analytic(coloring, grid)
                    : boundary::extend_with_singularities(
                          coloring,
                          b_zeros.empty() ? std::vector<boundary::PrescribedSingularity>{}
                                          : parse_singularities(b_zeros),
                          b_poles.empty() ? std::vector<boundary::PrescribedSingularity>{}
                                          : parse_singularities(b_poles),
                          grid);
            std::printf("chrom %d\n", boundary::chrom_of_coloring(coloring));
            if (!b_out.empty())
                write_image_file(disk.rasterize(color::ColorScheme{}), b_out);
        } else if (*demo_j) {
            demo_jentzsch(d_outdir, threads);
        } else if (*demo_z) {
            demo_zeta(d_outdir, threads);
        } else if (*demo_w) {
            demo_wilmshurst(d_outdir, threads);
        } else if (*demo_b) {
            demo_blaschke(d_outdir, threads);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
