#include "phasor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace phasor::analysis {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

bool singular(const ExtendedComplex& w) {
    if (!w.is_finite() || w.is_zero()) return true;
    // values this small carry no trustworthy phase
    return std::abs(w.value().real()) + std::abs(w.value().imag()) < 1e-250;
}

}  // namespace

PathPolyline rect_path(const RectBounds& r) {
    return PathPolyline{{cplx(r.xmin, r.ymin), cplx(r.xmax, r.ymin), cplx(r.xmax, r.ymax),
                         cplx(r.xmin, r.ymax)},
                        true};
}

PathPolyline circle_path(cplx center, double radius, int segments) {
    PathPolyline p;
    p.vertices.reserve(segments);
    for (int k = 0; k < segments; ++k)
        p.vertices.push_back(center + std::polar(radius, kTwoPi * k / segments));
    return p;
}

SampledLift lift_along(const expr::ExprAst& f, const std::function<cplx(double)>& curve,
                       std::span<const double> seed_params, int max_depth) {
    // evaluate, nudging the parameter along the curve when the sample is
    // singular; lo/hi bracket how far the nudge may go
    auto probe = [&](double t, double lo, double hi) -> std::pair<double, cplx> {
        ExtendedComplex w = expr::eval(f, curve(t));
        if (!singular(w)) return {t, w.value()};
        const double room = std::min(t - lo, hi - t);
        for (double scale : {1e-4, 1e-3, 1e-2}) {
            for (double sign : {1.0, -1.0}) {
                const double ts = t + sign * scale * (room > 0.0 ? room : 1e-6);
                if (ts <= lo || ts >= hi) continue;
                w = expr::eval(f, curve(ts));
                if (!singular(w)) return {ts, w.value()};
            }
        }
        throw SingularOnPathError("f is zero or infinite on the sampling path");
    };

    SampledLift out;
    if (seed_params.size() < 2) throw Error("lift_along needs at least two parameters");

    struct Sample {
        double t;
        cplx w;
    };
    std::vector<Sample> seeds;
    seeds.reserve(seed_params.size());
    for (std::size_t k = 0; k < seed_params.size(); ++k) {
        const double lo = k == 0 ? -1e300 : seeds.back().t;
        const double hi = k + 1 == seed_params.size() ? 1e300 : seed_params[k + 1];
        // endpoints of closed curves must stay put so the loop closes exactly
        if (k == 0 || k + 1 == seed_params.size()) {
            ExtendedComplex w = expr::eval(f, curve(seed_params[k]));
            if (singular(w)) {
                auto [t, wv] = probe(seed_params[k], lo, hi);
                seeds.push_back({t, wv});
            } else {
                seeds.push_back({seed_params[k], w.value()});
            }
        } else {
            auto [t, w] = probe(seed_params[k], lo, hi);
            seeds.push_back({t, w});
        }
    }

    out.params.push_back(seeds[0].t);
    out.lift.push_back(std::arg(seeds[0].w));

    auto record = [&](double t, double step) {
        out.params.push_back(t);
        out.lift.push_back(out.lift.back() + step);
        out.max_step = std::max(out.max_step, std::abs(step));
        out.total_variation += std::abs(step);
    };

    // Refine (t0,t1) until the phase increment is below pi/2. Endpoints can
    // alias (the phase turns a full extra loop around a singularity close to
    // the segment while the wrapped increment stays small), so acceptance
    // also demands that the midpoint agree with both halves and that
    // log|f| at the midpoint stays near its chord interpolation; any nearby
    // singularity spikes or dents the modulus and forces a split.
    std::function<void(double, cplx, double, cplx, int)> emit = [&](double t0, cplx w0, double t1,
                                                                    cplx w1, int depth) {
        const double step = std::remainder(std::arg(w1) - std::arg(w0), kTwoPi);
        if (depth >= max_depth)
            throw RefinementExhaustedError("phase step refinement exceeded depth limit");
        auto [tm, wm] = probe(0.5 * (t0 + t1), t0, t1);
        const double step_a = std::remainder(std::arg(wm) - std::arg(w0), kTwoPi);
        const double step_b = std::remainder(std::arg(w1) - std::arg(wm), kTwoPi);
        const double log_dev =
            std::log(std::abs(wm)) - 0.5 * (std::log(std::abs(w0)) + std::log(std::abs(w1)));
        const bool consistent = std::abs(step) < kPi / 2.0 && std::abs(step_a) < kPi / 2.0 &&
                                std::abs(step_b) < kPi / 2.0 &&
                                std::abs(step_a + step_b - step) < 1e-6 &&
                                std::abs(log_dev) <= 0.5;
        if (consistent) {
            record(tm, step_a);
            record(t1, step_b);
            return;
        }
        emit(t0, w0, tm, wm, depth + 1);
        emit(tm, wm, t1, w1, depth + 1);
    };
    for (std::size_t k = 0; k + 1 < seeds.size(); ++k)
        emit(seeds[k].t, seeds[k].w, seeds[k + 1].t, seeds[k + 1].w, 0);
    return out;
}

namespace {

// arclength parametrization of a closed polyline; t = 1 returns the first
// vertex exactly so the loop closes bit-exactly
struct PolylineCurve {
    std::vector<cplx> pts;       // with closing vertex appended
    std::vector<double> cumlen;  // cumulative, cumlen[0] = 0

    explicit PolylineCurve(const PathPolyline& p) {
        pts = p.vertices;
        pts.push_back(p.vertices.front());
        cumlen.resize(pts.size(), 0.0);
        for (std::size_t k = 1; k < pts.size(); ++k)
            cumlen[k] = cumlen[k - 1] + std::abs(pts[k] - pts[k - 1]);
    }
    double total() const { return cumlen.back(); }
    cplx operator()(double t) const {
        if (t <= 0.0) return pts.front();
        if (t >= 1.0) return pts.back();
        const double s = t * total();
        auto it = std::upper_bound(cumlen.begin(), cumlen.end(), s);
        std::size_t hi = std::min(std::size_t(it - cumlen.begin()), pts.size() - 1);
        const double seg = cumlen[hi] - cumlen[hi - 1];
        const double u = seg > 0.0 ? (s - cumlen[hi - 1]) / seg : 0.0;
        return pts[hi - 1] + u * (pts[hi] - pts[hi - 1]);
    }
    // parameter of vertex k
    double vertex_param(std::size_t k) const { return cumlen[k] / total(); }
};

void validate_closed(const PathPolyline& path) {
    if (!path.closed) throw Error("path must be closed");
    if (path.vertices.size() < 3) throw Error("closed path needs at least 3 vertices");
    for (std::size_t k = 0; k < path.vertices.size(); ++k) {
        const cplx a = path.vertices[k];
        const cplx b = path.vertices[(k + 1) % path.vertices.size()];
        if (a == b) throw Error("consecutive path vertices must be distinct");
    }
}

std::vector<double> seed_params_for(const PolylineCurve& curve, int base) {
    std::vector<double> seeds;
    for (std::size_t k = 0; k + 1 < curve.pts.size(); ++k) seeds.push_back(curve.vertex_param(k));
    for (int k = 1; k < base; ++k) seeds.push_back(double(k) / base);
    seeds.push_back(1.0);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                seeds.end());
    if (seeds.front() != 0.0) seeds.insert(seeds.begin(), 0.0);
    if (seeds.back() != 1.0) seeds.push_back(1.0);
    return seeds;
}

}  // namespace

ChromaticResult chromatic_number(const expr::ExprAst& f, const PathPolyline& path) {
    validate_closed(path);
    PolylineCurve curve(path);
    const auto seeds = seed_params_for(curve, 64);
    SampledLift lift = lift_along(f, [&](double t) { return curve(t); }, seeds);
    const double total = lift.lift.back() - lift.lift.front();
    ChromaticResult res;
    res.winding = int(std::lround(total / kTwoPi));
    res.samples_used = long(lift.params.size());
    res.max_phase_step = lift.max_step;
    return res;
}

int count_zeros_poles(const expr::ExprAst& f, const RectBounds& rect) {
    if (!f.holomorphic())
        throw expr::NonHolomorphicError("argument principle needs a meromorphic expression");
    return chromatic_number(f, rect_path(rect)).winding;
}

// ---------------------------------------------------------------------------
// quadtree localization

namespace {

struct Box {
    double x0, x1, y0, y1;
    double side() const { return std::max(x1 - x0, y1 - y0); }
    cplx center() const { return cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1)); }
};

struct BoxScan {
    int winding = 0;
    double variation = 0.0;
};

BoxScan box_scan(const expr::ExprAst& f, const Box& b) {
    const PathPolyline path = rect_path(RectBounds{b.x0, b.x1, b.y0, b.y1});
    PolylineCurve curve(path);
    const auto seeds = seed_params_for(curve, 64);
    SampledLift lift = lift_along(f, [&](double t) { return curve(t); }, seeds);
    return {int(std::lround((lift.lift.back() - lift.lift.front()) / kTwoPi)),
            lift.total_variation};
}

struct Quadtree {
    const expr::ExprAst& f;
    double min_box;
    std::vector<Singularity> found;
    std::vector<std::string> warnings;

    // a zero winding does not rule out canceling zero/pole pairs inside; a
    // boundary sweep beyond what one passing singularity can produce flags
    // the box for speculative splitting (the cascade stops as soon as the
    // children separate from the responsible singularities)
    static bool worth_splitting(const BoxScan& scan) {
        return scan.winding != 0 || scan.variation > 1.25 * kPi;
    }

    void classify(const Box& b, const BoxScan& scan) {
        if (scan.winding == 0) {
            if (scan.variation > 3.0 * kPi)
                warnings.push_back("mixed box: opposite singularities within " +
                                   std::to_string(b.side()) + " near " +
                                   std::to_string(b.center().real()) + "," +
                                   std::to_string(b.center().imag()));
            return;
        }
        Singularity s;
        s.location = b.center();
        s.kind = scan.winding > 0 ? SingularityKind::Zero : SingularityKind::Pole;
        s.order = std::abs(scan.winding);
        s.box_radius = 0.5 * b.side();
        found.push_back(s);
    }

    void subdivide(const Box& b, const BoxScan& scan, int depth) {
        if (!worth_splitting(scan)) return;
        if (b.side() < min_box) {
            classify(b, scan);
            return;
        }
        if (depth > 80) throw RefinementExhaustedError("quadtree depth limit reached");
        double ox = 0.0, oy = 0.0;
        for (int attempt = 0;; ++attempt) {
            if (attempt > 5)
                throw RefinementExhaustedError("could not place a singularity-free split");
            const double cx = 0.5 * (b.x0 + b.x1) + ox;
            const double cy = 0.5 * (b.y0 + b.y1) + oy;
            const Box q[4] = {{b.x0, cx, b.y0, cy},
                              {cx, b.x1, b.y0, cy},
                              {b.x0, cx, cy, b.y1},
                              {cx, b.x1, cy, b.y1}};
            BoxScan sq[4];
            bool ok = true;
            try {
                int sum = 0;
                for (int k = 0; k < 4; ++k) {
                    sq[k] = box_scan(f, q[k]);
                    sum += sq[k].winding;
                }
                ok = (sum == scan.winding);
            } catch (const SingularOnPathError&) {
                ok = false;
            } catch (const RefinementExhaustedError&) {
                ok = false;  // a singularity grazes the split cross
            }
            if (ok) {
                for (int k = 0; k < 4; ++k) subdivide(q[k], sq[k], depth + 1);
                return;
            }
            // nudge the split cross: +x first, then +y
            if (attempt % 2 == 0)
                ox += 1e-3 * b.side();
            else
                oy += 1e-3 * b.side();
        }
    }
};

}  // namespace

SingularityReport localize_singularities(const expr::ExprAst& f, const RectBounds& rect,
                                         double min_box) {
    if (!f.holomorphic())
        throw expr::NonHolomorphicError("localization needs a meromorphic expression");
    if (min_box <= 0.0) throw Error("min_box must be positive");

    Quadtree tree{f, min_box, {}, {}};
    Box root{rect.xmin, rect.xmax, rect.ymin, rect.ymax};
    BoxScan scan;
    bool have_root = false;
    for (int attempt = 0; attempt <= 5 && !have_root; ++attempt) {
        try {
            scan = box_scan(f, root);
            have_root = true;
        } catch (const Error&) {
            const double d = 1e-3 * root.side();
            if (attempt % 2 == 0) {
                root.x0 += d;
                root.x1 += d;
            } else {
                root.y0 += d;
                root.y1 += d;
            }
        }
    }
    if (!have_root)
        throw RefinementExhaustedError("singularity on the rectangle boundary persists");
    tree.subdivide(root, scan, 0);

    SingularityReport report;
    report.entries = std::move(tree.found);
    report.warnings = std::move(tree.warnings);
    std::sort(report.entries.begin(), report.entries.end(), [](const auto& a, const auto& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    for (const Singularity& s : report.entries)
        report.net_count += (s.kind == SingularityKind::Zero ? s.order
                             : s.kind == SingularityKind::Pole ? -s.order
                                                               : 0);
    return report;
}

std::string SingularityReport::to_text() const {
    std::string out;
    char line[160];
    for (const Singularity& s : entries) {
        const char* kind = s.kind == SingularityKind::Zero   ? "zero"
                           : s.kind == SingularityKind::Pole ? "pole"
                                                             : "saddle";
        std::snprintf(line, sizeof line, "%s %.12g %.12g %d %.12g\n", kind, s.location.real(),
                      s.location.imag(), s.order, s.box_radius);
        out += line;
    }
    std::snprintf(line, sizeof line, "net %d\n", net_count);
    out += line;
    return out;
}

double log_derivative_density(const expr::ExprAst& f, cplx z) {
    const ExtendedComplex fz = expr::eval(f, z);
    if (!fz.is_finite() || fz.is_zero())
        throw SingularPointError("log-derivative density needs f(z) finite and nonzero");
    const ExtendedComplex fpz = expr::eval(expr::differentiate(f), z);
    if (!fpz.is_finite())
        throw SingularPointError("f'(z) is not finite");
    return std::abs(fpz.value() / fz.value());
}

SingularityReport find_saddles(const expr::ExprAst& f, const RectBounds& rect, double min_box) {
    const expr::ExprAst fprime = expr::differentiate(f);
    SingularityReport zeros_of_fprime = localize_singularities(fprime, rect, min_box);
    SingularityReport report;
    report.warnings = std::move(zeros_of_fprime.warnings);
    for (const Singularity& s : zeros_of_fprime.entries) {
        if (s.kind != SingularityKind::Zero) continue;
        const ExtendedComplex fv = expr::eval(f, s.location);
        if (fv.is_finite() && std::abs(fv.value()) < 1e-9) continue;  // zero of f, not a saddle
        Singularity saddle = s;
        saddle.kind = SingularityKind::Saddle;
        report.entries.push_back(saddle);
    }
    return report;
}

std::vector<std::pair<double, int>> essential_probe(const expr::ExprAst& f, cplx z0,
                                                    cplx color_phase,
                                                    std::span<const double> radii) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (radii[k] <= 0.0) throw Error("probe radii must be positive");
        if (k > 0 && radii[k] >= radii[k - 1])
            throw Error("probe radii must be strictly descending");
    }
    const double target = std::arg(color_phase);
    std::vector<std::pair<double, int>> out;
    std::vector<double> seeds;
    for (int k = 0; k <= 64; ++k) seeds.push_back(k / 64.0);
    for (double r : radii) {
        auto curve = [&](double t) { return z0 + std::polar(r, kTwoPi * t); };
        SampledLift lift = lift_along(f, curve, seeds);
        // count crossings of the levels target + 2 pi k along the lift; the
        // epsilon makes a lift that starts exactly on a level count its own
        // closing crossing exactly once
        long crossings = 0;
        auto cell = [&](double x) { return (long)std::floor((x - target) / kTwoPi + 1e-9); };
        for (std::size_t k = 0; k + 1 < lift.lift.size(); ++k)
            crossings += std::labs(cell(lift.lift[k + 1]) - cell(lift.lift[k]));
        out.emplace_back(r, int(crossings));
    }
    return out;
}

// ---------------------------------------------------------------------------
// periodicity

PeriodTestResult phase_period_test(const expr::ExprAst& f, cplx p, const RectBounds& probe) {
    if (p == cplx(0.0, 0.0)) throw Error("period candidate must be nonzero");
    struct Pair {
        cplx fz, fzp;
    };
    std::vector<Pair> vals;
    double max_mod = 0.0;
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            const cplx z(probe.xmin + (i + 0.5) / 16.0 * probe.width(),
                         probe.ymin + (j + 0.5) / 16.0 * probe.height());
            const ExtendedComplex fz = expr::eval(f, z);
            const ExtendedComplex fzp = expr::eval(f, z + p);
            if (!fz.is_finite() || !fzp.is_finite() || fz.is_zero() || fzp.is_zero()) continue;
            vals.push_back({fz.value(), fzp.value()});
            max_mod = std::max(max_mod, std::abs(fz.value()));
        }
    }
    // drop near-zero samples: the ratio loses accuracy there
    std::vector<cplx> ratios;
    for (const Pair& v : vals)
        if (std::abs(v.fz) > 1e-4 * max_mod) ratios.push_back(v.fzp / v.fz);
    if (ratios.size() < 32)
        throw TooFewValidSamplesError("fewer than 32 usable probe-grid samples");

    const cplx ref = ratios.front();
    if (!(ref.real() > 0.0) || std::abs(ref.imag()) > 1e-8 * std::abs(ref)) return {};
    for (const cplx& r : ratios)
        if (std::abs(r - ref) > 1e-8 * std::abs(ref)) return {};
    return {true, std::log(ref.real())};
}

namespace {

bool collinear_over_reals(cplx a, cplx b) {
    const cplx r = a / b;
    return std::abs(r.imag()) <= 1e-10 * std::abs(r);
}

}  // namespace

PeriodicityClass classify_periodicity(const expr::ExprAst& f, std::span<const cplx> candidates,
                                      const RectBounds& probe) {
    PeriodicityClass result;

    // striped test: (log f)'' = (f'' f - f'^2)/f^2 identically zero.
    // f'' is taken by central differences of the symbolic f' so that
    // expressions with zeta/gamma/wp derivative nodes stay testable.
    bool striped_testable = true;
    expr::ExprAst fprime;
    try {
        fprime = expr::differentiate(f);
    } catch (const expr::UnsupportedDerivativeError&) {
        striped_testable = false;
    }
    if (striped_testable) {
        const double h = 1e-5;
        int valid = 0;
        bool all_zero = true;
        cplx a_est{}, b_est{};
        for (int i = 0; i < 8 && all_zero; ++i) {
            for (int j = 0; j < 8 && all_zero; ++j) {
                const cplx z(probe.xmin + (i + 0.5) / 8.0 * probe.width(),
                             probe.ymin + (j + 0.5) / 8.0 * probe.height());
                const ExtendedComplex fz = expr::eval(f, z);
                const ExtendedComplex fp = expr::eval(fprime, z);
                const ExtendedComplex fph = expr::eval(fprime, z + h);
                const ExtendedComplex fpl = expr::eval(fprime, z - h);
                if (!fz.is_finite() || fz.is_zero() || !fp.is_finite() || !fph.is_finite() ||
                    !fpl.is_finite())
                    continue;
                const cplx fpp = (fph.value() - fpl.value()) / (2.0 * h);
                const cplx q =
                    (fpp * fz.value() - fp.value() * fp.value()) / (fz.value() * fz.value());
                if (std::abs(q) > 1e-8) all_zero = false;
                if (valid == 0) {
                    a_est = fp.value() / fz.value();
                    b_est = std::log(fz.value()) - a_est * z;
                }
                ++valid;
            }
        }
        if (all_zero && valid >= 32) {
            result.type = PeriodicityClass::Type::Striped;
            result.a = a_est;
            result.b = b_est;
            return result;
        }
    }

    std::vector<std::pair<cplx, double>> passes;
    for (const cplx& p : candidates) {
        const PeriodTestResult r = phase_period_test(f, p, probe);
        if (r.periodic) passes.emplace_back(p, r.alpha);
    }
    // group by R-collinearity of the periods
    std::vector<std::pair<cplx, double>> classes;
    for (const auto& [p, alpha] : passes) {
        bool merged = false;
        for (auto& c : classes)
            if (collinear_over_reals(p, c.first)) merged = true;
        if (!merged) classes.emplace_back(p, alpha);
    }
    if (classes.empty()) {
        result.type = PeriodicityClass::Type::Aperiodic;
    } else if (classes.size() == 1) {
        result.type = PeriodicityClass::Type::SimplyPeriodicPhase;
        result.p1 = classes[0].first;
        result.alpha1 = classes[0].second;
    } else {
        result.type = PeriodicityClass::Type::DoublyPeriodic;
        result.p1 = classes[0].first;
        result.p2 = classes[1].first;
        result.alpha1 = classes[0].second;
        result.alpha2 = classes[1].second;
        // the paper's area-integral argument forces both alphas to vanish
        if (std::abs(result.alpha1) > 1e-6 || std::abs(result.alpha2) > 1e-6)
            throw Error("doubly periodic phase with nonzero alpha: impossible configuration");
    }
    return result;
}

expr::ExprAst geometric_partial_sum(int degree) {
    std::vector<cplx> coeff(std::size_t(degree) + 1, cplx(1.0, 0.0));
    return polynomial_from_coefficients(coeff);
}

expr::ExprAst polynomial_from_coefficients(std::span<const cplx> coefficients) {
    if (coefficients.empty()) throw Error("polynomial needs at least one coefficient");
    using namespace expr;
    NodeRef sum;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        NodeRef power;
        if (k == 0)
            power = nullptr;
        else if (k == 1)
            power = make_variable();
        else
            power = make_binary(NodeKind::Pow, make_variable(),
                                make_constant(cplx(double(k), 0.0)));
        NodeRef term;
        const cplx c = coefficients[k];
        if (!power)
            term = make_constant(c);
        else if (c == cplx(1.0, 0.0))
            term = power;
        else
            term = make_binary(NodeKind::Mul, make_constant(c), power);
        sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
    }
    return ExprAst{sum};
}

}  // namespace phasor::analysis
