#include "phasor/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "phasor/render.hpp"

namespace phasor::flow {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

cplx FlowSystem::field(cplx z) const {
    const ExtendedComplex F = expr::eval(f_, z);
    const ExtendedComplex Fp = expr::eval(fprime_, z);
    if (!F.is_finite() || !Fp.is_finite()) return cplx(0.0, 0.0);
    cplx fv = F.value(), fp = Fp.value();
    // g is invariant under scaling (fv,fp) jointly; rescale away from the
    // overflow/underflow range of |.|^2
    const double m = std::max(std::abs(fv), std::abs(fp));
    if (m == 0.0) return cplx(0.0, 0.0);
    if (m > 1e100 || m < 1e-100) {
        fv /= m;
        fp /= m;
    }
    return fv * std::conj(fp) / (std::norm(fv) + std::norm(fp));
}

namespace {

cplx rk4_step(const FlowSystem& sys, double sign, cplx z, double h) {
    const cplx k1 = sign * sys.field(z);
    const cplx k2 = sign * sys.field(z + 0.5 * h * k1);
    const cplx k3 = sign * sys.field(z + 0.5 * h * k2);
    const cplx k4 = sign * sys.field(z + h * k3);
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int find_capture(std::span<const FixedPoint> fps, cplx z) {
    for (std::size_t k = 0; k < fps.size(); ++k)
        if (std::abs(z - fps[k].location) <= fps[k].capture_radius) return int(k);
    return -1;
}

OrbitEnd ending_for(analysis::SingularityKind kind) {
    switch (kind) {
        case analysis::SingularityKind::Zero: return OrbitEnd::ReachedZero;
        case analysis::SingularityKind::Pole: return OrbitEnd::ReachedPole;
        default: return OrbitEnd::ReachedSaddle;
    }
}

}  // namespace

Orbit integrate_orbit(const FlowSystem& sys, cplx start, bool reversed, const Domain& domain,
                      std::span<const FixedPoint> fixed_points, const OrbitOptions& opts) {
    const double sign = reversed ? -1.0 : 1.0;
    if (std::abs(sys.field(start)) <= 1e-12)
        throw Error("orbit start is a fixed point of the flow");

    Orbit orbit;
    orbit.points.push_back(start);

    const ExtendedComplex f0 = expr::eval(sys.f(), start);
    const bool track_phase = f0.is_finite() && !f0.is_zero();
    const double theta0 = track_phase ? std::arg(f0.value()) : 0.0;

    cplx z = start;
    double h = std::min(opts.max_step, 1e-3);
    int slow_steps = 0;

    for (long step = 0; step < opts.max_steps; ++step) {
        const int hit = find_capture(fixed_points, z);
        if (hit >= 0) {
            orbit.termination = ending_for(fixed_points[std::size_t(hit)].kind);
            orbit.fixed_index = hit;
            return orbit;
        }
        if (!domain.contains(z)) {
            // refine a disk crossing onto the circle
            if (domain.disk_radius && orbit.points.size() >= 2) {
                const double R = *domain.disk_radius;
                cplx inside = orbit.points[orbit.points.size() - 2];
                cplx outside = z;
                if (std::abs(inside) < R) {
                    for (int it = 0; it < 60 && std::abs(outside - inside) > 1e-13; ++it) {
                        const cplx mid = 0.5 * (inside + outside);
                        (std::abs(mid) < R ? inside : outside) = mid;
                    }
                    cplx end = outside * (R / std::abs(outside));
                    // the chord interpolation left the endpoint off the
                    // isochromatic line; walk it back along the circle
                    for (int it = 0; track_phase && it < 8; ++it) {
                        const ExtendedComplex fz = expr::eval(sys.f(), end);
                        const ExtendedComplex fpz = expr::eval(sys.fprime(), end);
                        if (!fz.is_finite() || fz.is_zero() || !fpz.is_finite()) break;
                        const double drift =
                            std::remainder(std::arg(fz.value()) - theta0, kTwoPi);
                        if (std::abs(drift) <= 1e-10) break;
                        const cplx L = fpz.value() / fz.value();
                        const double n2 = std::norm(L);
                        if (n2 < 1e-12) break;
                        end -= drift * cplx(0.0, 1.0) * std::conj(L) / n2;
                        end *= R / std::abs(end);
                    }
                    orbit.points.back() = end;
                }
            }
            orbit.termination = OrbitEnd::ExitedDomain;
            return orbit;
        }

        // doubled-step RK4 with local extrapolation
        cplx y1, y2;
        for (;;) {
            y1 = rk4_step(sys, sign, z, h);
            y2 = rk4_step(sys, sign, rk4_step(sys, sign, z, 0.5 * h), 0.5 * h);
            const double err = std::abs(y2 - y1) / 15.0;
            if (err <= opts.step_tol || h <= opts.min_step) {
                double grow = err > 0.0 ? 0.9 * std::pow(opts.step_tol / err, 0.2) : 2.0;
                grow = std::clamp(grow, 0.2, 2.0);
                h = std::clamp(h * grow, opts.min_step, opts.max_step);
                break;
            }
            h = std::max(opts.min_step, 0.5 * h);
        }
        const cplx next = y2 + (y2 - y1) / 15.0;

        if (std::abs(next - z) < 1e-15 * (1.0 + std::abs(z))) {
            if (++slow_steps > 50)
                throw StagnationError("orbit stopped advancing away from known fixed points");
        } else {
            slow_steps = 0;
        }
        z = next;

        // periodic phase re-projection keeps the orbit isochromatic
        if (track_phase && opts.reproject_every > 0 && step % opts.reproject_every == 0) {
            const ExtendedComplex fz = expr::eval(sys.f(), z);
            const ExtendedComplex fpz = expr::eval(sys.fprime(), z);
            if (fz.is_finite() && !fz.is_zero() && fpz.is_finite()) {
                const double drift = std::remainder(std::arg(fz.value()) - theta0, kTwoPi);
                const cplx L = fpz.value() / fz.value();
                const double n2 = std::norm(L);
                if (std::abs(drift) > 1e-13 && n2 > 1e-12)
                    z -= drift * cplx(0.0, 1.0) * std::conj(L) / n2;
            }
        }
        orbit.points.push_back(z);
    }
    orbit.termination = OrbitEnd::StepLimit;
    return orbit;
}

analysis::SingularityReport classify_fixed_points(const expr::ExprAst& f,
                                                  const analysis::RectBounds& rect) {
    analysis::SingularityReport zeros_poles = analysis::localize_singularities(f, rect, 1e-6);
    analysis::SingularityReport saddles = analysis::find_saddles(f, rect);
    analysis::SingularityReport merged;
    merged.entries = std::move(zeros_poles.entries);
    merged.entries.insert(merged.entries.end(), saddles.entries.begin(), saddles.entries.end());
    merged.net_count = zeros_poles.net_count;
    merged.warnings = std::move(zeros_poles.warnings);
    merged.warnings.insert(merged.warnings.end(), saddles.warnings.begin(),
                           saddles.warnings.end());
    std::sort(merged.entries.begin(), merged.entries.end(), [](const auto& a, const auto& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return merged;
}

namespace {

// multiplicity-aware Newton polish of a zero of f' of order alpha
cplx polish_saddle(const FlowSystem& sys, cplx a, int alpha) {
    for (int it = 0; it < 12; ++it) {
        const ExtendedComplex fp = expr::eval(sys.fprime(), a);
        if (!fp.is_finite()) break;
        const double h = 1e-6 * (1.0 + std::abs(a));
        const ExtendedComplex hi = expr::eval(sys.fprime(), a + h);
        const ExtendedComplex lo = expr::eval(sys.fprime(), a - h);
        if (!hi.is_finite() || !lo.is_finite()) break;
        const cplx fpp = (hi.value() - lo.value()) / (2.0 * h);
        if (std::abs(fpp) < 1e-14) break;
        const cplx delta = double(alpha) * fp.value() / fpp;
        a -= delta;
        if (std::abs(delta) < 1e-14 * (1.0 + std::abs(a))) break;
    }
    return a;
}

}  // namespace

std::vector<Orbit> unstable_manifolds(const FlowSystem& sys, const FixedPoint& saddle,
                                      const Domain& domain) {
    const int alpha = saddle.order;
    const cplx a = polish_saddle(sys, saddle.location, alpha);
    const ExtendedComplex fa_ext = expr::eval(sys.f(), a);
    if (!fa_ext.is_finite() || std::abs(fa_ext.value()) < 1e-9)
        throw SeedClassificationError("not a color saddle: f vanishes at the critical point");
    const cplx fa = fa_ext.value();

    // leading local coefficient: f(z) ~ f(a) + c (z-a)^{alpha+1}; a ring
    // average over 4(alpha+1) directions isolates the (alpha+1) term
    const int ring = 4 * (alpha + 1);
    const double eps = 1e-3;
    cplx c(0.0, 0.0);
    for (int k = 0; k < ring; ++k) {
        const double th = kTwoPi * k / ring;
        const ExtendedComplex fv = expr::eval(sys.f(), a + std::polar(eps, th));
        if (!fv.is_finite()) throw SeedClassificationError("f not finite near the saddle");
        c += (fv.value() - fa) * std::polar(1.0, -(alpha + 1) * th);
    }
    c /= double(ring) * std::pow(eps, alpha + 1);
    if (std::abs(c) < 1e-10)
        throw SeedClassificationError("saddle order mismatch: leading coefficient vanishes");

    // 2(alpha+1) rays alternate between |f| growth (unstable) and decay
    const double base_angle = (std::arg(fa) - std::arg(c)) / (alpha + 1);
    const double spacing = kPi / (alpha + 1);
    for (int j = 0; j < 2 * (alpha + 1); ++j) {
        const double th = base_angle + j * spacing;
        const ExtendedComplex fv = expr::eval(sys.f(), a + std::polar(eps, th));
        if (!fv.is_finite()) throw SeedClassificationError("f not finite near the saddle");
        const double d = std::abs(fv.value()) - std::abs(fa);
        const bool should_grow = (j % 2 == 0);
        if (should_grow != (d > 0.0))
            throw SeedClassificationError(
                "local growth pattern does not alternate around the saddle");
    }

    std::vector<Orbit> rays;
    for (int j = 0; j <= alpha; ++j) {
        const double th = base_angle + j * 2.0 * spacing;
        const cplx seed = a + std::polar(1e-4, th);
        rays.push_back(integrate_orbit(sys, seed, false, domain, {}));
    }
    return rays;
}

// ---------------------------------------------------------------------------
// basins

namespace {

int reverse_label(const FlowSystem& sys, cplx z, const Domain& domain,
                  std::span<const FixedPoint> capture, std::size_t zero_count,
                  const OrbitOptions& opts) {
    if (std::abs(sys.field(z)) <= 1e-12) {
        const int hit = find_capture(capture, z);
        return (hit >= 0 && std::size_t(hit) < zero_count) ? hit : -2;
    }
    try {
        const Orbit orbit = integrate_orbit(sys, z, true, domain, capture, opts);
        if (orbit.termination == OrbitEnd::ReachedZero) return orbit.fixed_index;
    } catch (const StagnationError&) {
    }
    return -2;
}

}  // namespace

int BasinDecomposition::label_point(cplx z) const {
    if (std::abs(z) >= 1.0) return -1;
    const Domain domain{analysis::RectBounds{-1.5, 1.5, -1.5, 1.5}, 1.0};
    return reverse_label(system, z, domain, capture_points, zeros.size(), OrbitOptions{});
}

BasinDecomposition basin_decomposition(std::span<const expr::BlaschkeZero> zeros, cplx c,
                                       const render::Frame& grid, const BasinOptions& options) {
    if (zeros.empty()) throw Error("basin decomposition needs at least one zero");
    for (std::size_t a = 0; a < zeros.size(); ++a)
        for (std::size_t b = a + 1; b < zeros.size(); ++b)
            if (zeros[a].location == zeros[b].location)
                throw Error("basin decomposition wants distinct zero locations");

    const expr::ExprAst f = expr::blaschke(zeros, c);
    BasinDecomposition decomp{FlowSystem(f)};
    decomp.zeros.assign(zeros.begin(), zeros.end());
    decomp.grid = grid;

    const int m = int(zeros.size());
    int order_n = 0;
    double rmax = 0.0;
    for (const auto& zk : zeros) {
        order_n += zk.multiplicity;
        rmax = std::max(rmax, std::abs(zk.location));
    }

    // Saddles live in the hyperbolic hull of the zeros, so within |z| <= rmax;
    // reflected critical points sit at |z| >= 1/rmax and are filtered out.
    const double half = std::min(0.98, 0.5 * (rmax + 1.0) + 0.05);
    const double keep_radius = rmax < 1e-9 ? 0.5 : 0.5 * (rmax + 1.0 / rmax);
    analysis::SingularityReport saddle_report = analysis::find_saddles(
        decomp.system.f(), analysis::RectBounds{-half, half, -half, half});

    int alpha_sum = 0;
    for (const auto& s : saddle_report.entries) {
        if (std::abs(s.location) > std::min(0.999, keep_radius)) continue;
        FixedPoint fp{polish_saddle(decomp.system, s.location, s.order),
                      analysis::SingularityKind::Saddle, s.order, 1e-6};
        decomp.saddles.push_back(fp);
        alpha_sum += s.order;
    }
    if (alpha_sum != m - 1)
        throw BoundViolationError("saddle orders sum to " + std::to_string(alpha_sum) +
                                  ", expected m-1 = " + std::to_string(m - 1));

    // capture set for orbit termination: zeros first, then saddles
    for (std::size_t j = 0; j < zeros.size(); ++j) {
        double radius = 1.0 - std::abs(zeros[j].location);
        for (std::size_t i = 0; i < zeros.size(); ++i)
            if (i != j)
                radius = std::min(radius, std::abs(zeros[i].location - zeros[j].location));
        for (const auto& s : decomp.saddles)
            radius = std::min(radius, std::abs(s.location - zeros[j].location));
        decomp.capture_points.push_back({zeros[j].location, analysis::SingularityKind::Zero,
                                         zeros[j].multiplicity,
                                         std::max(1e-6, 0.25 * radius)});
    }
    for (const auto& s : decomp.saddles) decomp.capture_points.push_back(s);

    // unstable manifolds end on the unit circle; endpoints are the
    // separating points
    const Domain disk{analysis::RectBounds{-1.5, 1.5, -1.5, 1.5}, 1.0};
    std::vector<double> turns;
    for (const auto& s : decomp.saddles) {
        std::vector<Orbit> rays = unstable_manifolds(decomp.system, s, disk);
        for (Orbit& ray : rays) {
            if (ray.termination == OrbitEnd::ExitedDomain) {
                double t = std::arg(ray.points.back()) / kTwoPi;
                if (t < 0.0) t += 1.0;
                turns.push_back(t);
            }
            decomp.manifolds.push_back(std::move(ray));
        }
    }
    std::sort(turns.begin(), turns.end());
    // merge duplicate endpoints (angular tolerance 1e-6 turns of 2pi)
    const double merge_tol = 1e-6 / kTwoPi;
    for (double t : turns) {
        if (!decomp.separating_turns.empty() &&
            (t - decomp.separating_turns.back() < merge_tol ||
             (1.0 - t + decomp.separating_turns.front()) < merge_tol))
            continue;
        decomp.separating_turns.push_back(t);
    }

    const int k = int(decomp.saddles.size());
    const int s_count = decomp.separating_turns.empty() ? 1 : int(decomp.separating_turns.size());
    // m <= s <= m+k-1; a single zero (k = 0) has one arc, the whole circle
    if (s_count < m || s_count > std::max(m, m + k - 1))
        throw BoundViolationError("separating-point count s = " + std::to_string(s_count) +
                                  " outside [m, m+k-1]");

    // arcs and their owning zeros, counterclockwise from angle 0
    OrbitOptions label_opts;
    label_opts.step_tol = options.label_step_tol;
    label_opts.reproject_every = 0;  // labels need speed, not isochromatic fidelity
    auto owner_of = [&](double mid_turn) -> int {
        for (double delta : {1e-3, 1e-2, 5e-2}) {
            const cplx probe = std::polar(1.0 - delta, kTwoPi * mid_turn);
            const int label = reverse_label(decomp.system, probe, disk, decomp.capture_points,
                                            zeros.size(), label_opts);
            if (label >= 0) return label;
        }
        throw Error("arc owner did not resolve to a zero");
    };

    if (decomp.separating_turns.empty()) {
        decomp.arcs.push_back({0.0, 1.0, owner_of(0.5)});
    } else {
        const auto& t = decomp.separating_turns;
        const int s = int(t.size());
        // start from the arc containing turn 0: (t.back()-1, t.front())
        double prev = t.back() - 1.0;
        for (int j = 0; j < s; ++j) {
            const double cur = t[std::size_t(j)];
            decomp.arcs.push_back({prev, cur, owner_of(0.5 * (prev + cur))});
            prev = cur;
        }
        // first arc must contain angle 0 under the [start,end) convention
        if (decomp.arcs.front().end_turn == 0.0)
            std::rotate(decomp.arcs.begin(), decomp.arcs.begin() + 1, decomp.arcs.end());
    }

    // every zero owns at least one arc
    std::vector<bool> seen(zeros.size(), false);
    for (const auto& arc : decomp.arcs) seen[std::size_t(arc.zero_index)] = true;
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw BoundViolationError("some zero owns no boundary arc");

    // grid labels, row-parallel
    decomp.labels.assign(std::size_t(grid.xres) * grid.yres, -2);
    render::parallel_chunks(grid.yres, options.threads, [&](long r0, long r1) {
        for (long row = r0; row < r1; ++row) {
            for (int col = 0; col < grid.xres; ++col) {
                const cplx z = grid.pixel_center(col, int(row));
                int label = -1;
                if (std::abs(z) < 1.0)
                    label = reverse_label(decomp.system, z, disk, decomp.capture_points,
                                          zeros.size(), label_opts);
                decomp.labels[std::size_t(row) * grid.xres + col] = label;
            }
        }
    });
    return decomp;
}

StructureSequence structure_sequence(const BasinDecomposition& decomp) {
    std::vector<int> raw;
    for (const auto& arc : decomp.arcs) raw.push_back(arc.zero_index);
    // renumber zeros by first appearance
    std::vector<int> rename(decomp.zeros.size(), 0);
    int next = 0;
    std::vector<int> seq;
    for (int idx : raw) {
        if (rename[std::size_t(idx)] == 0) rename[std::size_t(idx)] = ++next;
        seq.push_back(rename[std::size_t(idx)]);
    }
    // smallest lexicographic rotation
    const std::size_t n = seq.size();
    std::size_t best = 0;
    for (std::size_t cand = 1; cand < n; ++cand) {
        for (std::size_t k = 0; k < n; ++k) {
            const int a = seq[(cand + k) % n];
            const int b = seq[(best + k) % n];
            if (a != b) {
                if (a < b) best = cand;
                break;
            }
        }
    }
    StructureSequence out;
    for (std::size_t k = 0; k < n; ++k) out.seq.push_back(seq[(best + k) % n]);
    return out;
}

std::string BasinDecomposition::to_text() const {
    std::string out = "ZEROS\n";
    char line[160];
    for (const auto& z : zeros) {
        std::snprintf(line, sizeof line, "%.12g %.12g %d\n", z.location.real(),
                      z.location.imag(), z.multiplicity);
        out += line;
    }
    out += "SADDLES\n";
    for (const auto& s : saddles) {
        std::snprintf(line, sizeof line, "%.12g %.12g %d\n", s.location.real(),
                      s.location.imag(), s.order);
        out += line;
    }
    out += "SEPARATING_POINTS\n";
    for (double t : separating_turns) {
        std::snprintf(line, sizeof line, "%.12g\n", t);
        out += line;
    }
    out += "SEQUENCE\n";
    const StructureSequence seq = structure_sequence(*this);
    for (std::size_t k = 0; k < seq.seq.size(); ++k) {
        out += std::to_string(seq.seq[k]);
        out += (k + 1 == seq.seq.size()) ? '\n' : ' ';
    }
    return out;
}

std::vector<double> boundary_phase_measure(const expr::ExprAst& f,
                                           const analysis::PathPolyline& curve, int bins) {
    if (bins < 1) throw Error("bin count must be positive");
    analysis::ChromaticResult chrom = analysis::chromatic_number(f, curve);  // validates curve

    // lift with bin boundaries pinned into the seed set
    std::vector<cplx> pts = curve.vertices;
    pts.push_back(curve.vertices.front());
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k)
        cum[k] = cum[k - 1] + std::abs(pts[k] - pts[k - 1]);
    auto at = [&](double t) -> cplx {
        if (t <= 0.0) return pts.front();
        if (t >= 1.0) return pts.back();
        const double s = t * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t hi = std::min(std::size_t(it - cum.begin()), pts.size() - 1);
        const double seg = cum[hi] - cum[hi - 1];
        const double u = seg > 0.0 ? (s - cum[hi - 1]) / seg : 0.0;
        return pts[hi - 1] + u * (pts[hi] - pts[hi - 1]);
    };
    std::vector<double> seeds;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) seeds.push_back(cum[k] / cum.back());
    for (int b = 0; b <= bins; ++b) seeds.push_back(double(b) / bins);
    for (int k = 1; k < 64; ++k) seeds.push_back(k / 64.0);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.front() != 0.0) seeds.insert(seeds.begin(), 0.0);
    if (seeds.back() != 1.0) seeds.push_back(1.0);

    analysis::SampledLift lift = analysis::lift_along(f, at, seeds);
    auto lift_at = [&](double t) -> double {
        auto it = std::lower_bound(lift.params.begin(), lift.params.end(), t);
        std::size_t idx = std::size_t(it - lift.params.begin());
        if (idx >= lift.params.size()) return lift.lift.back();
        if (lift.params[idx] == t || idx == 0) return lift.lift[idx];
        const double t0 = lift.params[idx - 1], t1 = lift.params[idx];
        const double u = (t - t0) / (t1 - t0);
        return lift.lift[idx - 1] + u * (lift.lift[idx] - lift.lift[idx - 1]);
    };
    std::vector<double> weights(std::size_t(bins), 0.0);
    double sum = 0.0;
    for (int b = 0; b < bins; ++b) {
        weights[std::size_t(b)] =
            (lift_at(double(b + 1) / bins) - lift_at(double(b) / bins)) / kTwoPi;
        sum += weights[std::size_t(b)];
    }
    if (std::abs(sum - chrom.winding) > 1e-6)
        throw Error("phase measure does not telescope to the chromatic number");
    return weights;
}

}  // namespace phasor::flow
