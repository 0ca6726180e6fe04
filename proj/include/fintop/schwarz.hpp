#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fintop/errors.hpp"

namespace fintop::schwarz {

/**
 * The planar counterexample: a smooth map from 3-space to the plane that
 * commutes with the half-turn upstairs and the reflection downstairs
 * pointwise, yet switches between the plain and the twisted identification
 * on interlocking regions, so no factorization through the quotient exists.
 *
 * The radial profile is pinned here so every reported number is
 * reproducible: the bump s(t) = exp(-1/(t(2-t))) on (0,2), extended by
 * f(x) = s(x mod 4) on the positive bands, -s((x mod 4) - 2) on the negative
 * bands, and 0 at even integers.  The profile is smooth, 4-periodic, flat at
 * every even integer, positive on (4k, 4k+2) and negative on (4k+2, 4k+4).
 */
inline double bump_profile(double t) {
    if (t <= 0.0 || t >= 2.0) return 0.0;
    return std::exp(-1.0 / (t * (2.0 - t)));
}

inline double f_eval(double x) {
    double r = std::fmod(x, 4.0);
    if (r < 0) r += 4.0;
    if (r < 2.0) return bump_profile(r);
    return -bump_profile(r - 2.0);
}

/// g(x) = e^{-n} f(1/x) with n the smallest even integer >= 1/x; g(0) = 0.
inline double g_eval(double x) {
    if (x < 0) fail(ErrorKind::NegativeInput, "radial coordinate must be non-negative");
    if (x == 0.0) return 0.0;
    double inv = 1.0 / x;
    double n = 2.0 * std::ceil(inv / 2.0);
    return std::exp(-n) * f_eval(inv);
}

/// Exponential envelope e^{-n(r)}; witness margins are measured relative to
/// it, because the absolute scale of g collapses toward the axis.
inline double g_envelope(double r) {
    if (r <= 0.0) return 0.0;
    double inv = 1.0 / r;
    return std::exp(-2.0 * std::ceil(inv / 2.0));
}

struct Vec2 {
    double x = 0.0, z = 0.0;
};

inline Vec2 F_eval(double x, double y, double z) {
    double r = std::hypot(x, y);
    double g = g_eval(r);
    double theta = std::atan2(y, x);
    if (g > 0.0) return Vec2{g * std::sin(theta), z};
    return Vec2{g * std::sin(2.0 * theta), z};
}

struct SchwarzConfig {
    double grid_step = 0.01;
    double r_max = 1.0;
    double z_max = 1.0;
    int n_max = 5;
    double tol = 1e-9;              // identity tolerance
    double witness_margin = 1e-3;   // margin on the profile factor (envelope-relative)
    double min_ball_radius = 0.02;
    int disk_resolution = 41;       // planar criterion raster

    void validate() const {
        if (grid_step <= 0 || tol <= 0 || n_max < 1)
            fail(ErrorKind::MalformedElement, "grid step and tolerance must be positive, n_max >= 1");
    }
};

// ---------------------------------------------------------------------------
// planar negligibility criterion

/**
 * Disk-disconnection probe for a sampled closed image set in the plane: a
 * closed set with empty interior is non-negligible exactly when removing it
 * disconnects some disk.  The disk around the first image point is
 * rasterized; cells near the image are removed and the rest flood-filled.
 * Returns true when the remainder splits into at least two substantial
 * components (the set disconnects; not negligible), false when the
 * remainder stays connected (no obstruction to negligibility).
 */
inline bool image_disconnects_disk(const std::vector<Vec2>& image, const Vec2& center,
                                   double disk_radius, int resolution) {
    const double cell = 2.0 * disk_radius / (resolution - 1);
    const double near = 1.5 * cell;
    std::vector<std::vector<int>> grid(resolution, std::vector<int>(resolution, 0));
    // 0 free, 1 blocked/outside
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            double px = center.x - disk_radius + i * cell;
            double pz = center.z - disk_radius + j * cell;
            double dx = px - center.x, dz = pz - center.z;
            if (dx * dx + dz * dz > disk_radius * disk_radius) {
                grid[i][j] = 1;
                continue;
            }
            for (const auto& q : image) {
                double ex = px - q.x, ez = pz - q.z;
                if (ex * ex + ez * ez < near * near) {
                    grid[i][j] = 1;
                    break;
                }
            }
        }
    }
    // flood fill free cells
    int components = 0;
    const int min_cells = resolution;  // ignore slivers
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
            if (grid[i][j] != 0) continue;
            int count = 0;
            std::vector<std::pair<int, int>> stack{{i, j}};
            grid[i][j] = 2;
            while (!stack.empty()) {
                auto [a, b] = stack.back();
                stack.pop_back();
                ++count;
                const int da[4] = {1, -1, 0, 0}, db[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int na = a + da[d], nb = b + db[d];
                    if (na < 0 || nb < 0 || na >= resolution || nb >= resolution) continue;
                    if (grid[na][nb] == 0) {
                        grid[na][nb] = 2;
                        stack.emplace_back(na, nb);
                    }
                }
            }
            if (count >= min_cells) ++components;
        }
    return components >= 2;
}

// ---------------------------------------------------------------------------
// reports

struct WitnessRecord {
    int type = 0;  // 1: plain agreement strict, 2: twisted agreement strict
    double x = 0, y = 0, z = 0;
    double margin = 0;  // profile-factor margin achieved
};

struct StratumEntry {
    std::string stratum;
    std::vector<Vec2> image_sample;
    std::string verdict;
    bool obstruction = false;      // diffuseness report: image closure negligible
    bool witnesses_found = false;  // pathology report
    std::vector<WitnessRecord> witnesses;
};

struct SampleReport {
    std::vector<StratumEntry> strata;
    std::string overall;
};

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

/**
 * Diffuseness evidence per stratum: the axis, each cylinder r = 1/(2n) for
 * n <= n_max, and the critical-angle line families at odd reciprocal radii.
 * A patch of each stratum is sampled, its image computed, and the planar
 * criterion applied: images that contain a segment disconnect disks and are
 * therefore non-negligible, so no obstruction to diffuseness arises from
 * that stratum.
 */
inline SampleReport diffuse_sample_report(const SchwarzConfig& cfg) {
    cfg.validate();
    SampleReport rep;
    auto probe_patch = [&](const std::string& name, const std::vector<std::array<double, 3>>& pts,
                           const std::array<double, 3>& center_point) {
        StratumEntry e;
        e.stratum = name;
        for (const auto& p : pts) {
            Vec2 v = F_eval(p[0], p[1], p[2]);
            e.image_sample.push_back(v);
        }
        Vec2 center = F_eval(center_point[0], center_point[1], center_point[2]);
        double disk_radius = 0.05;
        e.obstruction =
            !image_disconnects_disk(e.image_sample, center, disk_radius, cfg.disk_resolution);
        e.verdict = e.obstruction ? "image closure negligible: obstruction"
                                  : "image contains a segment: no obstruction";
        rep.strata.push_back(std::move(e));
    };

    // sample spacing must undercut the raster cell, or the rasterized image
    // develops gaps the flood fill leaks through
    const int steps = 161;
    // axis patch: an open z-interval on the line x = y = 0
    {
        std::vector<std::array<double, 3>> pts;
        for (int i = 0; i < steps; ++i)
            pts.push_back({0.0, 0.0, -0.1 + 0.2 * i / (steps - 1)});
        probe_patch("axis", pts, {0.0, 0.0, 0.0});
    }
    // cylinder patches: (theta, z) windows at radius 1/(2n)
    for (int n = 1; n <= cfg.n_max; ++n) {
        double r = 1.0 / (2.0 * n);
        std::vector<std::array<double, 3>> pts;
        for (int i = 0; i < steps; ++i)
            for (int j = 0; j < 5; ++j) {
                double theta = 0.3 + 0.1 * j;
                double z = -0.1 + 0.2 * i / (steps - 1);
                pts.push_back({r * std::cos(theta), r * std::sin(theta), z});
            }
        probe_patch("cylinder C" + std::to_string(n), pts,
                    {r * std::cos(0.5), r * std::sin(0.5), 0.0});
    }
    // line families at odd reciprocal radii: critical angles by the sign of g
    for (int k = 1; 2 * k - 1 <= 2 * cfg.n_max + 1; ++k) {
        int odd = 2 * k - 1;
        double r = 1.0 / odd;
        double g = g_eval(r);
        std::vector<double> angles;
        if (g > 0)
            angles = {M_PI / 2, 3 * M_PI / 2};
        else
            angles = {M_PI / 4, 3 * M_PI / 4, 5 * M_PI / 4, 7 * M_PI / 4};
        std::vector<std::array<double, 3>> pts;
        for (double a : angles)
            for (int i = 0; i < steps; ++i)
                pts.push_back(
                    {r * std::cos(a), r * std::sin(a), -0.1 + 0.2 * i / (steps - 1)});
        probe_patch("lines r=1/" + std::to_string(odd), pts,
                    {r * std::cos(angles[0]), r * std::sin(angles[0]), 0.0});
    }

    bool any_obstruction = false;
    for (const auto& e : rep.strata) any_obstruction |= e.obstruction;
    rep.overall = any_obstruction ? "obstruction found" : "diffuse: no obstruction found";
    return rep;
}

/**
 * Witness search around one target point.  Scans radii inside the ball at
 * the plain-diagnostic angle pi/4 (both sin(theta) and sin(2 theta) bounded
 * away from zero) for a type-1 point (negative band: the map agrees with its
 * half-turn composite strictly) and a type-2 point (positive band: the
 * twisted identity holds strictly).  Margins are measured on the profile
 * factor |2 f(1/r) sin .|; the exponential envelope would defeat any
 * absolute threshold near the axis.
 */
inline std::optional<std::pair<WitnessRecord, WitnessRecord>> search_witnesses_around(
    double r0, double z0, double ball_radius, const SchwarzConfig& cfg) {
    const double theta = M_PI / 4;
    std::optional<WitnessRecord> type1, type2;
    const int radial_steps = 4000;
    for (int i = 1; i < radial_steps && (!type1 || !type2); ++i) {
        for (double sgn : {-1.0, 1.0}) {
            double r = r0 + sgn * ball_radius * i / radial_steps;
            if (r <= 0) continue;
            if (std::abs(r - r0) > ball_radius) continue;
            double g = g_eval(r);
            if (g == 0.0) continue;
            double profile = f_eval(1.0 / r);
            double x = r * std::cos(theta), y = r * std::sin(theta);
            if (g < 0.0 && !type1) {
                double margin = std::abs(2.0 * profile * std::sin(2.0 * theta));
                if (margin > cfg.witness_margin) {
                    // verify the defining identities numerically
                    Vec2 v = F_eval(x, y, z0), vm = F_eval(-x, -y, z0);
                    if (std::abs(v.x - vm.x) <= cfg.tol && std::abs(v.z - vm.z) <= cfg.tol &&
                        std::abs(v.x - (-vm.x)) > cfg.witness_margin * g_envelope(r))
                        type1 = WitnessRecord{1, x, y, z0, margin};
                }
            }
            if (g > 0.0 && !type2) {
                double margin = std::abs(2.0 * profile * std::sin(theta));
                if (margin > cfg.witness_margin) {
                    Vec2 v = F_eval(x, y, z0), vm = F_eval(-x, -y, z0);
                    if (std::abs(v.x - (-vm.x)) <= cfg.tol && std::abs(v.z - vm.z) <= cfg.tol &&
                        std::abs(v.x - vm.x) > cfg.witness_margin * g_envelope(r))
                        type2 = WitnessRecord{2, x, y, z0, margin};
                }
            }
        }
    }
    if (type1 && type2) return std::make_pair(*type1, *type2);
    return std::nullopt;
}

/**
 * Pathology witnesses per target: axis points and points of every cylinder
 * up to n_max, at a decreasing radius schedule.  A target passes when both
 * witness types are found in every ball; a fixed-sign region correctly
 * yields no witnesses (the pathology is localized to the axis and the
 * cylinders).  Also certifies the pointwise identification on the grid:
 * F(v) is F(-v) or its reflection at every sampled point.
 */
inline SampleReport pathology_witness_search(const SchwarzConfig& cfg) {
    cfg.validate();
    SampleReport rep;
    std::vector<double> radii;
    for (double r = 0.5; r >= cfg.min_ball_radius * (1 - 1e-12); r /= 2.5)
        radii.push_back(r);
    radii.push_back(cfg.min_ball_radius);

    auto run_target = [&](const std::string& name, double r0, double z0) {
        StratumEntry e;
        e.stratum = name;
        e.witnesses_found = true;
        for (double ball : radii) {
            auto found = search_witnesses_around(r0, z0, ball, cfg);
            if (!found) {
                e.witnesses_found = false;
                e.verdict = "witness not found at ball radius " + format_double(ball);
                break;
            }
            e.witnesses.push_back(found->first);
            e.witnesses.push_back(found->second);
        }
        if (e.witnesses_found) e.verdict = "pathology witnesses at every ball radius";
        rep.strata.push_back(std::move(e));
    };

    run_target("axis z=0", 0.0, 0.0);
    run_target("axis z=0.5", 0.0, 0.5);
    for (int n = 1; n <= cfg.n_max; ++n)
        run_target("cylinder C" + std::to_string(n), 1.0 / (2.0 * n), 0.0);

    bool all = true;
    for (const auto& e : rep.strata) all &= e.witnesses_found;
    rep.overall = all ? "pathology confirmed at every target" : "witness search incomplete";
    return rep;
}

/// Pointwise identification on the grid: F(v) equals F(-v) or its
/// reflection, branch decided by the sign of g.  Returns the worst residual.
inline double pointwise_identity_residual(const SchwarzConfig& cfg) {
    double worst = 0.0;
    const int nx = static_cast<int>(std::llround(cfg.r_max / cfg.grid_step));
    const int nz = static_cast<int>(std::llround(cfg.z_max / cfg.grid_step));
    for (int i = -nx; i <= nx; ++i)
        for (int j = -nx; j <= nx; ++j) {
            double x = i * cfg.grid_step, y = j * cfg.grid_step;
            double r = std::hypot(x, y);
            if (r > cfg.r_max) continue;
            double g = g_eval(r);
            // the planar coordinate is z-independent; scan z for the z-identity
            Vec2 v0 = F_eval(x, y, 0.0), vm0 = F_eval(-x, -y, 0.0);
            double res = (g > 0) ? std::abs(v0.x + vm0.x) : std::abs(v0.x - vm0.x);
            worst = std::max(worst, res);
            for (int k = -nz; k <= nz; ++k) {
                double z = k * cfg.grid_step;
                Vec2 v = F_eval(x, y, z), vm = F_eval(-x, -y, z);
                worst = std::max(worst, std::abs(v.z - vm.z));
                double planar = (g > 0) ? std::abs(v.x + vm.x) : std::abs(v.x - vm.x);
                worst = std::max(worst, planar);
            }
        }
    return worst;
}

inline std::string report_csv(const SampleReport& rep) {
    std::ostringstream os;
    os << "stratum,x,y,z,Fx,Fz,witness_type\n";
    for (const auto& e : rep.strata) {
        if (e.witnesses.empty()) {
            for (const auto& v : e.image_sample) {
                os << e.stratum << ",,,," << format_double(v.x) << "," << format_double(v.z)
                   << ",\n";
            }
        }
        for (const auto& w : e.witnesses) {
            Vec2 v = F_eval(w.x, w.y, w.z);
            os << e.stratum << "," << format_double(w.x) << "," << format_double(w.y) << ","
               << format_double(w.z) << "," << format_double(v.x) << "," << format_double(v.z)
               << "," << w.type << "\n";
        }
    }
    return os.str();
}

}  // namespace fintop::schwarz
