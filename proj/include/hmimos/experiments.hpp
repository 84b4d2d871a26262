// SPDX-License-Identifier: Apache-2.0
//
// hmimos: near-field tri-polarized holographic MIMO surface simulator
// Copyright (C) 2026 The hmimos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Pipelines behind the command-line runner and the figure presets. Each
// returns its CSV tables in memory; the caller decides where they go.

#include "config.hpp"
#include "correlation.hpp"
#include "csv.hpp"
#include "metrics.hpp"

#include <string>
#include <vector>

namespace hmimos
{

using table_list = std::vector<csv_table>;

inline std::string config_comment(const flat_config &c) { return "config: " + c.resolved(); }

// ---- shared building blocks ---------------------------------------------------

// Scales H so that ||H||_F^2 = 3 Nr, the reference level for SNR sweeps.
inline void normalize_for_se(polarized_channel &H)
{
    const double f = H.stacked().norm();
    if (f > 0.0)
        H.scale(std::sqrt(3.0 * double(H.rx_count())) / f);
}

struct se_point
{
    scheme kind;
    pa_scheme pa;
    double snr_db;
    double se;
    power_allocation alloc;
};

inline precoder_set build_precoder(const polarized_channel &H, scheme s, const std::vector<double> &distance, double tol)
{
    if (s == scheme::two_layer)
        return two_layer_precoder(H, tol);
    return user_cluster_precoder(H, cluster_users(distance), tol);
}

// Grid order: scheme, then allocation, then SNR.
inline std::vector<se_point> se_sweep(const std::vector<precoder_set> &sets, const std::vector<pa_scheme> &pas,
                                      const std::vector<double> &snr_db, double budget,
                                      second_layer_mode mode = second_layer_mode::pooled)
{
    std::vector<se_point> out;
    for (const auto &s : sets)
        for (auto pa : pas)
            for (double snr : snr_db)
                out.push_back({s.kind, pa, snr, 0.0, {}});
    const size_t per_set = pas.size() * snr_db.size();
    parallel_for(long(out.size()), [&](long i) {
        se_point &p = out[size_t(i)];
        const precoder_set &s = sets[size_t(i) / per_set];
        const stream_gains g = s.gains();
        const double noise = noise_for_snr(p.snr_db, budget);
        p.alloc = allocate(p.pa, g, budget, noise, mode);
        p.se = total_se(g, p.alloc, noise);
    });
    return out;
}

inline std::vector<double> user_distances(const scenario &sc)
{
    std::vector<double> d;
    for (const auto &u : sc.users)
        d.push_back(u.distance);
    return d;
}

// ---- subcommand pipelines -----------------------------------------------------

inline table_list run_channel(const flat_config &c)
{
    const scenario sc = scenario_from_config(c);
    const double factor = c.real("geometry.patch_factor", 10.0);
    const polarized_channel H = assemble_channel(sc);
    const near_field_report nf = validate_near_field(sc, factor);

    table_list out;
    csv_table ch("channel.csv", config_comment(c), {"p", "q", "m", "n", "re", "im"});
    const index_t nr = H.rx_count(), ns = H.tx_count();
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (index_t m = 0; m < nr; ++m)
                for (index_t n = 0; n < ns; ++n)
                {
                    const cplx v = H.stacked()(p * nr + m, q * ns + n);
                    ch.row({pol_name(p), pol_name(q), long(m), long(n), v.real(), v.imag()});
                }
    out.push_back(std::move(ch));

    csv_table t("nearfield.csv", config_comment(c),
                {"user", "distance", "nf_bound", "in_near_field", "patch_limit", "patch_ok"});
    for (size_t k = 0; k < sc.users.size(); ++k)
        t.row({long(k + 1), sc.users[k].distance, nf.user_bound[k], long(nf.in_near_field[k]), nf.patch_limit,
               long(nf.patch_ok)});
    out.push_back(std::move(t));
    return out;
}

inline int pol_from_string(const std::string &s)
{
    if (s == "x")
        return px;
    if (s == "y")
        return py;
    if (s == "z")
        return pz;
    throw config_error("unknown polarization '" + s + "'");
}

inline table_list run_correlation(const flat_config &c)
{
    const scenario sc = scenario_from_config(c);
    const double z = c.real("correlation.z", sc.users[0].distance);
    const auto pols = split(c.str("correlation.polarizations", "x,y,z"), ',');
    std::vector<int> ps;
    for (const auto &p : pols)
        ps.push_back(pol_from_string(p));
    const auto centers = patch_centers(sc.tx);

    csv_table t("correlation.csv", config_comment(c), {"pol", "n", "l", "raw", "normalized"});
    for (int p : ps)
    {
        const correlation_matrix R = transmit_correlation(centers, z, sc.wavenumber(), p);
        const rmat N = R.normalized();
        for (index_t i = 0; i < R.raw.rows(); ++i)
            for (index_t j = 0; j < R.raw.cols(); ++j)
                t.row({pol_name(p), long(i + 1), long(j + 1), R.raw(i, j), N(i, j)});
    }
    return {t};
}

inline table_list run_dof(const flat_config &c)
{
    const scenario sc = scenario_from_config(c);
    const std::string mode_s = c.str("dof.mode", "transmit");
    const dof_mode mode = dof_mode_from_string(mode_s);
    csv_table t("dof.csv", config_comment(c), {"user", "z", "patches", "mode", "dof"});
    if (mode == dof_mode::transmit)
    {
        for (size_t k = 0; k < sc.users.size(); ++k)
            t.row({long(k + 1), sc.users[k].distance, long(sc.tx_count()), mode_s,
                   dof(transmit_correlation(sc.tx, sc.users[k].distance, sc.wavenumber(), px))});
    }
    else
    {
        const polarized_channel H = assemble_channel(sc);
        for (size_t k = 0; k < sc.users.size(); ++k)
            t.row({long(k + 1), sc.users[k].distance, long(sc.tx_count()), mode_s, channel_dof(H.user(k))});
    }
    return {t};
}

inline table_list run_capacity(const flat_config &c)
{
    const scenario sc = scenario_from_config(c);
    const std::string id = c.str("scenario.name", "scenario");
    const auto snr = parse_sweep(c.str("sweep.snr", "-10:2:20"));
    const polarized_channel H = assemble_channel(sc);
    csv_table t("capacity.csv", config_comment(c), {"scenario", "scheme", "snr_db", "metric", "value"});
    for (auto f : {pol_family::tri, pol_family::dual, pol_family::single})
        for (double s : snr)
            t.row({id, to_string(f), s, std::string("capacity"), family_capacity(H, f, db_to_linear(s))});
    return {t};
}

inline void append_matrix(csv_table &t, const std::string &name, const cmat &M)
{
    for (index_t i = 0; i < M.rows(); ++i)
        for (index_t j = 0; j < M.cols(); ++j)
            t.row({name, long(i), long(j), M(i, j).real(), M(i, j).imag()});
}

inline table_list run_precode_sweep(const flat_config &c)
{
    const scenario sc = scenario_from_config(c);
    const std::string id = c.str("scenario.name", "scenario");
    const auto snr = parse_sweep(c.str("sweep.snr", "-10:2:20"));
    std::vector<scheme> schemes;
    for (const auto &s : split(c.str("sweep.schemes", "uc,two-layer"), ','))
        schemes.push_back(scheme_from_string(s));
    std::vector<pa_scheme> pas;
    for (const auto &s : split(c.str("sweep.pa", "pa1,pa2,pa3"), ','))
        pas.push_back(pa_from_string(s));
    const double tol = c.real("precoder.tol", default_tol);
    const auto mode = second_layer_from_string(c.str("power.second_layer", "pooled"));
    const bool normalize = c.flag("power.normalize_channel", true);
    const bool export_precoders = c.flag("output.precoders", false);
    if (schemes.empty() || pas.empty() || snr.empty())
        throw config_error("sweep grid is empty");

    polarized_channel H = assemble_channel(sc);
    if (normalize)
        normalize_for_se(H);

    const auto dist = user_distances(sc);
    std::vector<precoder_set> sets;
    for (auto s : schemes)
        sets.push_back(build_precoder(H, s, dist, tol));
    const auto pts = se_sweep(sets, pas, snr, sc.total_power, mode);

    table_list out;
    csv_table se("se.csv", config_comment(c), {"scenario", "scheme", "pa", "snr_db", "metric", "value"});
    for (const auto &p : pts)
        se.row({id, to_string(p.kind), to_string(p.pa), p.snr_db, std::string("se"), p.se});
    out.push_back(std::move(se));

    csv_table al("allocation.csv", config_comment(c),
                 {"scheme", "pa", "snr_db", "pol", "user", "stream", "polarization_power", "stream_share"});
    for (size_t i = 0; i < pts.size(); ++i)
    {
        const auto &p = pts[i];
        const precoder_set &s = sets[i / (pas.size() * snr.size())];
        for (int q = 0; q < 3; ++q)
            for (size_t k = 0; k < s.served[size_t(q)].size(); ++k)
                for (index_t j = 0; j < p.alloc.stream_share[size_t(q)][k].size(); ++j)
                    al.row({to_string(p.kind), to_string(p.pa), p.snr_db, pol_name(q),
                            long(s.served[size_t(q)][k] + 1), long(j + 1), p.alloc.polarization_power[size_t(q)],
                            p.alloc.stream_share[size_t(q)][k](j)});
    }
    out.push_back(std::move(al));

    csv_table st("streams.csv", config_comment(c), {"scheme", "pol", "user", "streams", "leakage", "cancellation"});
    for (const auto &s : sets)
    {
        const double canc = s.kind == scheme::two_layer ? cancellation_residual(H, s.layer1) : 0.0;
        for (int q = 0; q < 3; ++q)
        {
            const double leak = bd_leakage(s.layer2[size_t(q)]);
            for (size_t k = 0; k < s.served[size_t(q)].size(); ++k)
                st.row({to_string(s.kind), pol_name(q), long(s.served[size_t(q)][k] + 1),
                        long(s.layer2[size_t(q)].user[k].F.cols()), leak, canc});
        }
    }
    out.push_back(std::move(st));

    if (export_precoders)
    {
        csv_table pr("precoders.csv", config_comment(c), {"matrix", "row", "col", "re", "im"});
        for (const auto &s : sets)
        {
            const std::string tag = to_string(s.kind);
            if (s.kind == scheme::two_layer)
                for (int q = 0; q < 3; ++q)
                    append_matrix(pr, tag + ":P_" + pol_name(q), s.layer1.P[size_t(q)]);
            for (int q = 0; q < 3; ++q)
                append_matrix(pr, tag + ":F_" + pol_name(q) + pol_name(q), s.layer2[size_t(q)].stacked_F());
        }
        out.push_back(std::move(pr));
    }
    return out;
}

// ---- figure presets -----------------------------------------------------------

inline const std::vector<std::string> &preset_names()
{
    static const std::vector<std::string> n = {"fig4", "fig5", "fig6",  "fig7",  "fig8",
                                               "fig9", "fig10", "fig11", "fig12", "fig13"};
    return n;
}

// Multi-user link used by the spectral-efficiency figures: 15x15 transmitter,
// K users on the boresight axis, Nr total receive patches split evenly.
inline scenario precoding_scenario(const std::vector<double> &z, int rx_nx, int rx_ny, double spacing = 0.4)
{
    scenario sc;
    sc.tx = grid_surface(15, 15, spacing, spacing);
    for (double d : z)
    {
        user_spec u;
        u.surface = grid_surface(rx_nx, rx_ny, spacing, spacing, vec3::Zero(), surface_role::receive);
        u.distance = d;
        sc.users.push_back(u);
    }
    return sc;
}

// One row of patches along x; correlation of patch 1 with every patch.
inline void correlation_rows(csv_table &t, int n, double spacing, double z, int p, double k0)
{
    const auto centers = patch_centers(grid_surface(n, 1, spacing, spacing));
    const correlation_matrix R = transmit_correlation(centers, z, k0, p);
    for (index_t l = 0; l < R.raw.cols(); ++l)
        t.row({spacing, z, pol_name(p), long(l + 1), double(l) * spacing, R.raw(0, l), R.raw(0, l) / R.diagonal()});
}

inline table_list preset_correlation(const std::string &name, const std::vector<double> &spacing,
                                     const std::vector<double> &z, const std::vector<int> &pols)
{
    flat_config c;
    c.set("preset", name);
    c.set("scenario.wavelength", 1.0);
    c.set("tx.nx", "50");
    c.set("tx.ny", "1");
    std::string s, zz, pp;
    for (double v : spacing)
        s += (s.empty() ? "" : ",") + format_shortest(v);
    for (double v : z)
        zz += (zz.empty() ? "" : ",") + format_shortest(v);
    for (int p : pols)
        pp += (pp.empty() ? "" : ",") + std::string(pol_name(p));
    c.set("tx.spacing", s);
    c.set("correlation.z", zz);
    c.set("correlation.polarizations", pp);
    csv_table t(name + "_correlation.csv", config_comment(c),
                {"spacing", "z", "pol", "l", "distance", "raw", "normalized"});
    for (int p : pols)
        for (double d : spacing)
            for (double h : z)
                correlation_rows(t, 50, d, h, p, 2.0 * pi);
    return {t};
}

inline table_list preset_eigen(const std::string &name, double z)
{
    flat_config c;
    c.set("preset", name);
    c.set("scenario.wavelength", 1.0);
    c.set("tx.nx", "15");
    c.set("tx.ny", "15");
    c.set("rx.nx", "15");
    c.set("rx.ny", "15");
    c.set("tx.dx", 0.4);
    c.set("user1.z", z);
    c.set("metrics.significance", 0.01);
    scenario sc;
    sc.tx = grid_surface(15, 15, 0.4, 0.4);
    user_spec u;
    u.surface = grid_surface(15, 15, 0.4, 0.4, vec3::Zero(), surface_role::receive);
    u.distance = z;
    sc.users.push_back(u);
    const polarized_channel H = assemble_channel(sc);

    std::vector<rvec> spec(9);
    parallel_for(9, [&](long b) { spec[size_t(b)] = eigen_spectrum(H.block(int(b) / 3, int(b) % 3)); });

    csv_table t(name + "_eigen.csv", config_comment(c), {"block", "index", "eigenvalue"});
    csv_table s(name + "_summary.csv", config_comment(c), {"block", "significant", "energy"});
    for (int b = 0; b < 9; ++b)
    {
        const std::string label = std::string(pol_name(b / 3)) + pol_name(b % 3);
        for (index_t i = 0; i < spec[size_t(b)].size(); ++i)
            t.row({label, long(i + 1), spec[size_t(b)](i)});
        s.row({label, long(significant_count(spec[size_t(b)])), spec[size_t(b)].sum()});
    }
    return {t, s};
}

inline scenario capacity_scenario(double z)
{
    scenario sc;
    sc.tx = grid_surface(6, 6, 0.4, 0.4);
    user_spec u;
    u.surface = grid_surface(3, 3, 0.4, 0.4, vec3::Zero(), surface_role::receive);
    u.distance = z;
    sc.users.push_back(u);
    return sc;
}

inline table_list preset_fig9()
{
    flat_config c;
    c.set("preset", "fig9");
    c.set("tx.nx", "6");
    c.set("rx.nx", "3");
    c.set("tx.dx", 0.4);
    c.set("user1.z", 0.5);
    c.set("sweep.snr", "-10:2:20");
    c.set("sweep.z", "0.5:0.5:4");
    c.set("distance_sweep.snr_db", 10.0);

    const auto snr = parse_sweep("-10:2:20");
    const auto zs = parse_sweep("0.5:0.5:4");
    const polarized_channel H = assemble_channel(capacity_scenario(0.5));
    csv_table a("fig9_capacity_snr.csv", config_comment(c), {"scenario", "scheme", "snr_db", "metric", "value"});
    for (auto f : {pol_family::tri, pol_family::dual, pol_family::single})
        for (double s : snr)
            a.row({std::string("fig9a"), to_string(f), s, std::string("capacity"), family_capacity(H, f, db_to_linear(s))});

    std::vector<std::array<double, 3>> cap(zs.size());
    parallel_for(long(zs.size()), [&](long i) {
        const polarized_channel Hz = assemble_channel(capacity_scenario(zs[size_t(i)]));
        cap[size_t(i)] = {family_capacity(Hz, pol_family::tri, 10.0), family_capacity(Hz, pol_family::dual, 10.0),
                          family_capacity(Hz, pol_family::single, 10.0)};
    });
    csv_table b("fig9_capacity_distance.csv", config_comment(c), {"scheme", "z", "capacity"});
    const pol_family fam[3] = {pol_family::tri, pol_family::dual, pol_family::single};
    for (int f = 0; f < 3; ++f)
        for (size_t i = 0; i < zs.size(); ++i)
            b.row({to_string(fam[f]), zs[i], cap[i][size_t(f)]});
    return {a, b};
}

inline table_list preset_fig10()
{
    flat_config c;
    c.set("preset", "fig10");
    c.set("tx.aperture", "10x10");
    c.set("sweep.patches", "100:100:600");
    c.set("sweep.z", "5,7,9");
    c.set("dof.mode", "transmit");
    csv_table t("fig10_dof.csv", config_comment(c), {"z", "patches", "nx", "ny", "mode", "dof"});
    for (double z : {5.0, 7.0, 9.0})
        for (int n = 100; n <= 600; n += 100)
        {
            const surface_spec s = fill_aperture(n, 10.0, 10.0);
            t.row({z, long(n), long(s.nx), long(s.ny), std::string("transmit"),
                   link_dof(s, z, 1.0, dof_mode::transmit)});
        }
    return {t};
}

// Fixed-area shape study. Grid shapes keep an n x n count and stretch the
// spacing to the aperture; the circle keeps the N lattice points nearest its
// center at spacing sqrt(area / N).
inline surface_spec shape_surface(const std::string &shape, int n, double area)
{
    if (shape == "circle")
    {
        surface_spec s;
        s.shape = layout::circle;
        s.count = n * n;
        s.dx = s.dy = std::sqrt(area / double(n * n));
        return s;
    }
    const double side = std::sqrt(area);
    double lx = side, ly = side;
    if (shape == "rect16x4")
    {
        lx = 16.0;
        ly = area / lx;
    }
    else if (shape == "rect32x2")
    {
        lx = 32.0;
        ly = area / lx;
    }
    else if (shape != "square")
        throw config_error("unknown shape '" + shape + "'");
    return grid_surface(n, n, lx / n, ly / n);
}

inline table_list preset_fig11()
{
    flat_config c;
    c.set("preset", "fig11");
    c.set("tx.area", 64.0);
    c.set("user1.z", 5.0);
    c.set("sweep.side", "4:2:16");
    c.set("dof.mode", "transmit");
    csv_table t("fig11_dof.csv", config_comment(c), {"shape", "patches", "dx", "dy", "dof"});
    for (const char *shape : {"square", "rect16x4", "rect32x2", "circle"})
        for (int n = 4; n <= 16; n += 2)
        {
            const surface_spec s = shape_surface(shape, n, 64.0);
            t.row({std::string(shape), long(n * n), s.dx, s.dy, link_dof(s, 5.0, 1.0, dof_mode::transmit)});
        }
    return {t};
}

inline table_list preset_se(const std::string &name, const std::vector<double> &z, int rx_nx, int rx_ny)
{
    flat_config c;
    c.set("preset", name);
    c.set("tx.nx", "15");
    c.set("tx.dx", 0.4);
    c.set("rx.nx", std::to_string(rx_nx));
    c.set("rx.ny", std::to_string(rx_ny));
    c.set("scenario.users", std::to_string(z.size()));
    for (size_t k = 0; k < z.size(); ++k)
        c.set("user" + std::to_string(k + 1) + ".z", z[k]);
    c.set("sweep.snr", "-10:2:20");
    c.set("sweep.schemes", "uc,two-layer");
    c.set("sweep.pa", "pa1,pa2,pa3");
    c.set("power.second_layer", "pooled");
    c.set("power.normalize_channel", "true");
    c.set("precoder.tol", default_tol);

    polarized_channel H = assemble_channel(precoding_scenario(z, rx_nx, rx_ny));
    normalize_for_se(H);
    std::vector<precoder_set> sets = {build_precoder(H, scheme::user_cluster, z, default_tol),
                                      build_precoder(H, scheme::two_layer, z, default_tol)};
    const auto pts = se_sweep(sets, {pa_scheme::pa1, pa_scheme::pa2, pa_scheme::pa3}, parse_sweep("-10:2:20"), 1.0);
    csv_table t(name + "_se.csv", config_comment(c), {"scenario", "scheme", "pa", "snr_db", "metric", "value"});
    for (const auto &p : pts)
        t.row({name, to_string(p.kind), to_string(p.pa), p.snr_db, std::string("se"), p.se});
    return {t};
}

inline table_list run_preset(const std::string &name)
{
    if (name == "fig4")
        return preset_correlation(name, {0.05, 0.2, 0.4}, {0.3}, {px});
    if (name == "fig5")
        return preset_correlation(name, {0.1}, {0.2, 0.4, 0.8}, {px});
    if (name == "fig6")
        return preset_correlation(name, {0.4}, {0.1, 0.2, 0.4}, {px, py, pz});
    if (name == "fig7")
        return preset_eigen(name, 1.0);
    if (name == "fig8")
        return preset_eigen(name, 3.0);
    if (name == "fig9")
        return preset_fig9();
    if (name == "fig10")
        return preset_fig10();
    if (name == "fig11")
        return preset_fig11();
    if (name == "fig12")
        return preset_se(name, {1.0, 3.0, 5.0}, 4, 3);
    if (name == "fig13")
        return preset_se(name, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, 3, 2);
    throw config_error("unknown preset '" + name + "'");
}

} // namespace hmimos
