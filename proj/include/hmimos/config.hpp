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

#include "geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hmimos
{

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

// Shortest text that reads back to the same double.
inline std::string format_shortest(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_real(const std::string &key, const std::string &v)
{
    try
    {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d))
            throw std::invalid_argument(v);
        return d;
    }
    catch (const std::exception &)
    {
        throw config_error("key '" + key + "': expected a number, got '" + v + "'");
    }
}

inline long parse_int(const std::string &key, const std::string &v)
{
    try
    {
        size_t used = 0;
        const long n = std::stol(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return n;
    }
    catch (const std::exception &)
    {
        throw config_error("key '" + key + "': expected an integer, got '" + v + "'");
    }
}

// start:step:stop in dB, inclusive of stop when it lands on the grid.
inline std::vector<double> parse_sweep(const std::string &spec)
{
    const auto parts = split(spec, ':');
    if (parts.size() == 1)
        return {parse_real("sweep", parts[0])};
    if (parts.size() != 3)
        throw config_error("sweep '" + spec + "' is not start:step:stop");
    const double a = parse_real("sweep", parts[0]), st = parse_real("sweep", parts[1]),
                 b = parse_real("sweep", parts[2]);
    if (st == 0.0 || (b - a) / st < -1e-12)
        throw config_error("sweep '" + spec + "' never reaches its stop value");
    const long n = long(std::floor((b - a) / st + 1e-9)) + 1;
    std::vector<double> v;
    for (long i = 0; i < n; ++i)
        v.push_back(a + double(i) * st);
    return v;
}

// Flat "section.key = value" text; '#' starts a comment.
class flat_config
{
  public:
    static flat_config parse(const std::string &text)
    {
        flat_config c;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.resize(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (key.empty())
                throw config_error("line " + std::to_string(lineno) + ": empty key");
            c.kv_[key] = val;
        }
        return c;
    }

    static flat_config load(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw config_error("cannot open scenario file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string &k) const { return kv_.count(k) != 0; }
    void set(const std::string &k, const std::string &v) { kv_[k] = v; }
    void set(const std::string &k, double v) { kv_[k] = format_shortest(v); }

    // Getters record the value they return, defaults included, so that
    // resolved() lists everything a run actually used.
    std::string str(const std::string &k, const std::string &def) const
    {
        auto it = kv_.find(k);
        const std::string v = it == kv_.end() ? def : it->second;
        used_[k] = v;
        return v;
    }
    std::string str(const std::string &k) const
    {
        auto it = kv_.find(k);
        if (it == kv_.end())
            throw config_error("missing key '" + k + "'");
        used_[k] = it->second;
        return it->second;
    }
    double real(const std::string &k, double def) const { return parse_real(k, str(k, format_shortest(def))); }
    double real(const std::string &k) const { return parse_real(k, str(k)); }
    long integer(const std::string &k, long def) const { return parse_int(k, str(k, std::to_string(def))); }
    bool flag(const std::string &k, bool def) const
    {
        const std::string v = str(k, def ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes")
            return true;
        if (v == "false" || v == "0" || v == "no")
            return false;
        throw config_error("key '" + k + "': expected true/false, got '" + v + "'");
    }

    const std::map<std::string, std::string> &entries() const { return kv_; }

    // Every key read so far plus every key present, sorted.
    std::string resolved() const
    {
        std::map<std::string, std::string> all = kv_;
        for (const auto &[k, v] : used_)
            all[k] = v;
        std::string s;
        for (const auto &[k, v] : all)
        {
            if (!s.empty())
                s += "; ";
            s += k + "=" + v;
        }
        return s;
    }

  private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> used_;
};

inline surface_spec surface_from_config(const flat_config &c, const std::string &sec, const surface_spec &def)
{
    surface_spec s = def;
    s.shape = layout_from_string(c.str(sec + ".layout", def.shape == layout::circle ? "circle" : "grid"));
    s.dx = c.real(sec + ".dx", def.dx);
    s.dy = c.real(sec + ".dy", s.dx);
    if (s.shape == layout::circle)
    {
        s.count = int(c.integer(sec + ".count", def.count));
        s.radius = c.real(sec + ".radius", def.radius);
    }
    else
    {
        s.nx = int(c.integer(sec + ".nx", def.nx));
        s.ny = int(c.integer(sec + ".ny", s.shape == layout::square ? s.nx : def.ny));
    }
    s.center = vec3(c.real(sec + ".x", def.center.x()), c.real(sec + ".y", def.center.y()),
                    c.real(sec + ".z", def.center.z()));
    return s;
}

// Keys: scenario.{wavelength,noise_power,total_power,users}, tx.*, rx.* (the
// default receive surface), userN.{z,x,y} plus optional userN.* surface
// overrides, N counted from 1.
inline scenario scenario_from_config(const flat_config &c)
{
    scenario sc;
    sc.wavelength = c.real("scenario.wavelength", 1.0);
    sc.noise_power = c.real("scenario.noise_power", 1.0);
    sc.total_power = c.real("scenario.total_power", 1.0);

    surface_spec tx_def;
    tx_def.nx = tx_def.ny = 4;
    tx_def.dx = tx_def.dy = 0.4 * sc.wavelength;
    sc.tx = surface_from_config(c, "tx", tx_def);
    sc.tx.role = surface_role::transmit;

    surface_spec rx_def;
    rx_def.nx = rx_def.ny = 2;
    rx_def.dx = rx_def.dy = 0.4 * sc.wavelength;
    rx_def.role = surface_role::receive;
    rx_def = surface_from_config(c, "rx", rx_def);
    rx_def.center = vec3::Zero();

    const long K = c.integer("scenario.users", 1);
    if (K < 1)
        throw config_error("scenario.users must be at least 1");
    for (long k = 1; k <= K; ++k)
    {
        const std::string sec = "user" + std::to_string(k);
        user_spec u;
        u.surface = surface_from_config(c, sec, rx_def);
        u.surface.center.z() = 0.0;
        u.surface.role = surface_role::receive;
        u.distance = c.real(sec + ".z");
        sc.users.push_back(u);
    }
    sc.validate();
    return sc;
}

} // namespace hmimos
