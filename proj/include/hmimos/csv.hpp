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

#include "numerics.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace hmimos
{

inline std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// In-memory CSV: one '#' comment line, a header, then rows.
class csv_table
{
  public:
    using cell = std::variant<std::string, double, long>;

    csv_table(std::string name, const std::string &comment, std::vector<std::string> header)
        : name_(std::move(name)), columns_(header.size())
    {
        text_ = "# " + comment + "\n";
        for (size_t i = 0; i < header.size(); ++i)
            text_ += (i ? "," : "") + header[i];
        text_ += "\n";
    }

    void row(std::initializer_list<cell> cells)
    {
        if (cells.size() != columns_)
            throw dimension_error("csv row for " + name_ + " has the wrong number of cells");
        bool first = true;
        for (const auto &c : cells)
        {
            if (!first)
                text_ += ",";
            first = false;
            if (auto s = std::get_if<std::string>(&c))
                text_ += *s;
            else if (auto d = std::get_if<double>(&c))
                text_ += format_real(*d);
            else
                text_ += std::to_string(std::get<long>(c));
        }
        text_ += "\n";
        ++rows_;
    }

    const std::string &name() const { return name_; }
    const std::string &text() const { return text_; }
    size_t rows() const { return rows_; }

    void write(const std::string &dir) const
    {
        const std::string path = dir + "/" + name_;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw error("cannot write " + path);
        f << text_;
    }

  private:
    std::string name_;
    size_t columns_;
    std::string text_;
    size_t rows_ = 0;
};

} // namespace hmimos
