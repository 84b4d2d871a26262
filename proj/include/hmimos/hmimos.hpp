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
#include "parallel.hpp"
#include "geometry.hpp"
#include "polarization.hpp"
#include "green_channel.hpp"
#include "correlation.hpp"
#include "precoding.hpp"
#include "power.hpp"
#include "metrics.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "experiments.hpp"
