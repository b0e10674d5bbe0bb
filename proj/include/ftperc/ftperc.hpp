// Copyright 2026 The ftperc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ftperc/circuit.hpp"
#include "ftperc/concat.hpp"
#include "ftperc/disjoint_set.hpp"
#include "ftperc/errors.hpp"
#include "ftperc/interaction_graph.hpp"
#include "ftperc/io.hpp"
#include "ftperc/parallel.hpp"
#include "ftperc/percolation.hpp"
#include "ftperc/rg_map.hpp"
#include "ftperc/rng.hpp"
