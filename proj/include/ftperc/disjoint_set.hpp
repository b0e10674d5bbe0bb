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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace ftperc {

/// Disjoint-set forest over 0..n-1 with union by size and path halving.
template <typename Index = std::uint32_t>
class DisjointSet {
   public:
    explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }

    void reset() {
        std::iota(parent_.begin(), parent_.end(), Index{0});
        std::fill(size_.begin(), size_.end(), Index{1});
    }

    Index find(Index x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true if x and y were in different sets.
    bool unite(Index x, Index y) {
        x = find(x);
        y = find(y);
        if (x == y) {
            return false;
        }
        if (size_[x] < size_[y]) {
            std::swap(x, y);
        }
        parent_[y] = x;
        size_[x] += size_[y];
        return true;
    }

    Index set_size(Index x) {
        return size_[find(x)];
    }

    std::size_t size() const {
        return parent_.size();
    }

   private:
    std::vector<Index> parent_;
    std::vector<Index> size_;
};

}  // namespace ftperc
