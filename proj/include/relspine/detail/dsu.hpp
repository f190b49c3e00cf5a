#pragma once

#include <numeric>
#include <vector>

namespace relspine::detail {

class Dsu {
public:
    explicit Dsu(int n) : parent_(static_cast<std::size_t>(n)), components_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x)
    {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }

    /// False when a and b were already joined.
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[static_cast<std::size_t>(b)] = a;
        --components_;
        return true;
    }

    int components() const { return components_; }

private:
    std::vector<int> parent_;
    int components_;
};

}  // namespace relspine::detail
