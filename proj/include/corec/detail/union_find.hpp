#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace corec::detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t add()
    {
        parent_.push_back(parent_.size());
        rank_.push_back(0);
        return parent_.size() - 1;
    }

    [[nodiscard]] std::size_t size() const noexcept { return parent_.size(); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true iff the two classes were distinct.
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

} // namespace corec::detail
