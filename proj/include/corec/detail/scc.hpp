#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace corec::detail {

struct SccResult {
    /// component index per node; components are numbered in reverse
    /// topological order (a component only points to smaller indices).
    std::vector<std::size_t> component;
    std::vector<std::size_t> component_size;
    /// true iff the component contains a cycle (size > 1 or a self-loop)
    std::vector<bool> cyclic;
};

/// Tarjan's algorithm over an adjacency list.
class Tarjan {
public:
    explicit Tarjan(std::span<const std::vector<std::size_t>> adj)
        : adj_(adj), index_(adj.size(), unvisited), low_(adj.size(), 0), on_stack_(adj.size(), false)
    {
        result_.component.assign(adj.size(), 0);
    }

    SccResult run()
    {
        for (std::size_t v = 0; v < adj_.size(); ++v)
            if (index_[v] == unvisited)
                visit(v);
        result_.cyclic.assign(result_.component_size.size(), false);
        for (std::size_t v = 0; v < adj_.size(); ++v) {
            auto c = result_.component[v];
            if (result_.component_size[c] > 1 ||
                std::find(adj_[v].begin(), adj_[v].end(), v) != adj_[v].end())
                result_.cyclic[c] = true;
        }
        return std::move(result_);
    }

private:
    static constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();

    void visit(std::size_t v)
    {
        index_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        on_stack_[v] = true;
        for (auto w : adj_[v]) {
            if (index_[w] == unvisited) {
                visit(w);
                low_[v] = std::min(low_[v], low_[w]);
            } else if (on_stack_[w]) {
                low_[v] = std::min(low_[v], index_[w]);
            }
        }
        if (low_[v] == index_[v]) {
            auto c = result_.component_size.size();
            std::size_t size = 0;
            std::size_t w;
            do {
                w = stack_.back();
                stack_.pop_back();
                on_stack_[w] = false;
                result_.component[w] = c;
                ++size;
            } while (w != v);
            result_.component_size.push_back(size);
        }
    }

    std::span<const std::vector<std::size_t>> adj_;
    std::vector<std::size_t> index_;
    std::vector<std::size_t> low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> stack_;
    std::size_t counter_ = 0;
    SccResult result_;
};

inline SccResult strongly_connected_components(std::span<const std::vector<std::size_t>> adj)
{
    return Tarjan(adj).run();
}

} // namespace corec::detail
