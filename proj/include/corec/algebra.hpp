#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corec/core.hpp"
#include "corec/error.hpp"

namespace corec {

/// Assignment of names (variables or parameters) to carrier indices.
using Valuation = std::map<std::string, std::size_t>;

/// A Sigma-algebra on a finite carrier.  The table of an n-ary symbol is
/// indexed by its arguments read as a base-|A| number, first argument most
/// significant.
class FiniteAlgebra {
public:
    FiniteAlgebra() = default;

    FiniteAlgebra(Signature sig, std::vector<std::string> carrier, std::vector<std::vector<std::size_t>> tables)
        : sig_(std::move(sig)), carrier_(std::move(carrier)), tables_(std::move(tables))
    {
        validate_signature(sig_);
        if (tables_.size() != sig_.size())
            throw error(errc::incomplete_table, "one table per symbol required");
        for (std::size_t i = 0; i < carrier_.size(); ++i)
            if (!index_.try_emplace(carrier_[i], i).second)
                throw error(errc::parse_error, "carrier element '" + carrier_[i] + "' listed twice");
        for (std::size_t s = 0; s < sig_.size(); ++s) {
            auto rows = saturating_pow(carrier_.size(), sig_[s].arity);
            if (tables_[s].size() != rows)
                throw error(errc::incomplete_table, "table of " + sig_[s].name + " needs " + std::to_string(rows) +
                                                        " rows");
            for (auto v : tables_[s])
                if (v >= carrier_.size())
                    throw error(errc::parse_error, "table of " + sig_[s].name + " leaves the carrier");
        }
    }

    /// Builds the tables by evaluating op(symbol index, arguments).
    static FiniteAlgebra from_function(
        Signature sig, std::vector<std::string> carrier,
        const std::function<std::size_t(std::size_t, std::span<const std::size_t>)>& op)
    {
        std::vector<std::vector<std::size_t>> tables;
        for (std::size_t s = 0; s < sig.size(); ++s) {
            std::vector<std::size_t> args(sig[s].arity, 0);
            std::vector<std::size_t> table;
            do {
                table.push_back(op(s, args));
            } while (!carrier.empty() && next_tuple(args, carrier.size()));
            if (carrier.empty() && sig[s].arity > 0)
                table.clear();
            tables.push_back(std::move(table));
        }
        return {std::move(sig), std::move(carrier), std::move(tables)};
    }

    [[nodiscard]] const Signature& signature() const noexcept { return sig_; }
    [[nodiscard]] const std::vector<std::string>& carrier() const noexcept { return carrier_; }
    [[nodiscard]] std::size_t size() const noexcept { return carrier_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& table(std::size_t symbol) const { return tables_[symbol]; }

    [[nodiscard]] std::optional<std::size_t> element(std::string_view name) const
    {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::size_t apply(std::size_t symbol, std::span<const std::size_t> args) const
    {
        std::size_t row = 0;
        for (auto a : args)
            row = row * carrier_.size() + a;
        return tables_[symbol][row];
    }

    [[nodiscard]] std::size_t apply(std::size_t symbol, std::size_t arg) const { return tables_[symbol][arg]; }

private:
    Signature sig_;
    std::vector<std::string> carrier_;
    std::vector<std::vector<std::size_t>> tables_;
    std::map<std::string, std::size_t> index_;
};

/// Interprets every parameter of `params` as the carrier element of the same
/// name.
inline Valuation parameters_by_name(const FiniteAlgebra& a, std::span<const std::string> params)
{
    Valuation v;
    for (const auto& p : params) {
        auto e = a.element(p);
        if (!e)
            throw error(errc::undeclared_name, "parameter '" + p + "' is not a carrier element");
        v[p] = *e;
    }
    return v;
}

} // namespace corec
