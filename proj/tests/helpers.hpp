#ifndef BIHOM_TESTS_HELPERS_HPP
#define BIHOM_TESTS_HELPERS_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "bihom/io.hpp"
#include "bihom/rational.hpp"
#include "bihom/subspace.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name)
{
    return std::string(BIHOM_FIXTURES_DIR) + "/" + name;
}

inline bihom::SuperAlgebra load_fixture(const std::string& name)
{
    return bihom::load_algebra(fixture_path(name));
}

/// Vector literal from scalar texts: qv({"1", "-2/3", "0"}).
inline bihom::Vec qv(std::initializer_list<const char*> items)
{
    bihom::Vec v;
    v.reserve(items.size());
    for (const char* s : items)
        v.push_back(bihom::parse_rational_or_throw(s, "test literal"));
    return v;
}

inline bihom::Rat q(const char* s) { return bihom::parse_rational_or_throw(s, "test literal"); }

inline bihom::Subspace span_of(std::size_t ambient,
                               std::initializer_list<std::initializer_list<const char*>> rows)
{
    std::vector<bihom::Vec> gens;
    for (const auto& row : rows)
        gens.push_back(qv(row));
    return bihom::Subspace::span(ambient, std::move(gens));
}

}  // namespace testutil

#endif
