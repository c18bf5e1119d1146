#pragma once

#include <median/sequence.hpp>

#include <optional>
#include <string>
#include <vector>

namespace testing {

inline median::AlgebraPtr alg(const std::vector<std::string> & pts)
{
    const std::size_t dim = pts.empty() ? 0 : pts.front().size();
    return median::share(median::MedianAlgebra::validate(pts, dim));
}

inline median::Subset subset(const median::MedianAlgebra & m, const std::vector<std::string> & pts)
{
    median::Subset s(m.size());
    for (auto & p : pts)
        s.set(m.index_of(median::Point::from_string(p)));
    return s;
}

/// Median algebras up to isomorphism, cached per bound.
inline const std::vector<median::AlgebraPtr> & catalog(std::size_t max_points)
{
    static std::vector<std::vector<median::AlgebraPtr>> cache(16);
    auto & slot = cache.at(max_points);
    if (slot.empty())
        slot = median::small_median_algebras(max_points);
    return slot;
}

/// The error code thrown by f, if any.
template <typename F>
std::optional<median::Errc> error_of(F && f)
{
    try {
        f();
    }
    catch (const median::Error & e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace testing
