/**
 * Exact rational arithmetic, homogeneous integer coordinates, and Farey
 * mediants. Everything downstream builds on these types; no operation here
 * (or anywhere else in the library) ever rounds.
 */

#ifndef MVCHI_NUMERIC_HPP
#define MVCHI_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mvchi/errors.hpp"

namespace mvchi {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline int sign_of(const Int& x) { return x.sign(); }
inline int sign_of(const Rat& q) { return rat_num(q).sign(); }

/// Parse "a" or "a/b" (decimal, optional leading '-') into an exact rational.
/// Rejects everything else, decimals in particular.
Rat parse_fraction(const std::string& text);

/**
 * A rational point of the unit cube in primitive integer homogeneous
 * coordinates: the point is coords/den with den > 0 and
 * gcd(coords_1, ..., coords_d, den) = 1. den is the least common denominator
 * of the point's rational coordinates.
 *
 * Canonical order (used everywhere a deterministic choice is needed):
 * lexicographic on (den, coords).
 */
struct HomogeneousPoint {
    std::vector<Int> coords;
    Int den;

    std::size_t dim() const { return coords.size(); }
};

int compare(const HomogeneousPoint& a, const HomogeneousPoint& b);

inline bool operator==(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    return compare(a, b) == 0;
}
inline bool operator!=(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    return compare(a, b) != 0;
}
inline bool operator<(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    return compare(a, b) < 0;
}
inline bool operator>(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    return compare(a, b) > 0;
}

/**
 * Homogeneous correspondent of a rational point of the cube.
 *
 * Throws DomainError if a coordinate lies outside [0,1]. The result is
 * primitive and dehomogenize() inverts it exactly.
 */
HomogeneousPoint to_homogeneous(const std::vector<Rat>& p);

/// Exact inverse of to_homogeneous.
std::vector<Rat> dehomogenize(const HomogeneousPoint& v);

/**
 * Farey mediant of two distinct points: componentwise sum of the homogeneous
 * vectors (coordinates and denominator), reduced to primitive form. For the
 * endpoints of a regular 1-simplex no reduction occurs and
 * den(mediant) = den(v) + den(w).
 *
 * Throws DomainError on v == w (degenerate edge) or mismatched dimension.
 */
HomogeneousPoint farey_mediant(const HomogeneousPoint& v, const HomogeneousPoint& w);

/// JSON encoding {"num": [..decimal strings..], "den": "decimal string"}.
nlohmann::ordered_json point_to_json(const HomogeneousPoint& v);
HomogeneousPoint point_from_json(const nlohmann::json& j);

} // namespace mvchi

#endif // MVCHI_NUMERIC_HPP
