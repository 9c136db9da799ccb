#include "mvchi/numeric.hpp"

#include <boost/multiprecision/integer.hpp>

namespace mvchi {

namespace {

int compare_int(const Int& a, const Int& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

} // namespace

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

Rat parse_fraction(const std::string& raw) {
    std::string text = strip(raw);
    std::size_t slash = text.find('/');
    auto check_integer = [&](const std::string& s, const char* what) {
        if (s.empty())
            throw DomainError(std::string("empty ") + what + " in fraction '" + text + "'");
        std::size_t start = (s[0] == '-') ? 1 : 0;
        if (start == s.size())
            throw DomainError("malformed fraction '" + text + "'");
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw DomainError("invalid character '" + std::string(1, s[i]) +
                                  "' in fraction '" + text + "' (decimals are not accepted)");
    };
    if (slash == std::string::npos) {
        check_integer(text, "numerator");
        return Rat(Int(text));
    }
    std::string num = strip(text.substr(0, slash));
    std::string den = strip(text.substr(slash + 1));
    check_integer(num, "numerator");
    check_integer(den, "denominator");
    Int d(den);
    if (d == 0) throw DomainError("zero denominator in fraction '" + text + "'");
    return Rat(Int(num), d);
}

int compare(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    if (int c = compare_int(a.den, b.den)) return c;
    if (a.coords.size() != b.coords.size())
        return a.coords.size() < b.coords.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        if (int c = compare_int(a.coords[i], b.coords[i])) return c;
    return 0;
}

HomogeneousPoint to_homogeneous(const std::vector<Rat>& p) {
    Int lcm = 1;
    for (const Rat& q : p) {
        if (q < 0 || q > 1)
            throw DomainError("coordinate outside [0,1]");
        lcm = boost::multiprecision::lcm(lcm, rat_den(q));
    }
    HomogeneousPoint v;
    v.coords.reserve(p.size());
    for (const Rat& q : p)
        v.coords.push_back(rat_num(q) * (lcm / rat_den(q)));
    v.den = lcm;
    return v;
}

std::vector<Rat> dehomogenize(const HomogeneousPoint& v) {
    std::vector<Rat> p;
    p.reserve(v.coords.size());
    for (const Int& c : v.coords)
        p.emplace_back(c, v.den);
    return p;
}

HomogeneousPoint farey_mediant(const HomogeneousPoint& v, const HomogeneousPoint& w) {
    if (v.coords.size() != w.coords.size())
        throw DomainError("farey_mediant: dimension mismatch");
    if (v == w)
        throw DomainError("farey_mediant: degenerate edge (equal endpoints)");
    HomogeneousPoint m;
    m.coords.reserve(v.coords.size());
    for (std::size_t i = 0; i < v.coords.size(); ++i)
        m.coords.push_back(v.coords[i] + w.coords[i]);
    m.den = v.den + w.den;
    Int g = m.den;
    for (const Int& c : m.coords)
        g = boost::multiprecision::gcd(g, c);
    if (g > 1) {
        for (Int& c : m.coords) c /= g;
        m.den /= g;
    }
    return m;
}

nlohmann::ordered_json point_to_json(const HomogeneousPoint& v) {
    nlohmann::ordered_json j;
    j["num"] = nlohmann::ordered_json::array();
    for (const Int& c : v.coords)
        j["num"].push_back(c.str());
    j["den"] = v.den.str();
    return j;
}

HomogeneousPoint point_from_json(const nlohmann::json& j) {
    HomogeneousPoint v;
    for (const auto& s : j.at("num"))
        v.coords.emplace_back(s.get<std::string>());
    v.den = Int(j.at("den").get<std::string>());
    if (v.den <= 0) throw DomainError("point denominator must be positive");
    Int g = v.den;
    for (const Int& c : v.coords) {
        if (c < 0 || c > v.den)
            throw DomainError("point coordinate outside [0,1]");
        g = boost::multiprecision::gcd(g, c);
    }
    if (g != 1) throw DomainError("point coordinates are not primitive");
    return v;
}

} // namespace mvchi
