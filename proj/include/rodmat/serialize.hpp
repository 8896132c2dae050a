#ifndef RODMAT_SERIALIZE_HPP
#define RODMAT_SERIALIZE_HPP

#include <json.hpp>

#include <string>

#include "patching_matrix.hpp"

namespace rodmat {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const Polynomial& p)
{
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_string(c));
    return a;
}

inline json to_json(const RationalFunction& f) { return json{{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline json to_json(const ConjugationRecord& C)
{
    return json::array({json::array({to_string(C.c11), to_string(C.c12)}),
                        json::array({to_string(C.c21), to_string(C.c22)})});
}

inline json to_json(const PatchingMatrix& P)
{
    json nodes = json::array();
    for (const auto& a : P.nodes) nodes.push_back(to_string(a));
    json out{{"signature", signature_name(P.signature)},
             {"nodes", nodes},
             {"entries", {{"p11", to_json(P.p11)}, {"p12", to_json(P.p12)}, {"p22", to_json(P.p22)}}}};
    if (P.rod) {
        out["rod"] = {{"lower", P.rod->lower ? to_string(*P.rod->lower) : std::string("-inf")},
                      {"upper", P.rod->upper ? to_string(*P.rod->upper) : std::string("+inf")}};
    }
    return out;
}

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& pointer, const std::string& why)
{
    throw Error(ErrorKind::SchemaError, pointer + ": " + why);
}

inline Rational rational_at(const json& j, const std::string& pointer)
{
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            schema_fail(pointer, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    schema_fail(pointer, "expected a rational string \"p/q\"");
}

inline Polynomial polynomial_at(const json& j, const std::string& pointer)
{
    if (!j.is_array()) schema_fail(pointer, "expected an ascending coefficient array");
    std::vector<Rational> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_at(j[i], pointer + "/" + std::to_string(i)));
    return Polynomial(std::move(c));
}

} // namespace detail

inline RationalFunction rational_function_from_json(const json& j, const std::string& pointer = "")
{
    if (!j.is_object()) detail::schema_fail(pointer, "expected {\"num\": [...], \"den\": [...]}");
    if (!j.contains("num")) detail::schema_fail(pointer + "/num", "missing");
    if (!j.contains("den")) detail::schema_fail(pointer + "/den", "missing");
    Polynomial num = detail::polynomial_at(j["num"], pointer + "/num");
    Polynomial den = detail::polynomial_at(j["den"], pointer + "/den");
    if (den.is_zero()) detail::schema_fail(pointer + "/den", "zero denominator");
    return RationalFunction(num, den);
}

inline PatchingMatrix patching_matrix_from_json(const json& j)
{
    using detail::schema_fail;
    if (!j.is_object()) schema_fail("", "expected an object");
    PatchingMatrix P;
    if (!j.contains("signature") || !j["signature"].is_string()) schema_fail("/signature", "missing or not a string");
    std::string sig = j["signature"].get<std::string>();
    if (sig == "riemannian") P.signature = Signature::Riemannian;
    else if (sig == "lorentzian") P.signature = Signature::Lorentzian;
    else schema_fail("/signature", "expected \"riemannian\" or \"lorentzian\"");
    if (!j.contains("nodes") || !j["nodes"].is_array()) schema_fail("/nodes", "missing or not an array");
    for (std::size_t i = 0; i < j["nodes"].size(); ++i)
        P.nodes.push_back(detail::rational_at(j["nodes"][i], "/nodes/" + std::to_string(i)));
    for (std::size_t i = 1; i < P.nodes.size(); ++i)
        if (!(P.nodes[i - 1] < P.nodes[i])) schema_fail("/nodes", "nodes must be strictly ascending");
    if (j.contains("rod")) {
        const json& r = j["rod"];
        if (!r.is_object() || !r.contains("lower") || !r.contains("upper")) schema_fail("/rod", "expected {lower, upper}");
        Rod rod;
        if (!(r["lower"].is_string() && r["lower"].get<std::string>() == "-inf"))
            rod.lower = detail::rational_at(r["lower"], "/rod/lower");
        if (!(r["upper"].is_string() && r["upper"].get<std::string>() == "+inf"))
            rod.upper = detail::rational_at(r["upper"], "/rod/upper");
        if (rod.lower && rod.upper && !(*rod.lower < *rod.upper)) schema_fail("/rod", "lower must be below upper");
        P.rod = rod;
    }
    if (!j.contains("entries") || !j["entries"].is_object()) schema_fail("/entries", "missing or not an object");
    const json& e = j["entries"];
    for (const char* k : {"p11", "p12", "p22"})
        if (!e.contains(k)) schema_fail(std::string("/entries/") + k, "missing");
    P.p11 = rational_function_from_json(e["p11"], "/entries/p11");
    P.p12 = rational_function_from_json(e["p12"], "/entries/p12");
    P.p22 = rational_function_from_json(e["p22"], "/entries/p22");
    return P;
}

} // namespace rodmat

#endif
