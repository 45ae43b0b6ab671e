#pragma once

// JSON encodings for hypercomplex numbers, polynomials, forms, surfaces
// and sample specifications.
//
//   HNumber  {"algebra":"H","c":["1","-1/2","0","3"]}
//   HPoly    {"algebra":"H","n":2,"terms":[{"exp":[0,1,0,0,1,0,0,0],"coef":HNumber}]}
//            exp is indexed by the flat coordinate dim*h + alpha (0-based h).
//   Surface  {"schema_version":1,"rho":HPoly}
//   Samples  {"schema_version":1,"points":[[...8 scalars...], ...]}
//            {"schema_version":1,"grid":{"coords":[0,1],"values":["-1","0","1"]}}
//   Form     {"degree":k,"terms":[{"idx":[0,4,5],"coef":{"numerator":HPoly,"pole":[...],"m":2}}]}
//
// Scalars are read from strings ("3", "-2/7", "0.125") or JSON numbers;
// numbers are converted exactly from their binary value. Output always
// uses canonical "p/q" strings.

#include "fueter/forms.hpp"
#include "fueter/hypersurface.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fueter {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input. `where` is a JSON pointer or a byte offset.
class InputError : public std::runtime_error {
  public:
    InputError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

  private:
    std::string where_;
};

namespace json_detail {

inline const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object())
        throw InputError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(path, std::string("missing field '") + key + "'");
    return *it;
}

inline const Json& field_array(const Json& j, const char* key, const std::string& path) {
    const Json& f = field(j, key, path);
    if (!f.is_array())
        throw InputError(path + "/" + key, "expected an array");
    return f;
}

inline int as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw InputError(path, "expected an integer");
    return j.get<int>();
}

inline void check_schema(const Json& j, const std::string& path) {
    if (!j.is_object())
        throw InputError(path, "expected an object");
    auto it = j.find("schema_version");
    if (it == j.end())
        return;
    if (!it->is_number_integer() || it->get<int>() != kSchemaVersion)
        throw InputError(path + "/schema_version", "unsupported schema version");
}

}  // namespace json_detail

inline Json rational_to_json(const Rational& r) { return fueter::to_string(r); }

inline Rational rational_from_json(const Json& j, const std::string& path = "") {
    try {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(j.get<long>());
        if (j.is_number_float()) {
            const double d = j.get<double>();
            if (!std::isfinite(d))
                throw InputError(path, "non-finite number");
            return Rational(d);
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
    throw InputError(path, "expected a rational string or a number");
}

inline Algebra algebra_from_json(const Json& j, const std::string& path) {
    if (!j.is_string())
        throw InputError(path, "expected \"H\" or \"O\"");
    try {
        return parse_algebra(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
}

inline Json to_json(const HExact& x) {
    Json c = Json::array();
    for (int i = 0; i < x.dim(); ++i)
        c.push_back(rational_to_json(x[i]));
    return Json{{"algebra", algebra_name(x.algebra())}, {"c", c}};
}

inline HExact hnumber_from_json(const Json& j, const std::string& path = "") {
    const Algebra a = algebra_from_json(json_detail::field(j, "algebra", path), path + "/algebra");
    const Json& c = json_detail::field(j, "c", path);
    if (!c.is_array() || static_cast<int>(c.size()) != dimension(a))
        throw InputError(path + "/c", "expected " + std::to_string(dimension(a)) + " components");
    HExact x(a);
    for (int i = 0; i < dimension(a); ++i)
        x[i] = rational_from_json(c[static_cast<std::size_t>(i)], path + "/c/" + std::to_string(i));
    return x;
}

inline Json to_json(const HPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json ex = Json::array();
        for (auto v : e)
            ex.push_back(static_cast<int>(v));
        terms.push_back(Json{{"exp", ex}, {"coef", to_json(c)}});
    }
    return Json{{"algebra", algebra_name(p.algebra())}, {"n", p.nvars()}, {"terms", terms}};
}

inline HPoly hpoly_from_json(const Json& j, const std::string& path = "") {
    json_detail::check_schema(j, path);
    const Algebra a = algebra_from_json(json_detail::field(j, "algebra", path), path + "/algebra");
    const int n = json_detail::as_int(json_detail::field(j, "n", path), path + "/n");
    if (n < 1 || n > 8)
        throw InputError(path + "/n", "number of variables must be between 1 and 8");
    HPoly p(a, n);
    const Json& terms = json_detail::field(j, "terms", path);
    if (!terms.is_array())
        throw InputError(path + "/terms", "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = path + "/terms/" + std::to_string(t);
        const Json& ex = json_detail::field(terms[t], "exp", tp);
        if (!ex.is_array() || static_cast<int>(ex.size()) != p.ncoords())
            throw InputError(tp + "/exp", "expected " + std::to_string(p.ncoords()) + " exponents");
        Exponent e;
        for (std::size_t k = 0; k < ex.size(); ++k) {
            const int v = json_detail::as_int(ex[k], tp + "/exp/" + std::to_string(k));
            if (v < 0 || v > 60)
                throw InputError(tp + "/exp/" + std::to_string(k), "exponent out of range");
            e.push_back(static_cast<std::uint8_t>(v));
        }
        const HExact c = hnumber_from_json(json_detail::field(terms[t], "coef", tp), tp + "/coef");
        if (c.algebra() != a)
            throw InputError(tp + "/coef/algebra", "coefficient algebra differs from the polynomial");
        p.add_term(e, c);
    }
    return p;
}

inline Json to_json(const PoleElement& e) {
    Json j{{"numerator", to_json(e.numerator())}, {"m", e.exponent()}};
    if (e.pole()) {
        Json pole = Json::array();
        for (const auto& r : *e.pole())
            pole.push_back(rational_to_json(r));
        j["pole"] = pole;
    }
    return j;
}

inline PoleElement pole_element_from_json(const Json& j, const std::string& path = "") {
    HPoly num = hpoly_from_json(json_detail::field(j, "numerator", path), path + "/numerator");
    int m = 0;
    if (j.contains("m"))
        m = json_detail::as_int(j["m"], path + "/m");
    if (m == 0)
        return PoleElement(std::move(num));
    const Json& pole = json_detail::field(j, "pole", path);
    if (!pole.is_array())
        throw InputError(path + "/pole", "expected an array");
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < pole.size(); ++i)
        pt.push_back(rational_from_json(pole[i], path + "/pole/" + std::to_string(i)));
    try {
        return PoleElement(std::move(num), std::move(pt), m);
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
}

inline Json to_json(const Form& f) {
    Json terms = Json::array();
    for (const auto& [idx, c] : f.terms()) {
        Json ij = Json::array();
        for (auto i : idx)
            ij.push_back(static_cast<int>(i));
        terms.push_back(Json{{"idx", ij}, {"coef", to_json(c)}});
    }
    return Json{{"algebra", algebra_name(f.algebra())}, {"n", f.nvars()}, {"degree", f.degree()}, {"terms", terms}};
}

inline Form form_from_json(const Json& j, const std::string& path = "") {
    const Algebra a = algebra_from_json(json_detail::field(j, "algebra", path), path + "/algebra");
    const int n = json_detail::as_int(json_detail::field(j, "n", path), path + "/n");
    const int k = json_detail::as_int(json_detail::field(j, "degree", path), path + "/degree");
    Form f = [&] {
        try {
            return Form(a, n, k);
        } catch (const std::invalid_argument& e) {
            throw InputError(path, e.what());
        }
    }();
    const Json& terms = json_detail::field(j, "terms", path);
    if (!terms.is_array())
        throw InputError(path + "/terms", "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = path + "/terms/" + std::to_string(t);
        const Json& ij = json_detail::field(terms[t], "idx", tp);
        if (!ij.is_array() || static_cast<int>(ij.size()) != k)
            throw InputError(tp + "/idx", "expected " + std::to_string(k) + " indices");
        IndexTuple idx;
        for (std::size_t i = 0; i < ij.size(); ++i) {
            const int v = json_detail::as_int(ij[i], tp + "/idx/" + std::to_string(i));
            if (v < 0 || v >= dimension(a) * n)
                throw InputError(tp + "/idx/" + std::to_string(i), "index out of range");
            idx.push_back(static_cast<std::uint8_t>(v));
        }
        f = f + Form::monomial(a, n, idx, pole_element_from_json(json_detail::field(terms[t], "coef", tp), tp + "/coef"));
    }
    return f;
}

inline Json surface_to_json(const Hypersurface& S) { return Json{{"schema_version", kSchemaVersion}, {"rho", to_json(S.rho())}}; }

inline Hypersurface surface_from_json(const Json& j, const std::string& path = "") {
    json_detail::check_schema(j, path);
    HPoly rho = hpoly_from_json(json_detail::field(j, "rho", path), path + "/rho");
    try {
        return Hypersurface(std::move(rho));
    } catch (const std::invalid_argument& e) {
        throw InputError(path + "/rho", e.what());
    }
}

inline Json points_to_json(const std::vector<Point<Rational>>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) {
        Json row = Json::array();
        for (const auto& v : p)
            row.push_back(rational_to_json(v));
        arr.push_back(row);
    }
    return Json{{"schema_version", kSchemaVersion}, {"points", arr}};
}

/// Explicit points (checked to lie on S) or a grid on the affine chart.
inline std::vector<Point<Rational>> samples_from_json(const Json& j, const Hypersurface& S, const std::string& path = "") {
    json_detail::check_schema(j, path);
    std::vector<Point<Rational>> pts;
    if (j.contains("points")) {
        const Json& arr = j["points"];
        if (!arr.is_array())
            throw InputError(path + "/points", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string pp = path + "/points/" + std::to_string(i);
            if (!arr[i].is_array() || arr[i].size() != 8)
                throw InputError(pp, "expected 8 coordinates");
            Point<Rational> p;
            for (std::size_t k = 0; k < 8; ++k)
                p.push_back(rational_from_json(arr[i][k], pp + "/" + std::to_string(k)));
            if (S.value(p) != 0)
                throw InputError(pp, "point does not lie on the surface");
            pts.push_back(std::move(p));
        }
    } else if (j.contains("grid")) {
        const Json& g = j["grid"];
        if (!S.is_affine())
            throw InputError(path + "/grid", "grid samples need an affine surface");
        std::vector<int> coords;
        const Json& cs = json_detail::field_array(g, "coords", path + "/grid");
        for (std::size_t i = 0; i < cs.size(); ++i)
            coords.push_back(json_detail::as_int(cs[i], path + "/grid/coords/" + std::to_string(i)));
        std::vector<Rational> values;
        const Json& vals = json_detail::field_array(g, "values", path + "/grid");
        for (std::size_t i = 0; i < vals.size(); ++i)
            values.push_back(rational_from_json(vals[i], path + "/grid/values/" + std::to_string(i)));
        try {
            pts = grid_affine(S, coords, values);
        } catch (const std::invalid_argument& e) {
            throw InputError(path + "/grid", e.what());
        }
    } else {
        throw InputError(path, "expected 'points' or 'grid'");
    }
    if (pts.empty())
        throw InputError(path, "no sample points");
    return pts;
}

/// Parses text; syntax errors report the byte offset.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(source + " at byte " + std::to_string(e.byte), "JSON syntax error");
    }
}

inline Json read_json_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in)
        throw InputError(filename, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), filename);
}

}  // namespace fueter
