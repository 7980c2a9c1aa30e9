#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hitorder/coupling.hpp"
#include "hitorder/errors.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/order.hpp"
#include "hitorder/rational.hpp"
#include "hitorder/spectral.hpp"
#include "hitorder/words.hpp"

namespace hitorder::io {

using json = nlohmann::json;

inline Rational rational_from_json(const json& v) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number()) return Rational::parse(v.dump());
    throw ParseError("matrix entry must be a string or a number, got " + v.dump());
}

/// {"size": s, "rows": [["1/2","1/2"],["0","1"]]}; entries as "a/b" or decimals.
inline StochMatrix matrix_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
        throw ParseError("matrix document needs a \"rows\" array");
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : doc["rows"]) {
        if (!r.is_array()) throw ParseError("each row must be an array");
        auto& row = rows.emplace_back();
        for (const auto& x : r) row.push_back(rational_from_json(x));
    }
    if (doc.contains("size") && doc["size"].get<std::size_t>() != rows.size())
        throw SizeMismatch("\"size\" does not match the number of rows");
    return StochMatrix::validate(rows);
}

inline StochMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return matrix_from_json(doc);
}

inline json to_json(const StochMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (const auto& x : m.row(i)) row.push_back(x.str());
        rows.push_back(std::move(row));
    }
    return {{"size", m.size()}, {"rows", std::move(rows)}};
}

inline json to_json(const PrefixCheck& c) {
    return {{"n", c.n}, {"fast", c.fast.str()}, {"slow", c.slow.str()}, {"holds", c.holds()}};
}

/// {"verdict", "n1", "n2", "n_hat", "prefix_checks", "falsified_at"}; absent
/// evidence is null.
inline json to_json(const OrderCertificate& c) {
    json out;
    out["verdict"] = to_string(c.verdict);
    out["n1"] = c.pair ? json(c.pair->n1) : json(nullptr);
    out["n2"] = c.pair ? json(c.pair->n2) : json(nullptr);
    out["n_hat"] = c.n_hat ? json(*c.n_hat) : json(nullptr);
    json checks = json::array();
    for (const auto& p : c.prefix_checks) checks.push_back(to_json(p));
    out["prefix_checks"] = std::move(checks);
    out["falsified_at"] = c.falsified_at ? to_json(*c.falsified_at) : json(nullptr);
    out["identical"] = c.identical;
    return out;
}

inline json to_json(const SpectralSummary& s) {
    return {{"moduli", s.moduli}, {"mu", s.mu}, {"gap", s.gap}, {"ergodic_taboo", s.ergodic_taboo}};
}

inline json to_json(const VedereWitness& w) { return {{"m", w.m}}; }

inline json to_json(const ServeCheck& s) {
    return {{"m", s.m},
            {"upper_rows_ok", s.upper_rows_ok},
            {"level_route", to_string(s.level_route)},
            {"holds", s.holds()},
            {"inconclusive", s.inconclusive()}};
}

inline json to_json(const Violations& v) {
    return {{"order", v.order}, {"identity", v.identity}, {"block", v.block}, {"bridge", v.bridge}};
}

inline json to_json(const BatchResult& b) {
    return {{"n", b.n}, {"mean_diff", b.mean_diff}, {"ci", b.ci_halfwidth}, {"violations", to_json(b.violations)}};
}

inline json rational_json(const Rational& r) { return {{"fraction", r.str()}, {"decimal", r.to_double()}}; }

inline json to_json(const WordComparison& r) {
    json out;
    out["alphabet"] = r.fast.alphabet_size();
    out["fast"] = {{"word", r.fast.str()}, {"leading", r.eps_fast.str()}, {"mean", rational_json(r.mean_fast)}};
    out["slow"] = {{"word", r.slow.str()}, {"leading", r.eps_slow.str()}, {"mean", rational_json(r.mean_slow)}};
    out["equal_laws"] = r.equal_laws;
    out["rowwise"] = r.rowwise;
    out["block_witness"] = r.block_witness ? to_json(*r.block_witness) : json(nullptr);
    if (r.serve) {
        out["serve"] = to_json(*r.serve);
        out["serve"]["reason"] = r.serve_level_reason;
    } else {
        out["serve"] = nullptr;
    }
    out["st_certificate"] = to_json(r.st);
    out["ast_certificate"] = to_json(r.ast);
    out["vicev"] = r.vicev ? json(to_string(*r.vicev)) : json(nullptr);
    out["falsified_at"] = r.falsified_at ? json(*r.falsified_at) : json(nullptr);
    if (r.substitution)
        out["substitution"] = {{"fast", r.substitution->fast.str()},
                               {"slow", r.substitution->slow.str()},
                               {"certificate", to_json(r.substitution->certificate)}};
    else
        out["substitution"] = nullptr;
    out["verdict"] = to_string(r.verdict);
    out["via"] = r.via;
    // Top-level copies of the direct certificate for quick inspection.
    out["n1"] = r.st.pair ? json(r.st.pair->n1) : json(nullptr);
    out["n2"] = r.st.pair ? json(r.st.pair->n2) : json(nullptr);
    out["n_hat"] = r.st.n_hat ? json(*r.st.n_hat) : json(nullptr);
    return out;
}

/// Decimal rendering with 6 significant digits.
inline std::string decimal6(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace hitorder::io
