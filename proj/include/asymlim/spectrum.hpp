#pragma once

// Symbolic spectra of positive contractions: finitely many atoms with
// multiplicities plus formula-defined eigenvalue tails λ(j), j ≥ start.
//
// File format:
//   {"atoms": [{"value": x, "mult": n | "inf"}],
//    "tails": [{"expr": "j/(j+1)", "start": 1, "increasing": true}]}

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymlim/error.hpp"
#include "asymlim/expr.hpp"
#include "asymlim/io.hpp"

namespace asymlim {

/// Sampling horizon for tail formulas.
inline constexpr std::int64_t kTailHorizon = 1'000'000;

struct Cardinality {
    std::uint64_t finite = 0;
    bool countably_infinite = false;

    static Cardinality count(std::uint64_t n) { return {n, false}; }
    static Cardinality aleph0() { return {0, true}; }

    Cardinality& operator+=(const Cardinality& other) {
        countably_infinite = countably_infinite || other.countably_infinite;
        finite = countably_infinite ? 0 : finite + other.finite;
        return *this;
    }

    bool operator==(const Cardinality&) const = default;

    std::string to_string() const {
        return countably_infinite ? std::string("aleph0") : std::to_string(finite);
    }
};

struct Atom {
    double value = 0.0;
    Cardinality multiplicity = Cardinality::count(1);
};

struct Tail {
    ExprAst formula;
    std::int64_t start = 1;
    bool increasing = false;

    double at(std::int64_t j) const { return eval(formula, j); }

    /// start … start+63, then a geometric ladder (ratio 1.25) up to the horizon.
    std::vector<std::int64_t> sample_points() const {
        std::vector<std::int64_t> out;
        std::int64_t j = start;
        for (; j < start + 64 && j <= kTailHorizon; ++j) out.push_back(j);
        double x = static_cast<double>(j);
        while (j < kTailHorizon) {
            x *= 1.25;
            j = std::min<std::int64_t>(kTailHorizon, std::max<std::int64_t>(j + 1, std::llround(x)));
            out.push_back(j);
        }
        return out;
    }
};

struct SpectrumSpec {
    std::vector<Atom> atoms;
    std::vector<Tail> tails;
};

/// Atom values in [0,1]; sampled tail values in (0,1) and, when declared,
/// non-decreasing. Throws SpecViolation (or an evaluation error) otherwise.
inline void validate(const SpectrumSpec& spec) {
    for (const auto& a : spec.atoms) {
        if (!(a.value >= 0.0 && a.value <= 1.0))
            throw Error(ErrorKind::SpecViolation, "atom value " + format_double(a.value) + " outside [0,1]");
        if (!a.multiplicity.countably_infinite && a.multiplicity.finite == 0)
            throw Error(ErrorKind::SpecViolation, "atom multiplicity must be positive");
    }
    for (const auto& t : spec.tails) {
        if (t.start < 1) throw Error(ErrorKind::SpecViolation, "tail start must be ≥ 1");
        double prev = -1.0;
        for (const std::int64_t j : t.sample_points()) {
            const double v = t.at(j);
            if (!(v > 0.0 && v < 1.0))
                throw Error(ErrorKind::SpecViolation, "tail " + print(t.formula) + " takes value " +
                                                          format_double(v) + " at j = " +
                                                          std::to_string(j) + ", outside (0,1)");
            if (t.increasing && v < prev)
                throw Error(ErrorKind::SpecViolation, "tail " + print(t.formula) +
                                                          " declared increasing decreases at j = " +
                                                          std::to_string(j));
            prev = v;
        }
    }
}

inline SpectrumSpec spectrum_from_json(const nlohmann::json& doc) {
    auto bad = [](const std::string& why) { return Error(ErrorKind::MalformedInput, why); };
    if (!doc.is_object()) throw bad("spectrum document must be a JSON object");
    SpectrumSpec spec;
    if (doc.contains("atoms")) {
        if (!doc["atoms"].is_array()) throw bad("\"atoms\" must be an array");
        for (const auto& a : doc["atoms"]) {
            if (!a.is_object() || !a.contains("value") || !a["value"].is_number())
                throw bad("each atom needs a numeric \"value\"");
            Atom atom;
            atom.value = a["value"].get<double>();
            if (a.contains("mult")) {
                const auto& m = a["mult"];
                if (m.is_string() && m.get<std::string>() == "inf") atom.multiplicity = Cardinality::aleph0();
                else if (m.is_number_unsigned()) atom.multiplicity = Cardinality::count(m.get<std::uint64_t>());
                else throw bad("\"mult\" must be a positive integer or \"inf\"");
            }
            spec.atoms.push_back(atom);
        }
    }
    if (doc.contains("tails")) {
        if (!doc["tails"].is_array()) throw bad("\"tails\" must be an array");
        for (const auto& t : doc["tails"]) {
            if (!t.is_object() || !t.contains("expr") || !t["expr"].is_string())
                throw bad("each tail needs a string \"expr\"");
            Tail tail;
            tail.formula = parse(t["expr"].get<std::string>());
            if (t.contains("start")) {
                if (!t["start"].is_number_integer()) throw bad("\"start\" must be an integer");
                tail.start = t["start"].get<std::int64_t>();
            }
            if (t.contains("increasing")) {
                if (!t["increasing"].is_boolean()) throw bad("\"increasing\" must be a boolean");
                tail.increasing = t["increasing"].get<bool>();
            }
            spec.tails.push_back(std::move(tail));
        }
    }
    return spec;
}

inline std::string spectrum_to_json(const SpectrumSpec& spec) {
    std::string out = "{\"atoms\": [";
    for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        const auto& a = spec.atoms[i];
        out += i ? ", " : "";
        out += "{\"value\": " + format_double(a.value) + ", \"mult\": " +
               (a.multiplicity.countably_infinite ? std::string("\"inf\"")
                                                  : std::to_string(a.multiplicity.finite)) +
               "}";
    }
    out += "], \"tails\": [";
    for (std::size_t i = 0; i < spec.tails.size(); ++i) {
        const auto& t = spec.tails[i];
        out += i ? ", " : "";
        out += "{\"expr\": \"" + print(t.formula) + "\", \"start\": " + std::to_string(t.start) +
               ", \"increasing\": " + (t.increasing ? "true" : "false") + "}";
    }
    return out + "]}\n";
}

}  // namespace asymlim
