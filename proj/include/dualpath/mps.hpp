#pragma once

#include "dualpath/linear_program.hpp"
#include "dualpath/types.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dualpath {

struct MpsParseError : std::runtime_error {
    int line;
    MpsParseError(int line_, const std::string& what)
        : std::runtime_error("mps:" + std::to_string(line_) + ": " + what), line(line_) {}
};

/// Raw section contents of an MPS file, before conversion to standard form.
/// Accepts both fixed-column and whitespace-delimited layouts (names must be
/// free of blanks, which holds for the NETLIB collection).
struct MpsDocument {
    struct RowDecl {
        char type; // 'N', 'E', 'L', 'G'
        std::string name;
    };
    struct Entry {
        std::string column;
        std::string row;
        double value;
    };
    struct Bound {
        std::string type; // UP LO FX FR MI PL BV
        std::string set;
        std::string column;
        double value = 0.0;
    };

    std::string name;
    std::vector<RowDecl> rows;
    std::vector<std::string> columns;    // declaration order
    std::vector<Entry> column_entries;
    std::vector<Entry> rhs_entries;      // .column carries the RHS set name
    std::vector<Entry> range_entries;
    std::vector<Bound> bounds;
    std::string objective_row;           // first N row
};

namespace detail {

inline std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline double parse_number(std::string_view tok, int line) {
    std::string buf(tok);
    // NETLIB uses FORTRAN-style exponents like 1.0D+2.
    for (auto& ch : buf)
        if (ch == 'D' || ch == 'd') ch = 'E';
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw MpsParseError(line, "malformed numeric field '" + std::string(tok) + "'");
    return v;
}

} // namespace detail

inline MpsDocument parse_mps_document(const std::string& text) {
    using detail::parse_number;
    using detail::tokenize;

    MpsDocument doc;
    std::map<std::string, char, std::less<>> row_types;
    std::map<std::string, int, std::less<>> column_ids;

    enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done };
    Section section = Section::None;
    bool saw_endata = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '*') continue;
        const bool is_header = line[0] != ' ' && line[0] != '\t';
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (is_header) {
            const std::string_view head = toks[0];
            if (head == "NAME") {
                if (toks.size() > 1) doc.name = std::string(toks[1]);
            } else if (head == "ROWS") {
                section = Section::Rows;
            } else if (head == "COLUMNS") {
                section = Section::Columns;
            } else if (head == "RHS") {
                section = Section::Rhs;
            } else if (head == "RANGES") {
                section = Section::Ranges;
            } else if (head == "BOUNDS") {
                section = Section::Bounds;
            } else if (head == "ENDATA") {
                saw_endata = true;
                section = Section::Done;
                break;
            } else if (head == "OBJSENSE" || head == "OBJSENSE:") {
                throw MpsParseError(lineno, "unsupported section OBJSENSE");
            } else {
                throw MpsParseError(lineno, "unknown section '" + std::string(head) + "'");
            }
            continue;
        }

        switch (section) {
        case Section::Rows: {
            if (toks.size() != 2) throw MpsParseError(lineno, "expected 'type name' in ROWS");
            std::string type(toks[0]);
            std::string name(toks[1]);
            if (type != "N" && type != "E" && type != "L" && type != "G")
                throw MpsParseError(lineno, "unknown row type '" + type + "'");
            if (row_types.count(name)) throw MpsParseError(lineno, "duplicate row '" + name + "'");
            row_types.emplace(name, type[0]);
            doc.rows.push_back({type[0], name});
            if (type == "N" && doc.objective_row.empty()) doc.objective_row = name;
            break;
        }
        case Section::Columns: {
            // Integrality markers are accepted and ignored; the collection
            // used here is pure LP.
            if (toks.size() >= 3 && toks[1] == "'MARKER'") break;
            if (toks.size() != 3 && toks.size() != 5)
                throw MpsParseError(lineno, "expected 'col row val [row val]' in COLUMNS");
            std::string col(toks[0]);
            if (!column_ids.count(col)) {
                column_ids.emplace(col, static_cast<int>(doc.columns.size()));
                doc.columns.push_back(col);
            }
            for (size_t k = 1; k + 1 < toks.size(); k += 2) {
                std::string row(toks[k]);
                if (!row_types.count(row))
                    throw MpsParseError(lineno, "undeclared row '" + row + "'");
                doc.column_entries.push_back({col, row, parse_number(toks[k + 1], lineno)});
            }
            break;
        }
        case Section::Rhs:
        case Section::Ranges: {
            if (toks.size() != 3 && toks.size() != 5)
                throw MpsParseError(lineno, "expected 'set row val [row val]'");
            std::string set(toks[0]);
            for (size_t k = 1; k + 1 < toks.size(); k += 2) {
                std::string row(toks[k]);
                if (!row_types.count(row))
                    throw MpsParseError(lineno, "undeclared row '" + row + "'");
                MpsDocument::Entry e{set, row, parse_number(toks[k + 1], lineno)};
                (section == Section::Rhs ? doc.rhs_entries : doc.range_entries).push_back(e);
            }
            break;
        }
        case Section::Bounds: {
            if (toks.size() < 3) throw MpsParseError(lineno, "expected 'type set col [val]' in BOUNDS");
            MpsDocument::Bound b;
            b.type = std::string(toks[0]);
            b.set = std::string(toks[1]);
            b.column = std::string(toks[2]);
            const bool needs_value = b.type == "UP" || b.type == "LO" || b.type == "FX";
            if (b.type != "UP" && b.type != "LO" && b.type != "FX" && b.type != "FR" &&
                b.type != "MI" && b.type != "PL" && b.type != "BV")
                throw MpsParseError(lineno, "unknown bound type '" + b.type + "'");
            if (needs_value) {
                if (toks.size() < 4) throw MpsParseError(lineno, "bound requires a value");
                b.value = parse_number(toks[3], lineno);
            }
            if (!column_ids.count(b.column))
                throw MpsParseError(lineno, "undeclared column '" + b.column + "'");
            doc.bounds.push_back(b);
            break;
        }
        case Section::None:
            throw MpsParseError(lineno, "data before any section header");
        case Section::Done:
            break;
        }
    }
    if (!saw_endata) throw MpsParseError(lineno, "missing ENDATA");
    if (doc.objective_row.empty()) throw MpsParseError(lineno, "no objective (N) row");
    return doc;
}

/// Converts parsed sections to standard form min c'x, Ax = b, l <= x <= u.
/// L and G rows gain slack columns bounded [0, inf) resp. (-inf, 0]; RANGES
/// turn the slack bound into a finite interval following the usual MPS
/// convention. The default variable bound is [0, +inf). The RHS entry on the
/// objective row is kept as objective_constant (objective = c'x - constant).
inline LinearProgram to_linear_program(const MpsDocument& doc) {
    LinearProgram lp;
    lp.name = doc.name;

    std::map<std::string, int, std::less<>> col_id;
    for (size_t j = 0; j < doc.columns.size(); ++j)
        col_id.emplace(doc.columns[j], static_cast<int>(j));

    std::map<std::string, int, std::less<>> row_id; // constraint rows only
    std::map<std::string, char, std::less<>> row_type;
    int me = 0;
    for (const auto& r : doc.rows) {
        row_type.emplace(r.name, r.type);
        if (r.type != 'N') row_id.emplace(r.name, me++);
    }

    const int n_struct = static_cast<int>(doc.columns.size());
    std::map<std::string, double, std::less<>> rhs_map, range_map;
    for (const auto& e : doc.rhs_entries) {
        if (e.row == doc.objective_row) {
            lp.objective_constant = e.value;
            continue;
        }
        if (row_type.at(e.row) == 'N') continue; // free rows carry no rhs
        rhs_map[e.row] = e.value;
    }
    for (const auto& e : doc.range_entries) {
        if (row_type.at(e.row) == 'N') continue;
        range_map[e.row] = e.value;
    }

    // Count slacks first so bound vectors can be sized up front.
    int n_slack = 0;
    for (const auto& r : doc.rows)
        if (r.type == 'L' || r.type == 'G' || (r.type == 'E' && range_map.count(r.name)))
            ++n_slack;
    const int n = n_struct + n_slack;

    lp.objective = Vec::Zero(n);
    lp.rhs = Vec::Zero(me);
    lp.lower = Vec::Zero(n);
    lp.upper = Vec::Constant(n, kInf);

    for (const auto& e : doc.column_entries) {
        const int j = col_id.at(e.column);
        if (e.row == doc.objective_row) {
            lp.objective[j] += e.value;
        } else if (row_type.at(e.row) == 'N') {
            continue; // non-objective free rows are dropped
        } else {
            lp.entries.emplace_back(row_id.at(e.row), j, e.value);
        }
    }
    for (const auto& [row, v] : rhs_map) lp.rhs[row_id.at(row)] = v;

    // Slack columns: row + s = rhs with s in the interval implied by the row
    // type and range value.
    int j = n_struct;
    for (const auto& r : doc.rows) {
        if (r.type == 'N') continue;
        const auto rng = range_map.find(r.name);
        double lo = 0.0, hi = 0.0;
        if (r.type == 'L') {
            lo = 0.0;
            hi = rng == range_map.end() ? kInf : std::abs(rng->second);
        } else if (r.type == 'G') {
            hi = 0.0;
            lo = rng == range_map.end() ? -kInf : -std::abs(rng->second);
        } else { // E
            if (rng == range_map.end()) continue;
            if (rng->second >= 0) { // row value in [rhs, rhs + r]
                lo = -rng->second;
                hi = 0.0;
            } else { // row value in [rhs + r, rhs]
                lo = 0.0;
                hi = -rng->second;
            }
        }
        lp.entries.emplace_back(row_id.at(r.name), j, 1.0);
        lp.lower[j] = lo;
        lp.upper[j] = hi;
        ++j;
    }

    // Apply bounds of the first bound set to structural columns.
    std::string bound_set;
    std::vector<bool> lower_set(n, false);
    for (const auto& b : doc.bounds) {
        if (bound_set.empty()) bound_set = b.set;
        if (b.set != bound_set) continue;
        const int c = col_id.at(b.column);
        if (b.type == "UP") {
            lp.upper[c] = b.value;
            if (b.value < 0 && !lower_set[c]) lp.lower[c] = -kInf;
        } else if (b.type == "LO") {
            lp.lower[c] = b.value;
            lower_set[c] = true;
        } else if (b.type == "FX") {
            lp.lower[c] = lp.upper[c] = b.value;
            lower_set[c] = true;
        } else if (b.type == "FR") {
            lp.lower[c] = -kInf;
            lp.upper[c] = kInf;
        } else if (b.type == "MI") {
            lp.lower[c] = -kInf;
        } else if (b.type == "PL") {
            lp.upper[c] = kInf;
        } else if (b.type == "BV") {
            lp.lower[c] = 0.0;
            lp.upper[c] = 1.0;
            lower_set[c] = true;
        }
    }

    lp.validate();
    return lp;
}

inline LinearProgram parse_mps(const std::string& text) {
    return to_linear_program(parse_mps_document(text));
}

/// Serializes a standard-form LP back to MPS text (all rows E, explicit
/// bounds). parse_mps(write_mps(lp)) reproduces lp exactly; numbers are
/// printed with round-trip precision.
inline std::string write_mps(const LinearProgram& lp) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "NAME          " << lp.name << "\n";
    out << "ROWS\n N  OBJ\n";
    const int me = lp.num_rows();
    const int n = lp.num_vars();
    for (int i = 0; i < me; ++i) out << " E  R" << i << "\n";

    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (const auto& t : lp.entries) by_col[t.col()].emplace_back(t.row(), t.value());
    for (auto& col : by_col) std::sort(col.begin(), col.end());

    out << "COLUMNS\n";
    for (int j = 0; j < n; ++j) {
        if (lp.objective[j] != 0.0)
            out << "    C" << j << "  OBJ  " << num(lp.objective[j]) << "\n";
        for (const auto& [i, v] : by_col[j]) out << "    C" << j << "  R" << i << "  " << num(v) << "\n";
        if (lp.objective[j] == 0.0 && by_col[j].empty())
            out << "    C" << j << "  OBJ  0\n"; // keep empty columns declared
    }
    out << "RHS\n";
    if (lp.objective_constant != 0.0)
        out << "    RHS  OBJ  " << num(lp.objective_constant) << "\n";
    for (int i = 0; i < me; ++i)
        if (lp.rhs[i] != 0.0) out << "    RHS  R" << i << "  " << num(lp.rhs[i]) << "\n";
    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (lo == 0.0 && hi == kInf) continue;
        if (lo == hi) {
            out << " FX BND  C" << j << "  " << num(lo) << "\n";
            continue;
        }
        if (lo == -kInf && hi == kInf) {
            out << " FR BND  C" << j << "\n";
            continue;
        }
        if (lo == -kInf)
            out << " MI BND  C" << j << "\n";
        else if (lo != 0.0)
            out << " LO BND  C" << j << "  " << num(lo) << "\n";
        if (hi != kInf) out << " UP BND  C" << j << "  " << num(hi) << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

} // namespace dualpath
