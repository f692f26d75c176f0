#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codegen.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "pattern.hpp"
#include "recovery.hpp"
#include "symbolic.hpp"

namespace mrc {

/// On-disk representation of an instantiated product code: topology, field,
/// seed, the two instantiated factor generators as decimal matrices, and the
/// symbolic structure with its variable assignment so diagnostics can rebuild
/// the construction exactly.
struct CodeFile {
    Topology topo;
    uint64_t q = 0;
    uint64_t seed = 0;
    FieldMatrix grow;
    FieldMatrix gcol;
    SymbolicMatrix sym_grow;
    SymbolicMatrix sym_gcol;
    std::vector<std::pair<std::string, uint64_t>> assignment;

    static CodeFile from_sample(const SampledCode& code) {
        CodeFile cf{code.topology,
                    code.inst.assignment.field.modulus(),
                    code.inst.seed,
                    code.inst.grow,
                    code.inst.gcol,
                    code.sym_grow,
                    code.sym_gcol,
                    {}};
        for (size_t i = 0; i < code.inst.assignment.names.size(); ++i)
            cf.assignment.emplace_back(code.inst.assignment.names[i], code.inst.assignment.values[i]);
        return cf;
    }

    FieldMatrix generator() const { return kron(gcol, grow); }

    std::string serialize() const {
        std::ostringstream os;
        os << "mrc-code 1\n";
        os << "topology " << topo.m << " " << topo.n << " " << topo.a << " " << topo.b << "\n";
        os << "field " << q << "\n";
        os << "seed " << seed << "\n";
        auto write_matrix = [&os](const std::string& name, const FieldMatrix& m) {
            os << name << " " << m.rows() << " " << m.cols() << "\n";
            for (int r = 0; r < m.rows(); ++r) {
                for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
                os << "\n";
            }
        };
        auto write_symbolic = [&os](const std::string& name, const SymbolicMatrix& m) {
            os << name << " " << m.rows() << " " << m.cols() << "\n";
            for (int r = 0; r < m.rows(); ++r) {
                for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.entry_string(r, c);
                os << "\n";
            }
        };
        write_matrix("grow", grow);
        write_matrix("gcol", gcol);
        write_symbolic("symgrow", sym_grow);
        write_symbolic("symgcol", sym_gcol);
        os << "assignment " << assignment.size() << "\n";
        for (const auto& [name, value] : assignment) os << name << " " << value << "\n";
        return os.str();
    }

    static CodeFile parse(std::string_view text);
};

namespace detail {

class LineReader {
  public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string& out) {
        if (pos_ > text_.size()) return false;
        size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) {
            out = std::string(text_.substr(pos_));
            pos_ = text_.size() + 1;
        } else {
            out = std::string(text_.substr(pos_, end - pos_));
            pos_ = end + 1;
            ++line_;
        }
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return end != std::string_view::npos || !out.empty();
    }

    std::string expect() {
        std::string s;
        if (!next(s)) throw ParseError("unexpected end of file", line_, 1);
        return s;
    }

    int line() const { return line_; }

  private:
    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 0;
};

} // namespace detail

inline CodeFile CodeFile::parse(std::string_view text) {
    detail::LineReader rd(text);

    auto fields = [&rd](const std::string& line) {
        std::istringstream is(line);
        std::vector<std::string> out;
        std::string tok;
        while (is >> tok) out.push_back(tok);
        if (out.empty()) throw ParseError("blank line where content expected", rd.line(), 1);
        return out;
    };
    auto parse_u64 = [&rd](const std::string& s) -> uint64_t {
        try {
            if (s.empty() || s[0] < '0' || s[0] > '9') throw std::invalid_argument("sign");
            size_t used = 0;
            uint64_t v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument("trail");
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected an unsigned integer, got '" + s + "'", rd.line(), 1);
        }
    };

    auto head = fields(rd.expect());
    if (head.size() != 2 || head[0] != "mrc-code" || head[1] != "1")
        throw ParseError("not an mrc-code version 1 file", 1, 1);

    auto tl = fields(rd.expect());
    if (tl.size() != 5 || tl[0] != "topology") throw ParseError("expected 'topology m n a b'", rd.line(), 1);
    Topology topo;
    try {
        topo = Topology(static_cast<int>(parse_u64(tl[1])), static_cast<int>(parse_u64(tl[2])),
                        static_cast<int>(parse_u64(tl[3])), static_cast<int>(parse_u64(tl[4])));
    } catch (const InvalidTopology& err) {
        throw ParseError(err.what(), rd.line(), 1);
    }

    auto fl = fields(rd.expect());
    if (fl.size() != 2 || fl[0] != "field") throw ParseError("expected 'field q'", rd.line(), 1);
    const uint64_t q = parse_u64(fl[1]);
    Field field(q);

    auto sl = fields(rd.expect());
    if (sl.size() != 2 || sl[0] != "seed") throw ParseError("expected 'seed s'", rd.line(), 1);
    const uint64_t seed = parse_u64(sl[1]);

    auto read_matrix = [&](const std::string& name) {
        auto hd = fields(rd.expect());
        if (hd.size() != 3 || hd[0] != name) throw ParseError("expected '" + name + " rows cols'", rd.line(), 1);
        const int rows = static_cast<int>(parse_u64(hd[1]));
        const int cols = static_cast<int>(parse_u64(hd[2]));
        FieldMatrix m(field, rows, cols);
        for (int r = 0; r < rows; ++r) {
            auto vals = fields(rd.expect());
            if (static_cast<int>(vals.size()) != cols)
                throw ParseError("expected " + std::to_string(cols) + " entries", rd.line(), 1);
            for (int c = 0; c < cols; ++c) {
                const uint64_t v = parse_u64(vals[static_cast<size_t>(c)]);
                if (v >= q) throw ParseError("matrix entry not reduced mod q", rd.line(), c + 1);
                m(r, c) = v;
            }
        }
        return m;
    };

    auto read_symbolic = [&](const std::string& name) {
        auto hd = fields(rd.expect());
        if (hd.size() != 3 || hd[0] != name) throw ParseError("expected '" + name + " rows cols'", rd.line(), 1);
        const int rows = static_cast<int>(parse_u64(hd[1]));
        const int cols = static_cast<int>(parse_u64(hd[2]));
        SymbolicMatrix m(rows, cols);
        std::vector<std::string> names;
        auto var_id = [&](const std::string& vn) -> VarId {
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == vn) return static_cast<VarId>(i);
            names.push_back(vn);
            return m.add_variable(vn);
        };
        for (int r = 0; r < rows; ++r) {
            auto toks = fields(rd.expect());
            if (static_cast<int>(toks.size()) != cols)
                throw ParseError("expected " + std::to_string(cols) + " entries", rd.line(), 1);
            for (int c = 0; c < cols; ++c) {
                const std::string& tok = toks[static_cast<size_t>(c)];
                if (tok == "0") continue;
                if (tok == "1") {
                    m.set_unit(r, c);
                    continue;
                }
                Monomial mono;
                size_t start = 0;
                while (start <= tok.size()) {
                    size_t star = tok.find('*', start);
                    std::string piece = tok.substr(start, star == std::string::npos ? std::string::npos : star - start);
                    if (piece.empty()) throw ParseError("malformed monomial '" + tok + "'", rd.line(), c + 1);
                    mono.factors.push_back(var_id(piece));
                    if (star == std::string::npos) break;
                    start = star + 1;
                }
                std::sort(mono.factors.begin(), mono.factors.end());
                m.set(r, c, std::move(mono));
            }
        }
        return m;
    };

    FieldMatrix grow = read_matrix("grow");
    FieldMatrix gcol = read_matrix("gcol");
    SymbolicMatrix sym_grow = read_symbolic("symgrow");
    SymbolicMatrix sym_gcol = read_symbolic("symgcol");

    auto al = fields(rd.expect());
    if (al.size() != 2 || al[0] != "assignment") throw ParseError("expected 'assignment count'", rd.line(), 1);
    const uint64_t count = parse_u64(al[1]);
    std::vector<std::pair<std::string, uint64_t>> assignment;
    for (uint64_t i = 0; i < count; ++i) {
        auto av = fields(rd.expect());
        if (av.size() != 2) throw ParseError("expected 'name value'", rd.line(), 1);
        const uint64_t v = parse_u64(av[1]);
        if (v == 0 || v >= q) throw ParseError("assigned value out of [1, q-1]", rd.line(), 1);
        assignment.emplace_back(av[0], v);
    }

    // integrity: the stored matrices must equal the symbolic structure under
    // the stored assignment
    auto values_for = [&](const SymbolicMatrix& m) {
        std::vector<uint64_t> vals;
        for (const std::string& vn : m.var_names()) {
            bool found = false;
            for (const auto& [name, value] : assignment)
                if (name == vn) {
                    vals.push_back(value);
                    found = true;
                    break;
                }
            if (!found) throw ParseError("variable '" + vn + "' missing from assignment", rd.line(), 1);
        }
        return vals;
    };
    if (evaluate(sym_grow, field, values_for(sym_grow)) != grow)
        throw ParseError("row generator does not match its symbolic structure", rd.line(), 1);
    if (evaluate(sym_gcol, field, values_for(sym_gcol)) != gcol)
        throw ParseError("column generator does not match its symbolic structure", rd.line(), 1);
    if (grow.rows() != topo.n - topo.b || grow.cols() != topo.n || gcol.rows() != topo.m - topo.a ||
        gcol.cols() != topo.m)
        throw ParseError("generator shapes do not match the topology", rd.line(), 1);

    return {topo, q, seed, std::move(grow), std::move(gcol), std::move(sym_grow), std::move(sym_gcol),
            std::move(assignment)};
}

/// Received-word grid: m lines of n whitespace-separated tokens, each a
/// decimal field element or '?' for an erased cell.
inline PartialCodeword parse_received(std::string_view text, const Topology& topo, const Field& field) {
    detail::LineReader rd(text);
    PartialCodeword pc{topo, std::vector<std::optional<uint64_t>>(static_cast<size_t>(topo.cells()))};
    for (int i = 0; i < topo.m; ++i) {
        std::string line;
        do {
            if (!rd.next(line)) throw ParseError("expected " + std::to_string(topo.m) + " grid rows", rd.line(), 1);
        } while (line.find_first_not_of(" \t\r") == std::string::npos);
        std::istringstream is(line);
        std::string tok;
        for (int j = 0; j < topo.n; ++j) {
            if (!(is >> tok)) throw ParseError("expected " + std::to_string(topo.n) + " cells per row", rd.line(), j + 1);
            if (tok == "?") continue;
            try {
                if (tok.empty() || tok[0] < '0' || tok[0] > '9') throw std::invalid_argument("sign");
                size_t used = 0;
                uint64_t v = std::stoull(tok, &used);
                if (used != tok.size()) throw std::invalid_argument("trail");
                if (v >= field.modulus()) throw std::invalid_argument("range");
                pc.cells[static_cast<size_t>(i * topo.n + j)] = v;
            } catch (const std::exception&) {
                throw ParseError("cell must be '?' or a value in [0, q-1], got '" + tok + "'", rd.line(), j + 1);
            }
        }
        if (is >> tok) throw ParseError("trailing tokens after " + std::to_string(topo.n) + " cells", rd.line(), topo.n + 1);
    }
    return pc;
}

inline std::string format_received(const PartialCodeword& pc) {
    std::string out;
    for (int i = 0; i < pc.topo.m; ++i) {
        for (int j = 0; j < pc.topo.n; ++j) {
            if (j) out += " ";
            const auto& cell = pc.cells[static_cast<size_t>(i * pc.topo.n + j)];
            out += cell ? std::to_string(*cell) : "?";
        }
        out += "\n";
    }
    return out;
}

inline std::string format_codeword(const Codeword& cw) {
    std::string out;
    for (int i = 1; i <= cw.topo.m; ++i) {
        for (int j = 1; j <= cw.topo.n; ++j) {
            if (j > 1) out += " ";
            out += std::to_string(cw.at(i, j));
        }
        out += "\n";
    }
    return out;
}

} // namespace mrc
