#include "fraisse/structure_io.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace fraisse {

namespace {

const std::array<std::string_view, 7> kReserved = {
    "fraisse-structure", "v1", "signature", "points", "dist", "pred", "const",
};

bool reserved_word(std::string_view w) {
    for (std::string_view r : kReserved) {
        if (w == r) return true;
    }
    return w == "diameter";
}

bool serializable_name(std::string_view w) {
    if (w.empty() || reserved_word(w)) return false;
    for (char c : w) {
        if (c == '#' || c == '=' || std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

struct Token {
    std::string text;
    int line;
    int column;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view row = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        if (std::size_t hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
        std::size_t i = 0;
        while (i < row.size()) {
            while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) ++i;
            std::size_t start = i;
            while (i < row.size() && !std::isspace(static_cast<unsigned char>(row[i]))) ++i;
            if (i > start) out.push_back({std::string(row.substr(start, i - start)), line, static_cast<int>(start) + 1});
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
        ++line;
    }
    return out;
}

class Cursor {
  public:
    explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    bool done() const { return at_ >= tokens_.size(); }

    const Token& peek() const {
        if (done()) throw ParseError("unexpected end of input", last_line(), 1);
        return tokens_[at_];
    }

    Token take(std::string_view what) {
        if (done()) throw ParseError("unexpected end of input, expected " + std::string(what), last_line(), 1);
        return tokens_[at_++];
    }

    void expect(std::string_view literal) {
        Token t = take("'" + std::string(literal) + "'");
        if (t.text != literal)
            throw ParseError("expected '" + std::string(literal) + "', found '" + t.text + "'", t.line, t.column);
    }

    Rational rational(std::string_view what) {
        Token t = take(what);
        auto q = parse_rational(t.text);
        if (!q) throw ParseError("expected a rational numeral for " + std::string(what) + ", found '" + t.text + "'",
                                 t.line, t.column);
        return *q;
    }

    int small_int(std::string_view what, int lo, int hi) {
        Token t = take(what);
        auto q = parse_rational(t.text);
        if (!q || denominator(*q) != 1 || *q < lo || *q > hi)
            throw ParseError("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] for " +
                                 std::string(what) + ", found '" + t.text + "'",
                             t.line, t.column);
        return static_cast<int>(numerator(*q));
    }

    std::string name(std::string_view what) {
        Token t = take(what);
        if (reserved_word(t.text))
            throw ParseError("'" + t.text + "' is reserved and cannot name a " + std::string(what), t.line, t.column);
        return t.text;
    }

    int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  private:
    std::vector<Token> tokens_;
    std::size_t at_ = 0;
};

}  // namespace

MetricStructure parse_structure(std::string_view text) {
    Cursor cur(tokenize(text));
    cur.expect("fraisse-structure");
    cur.expect("v1");

    MetricStructure s;
    cur.expect("signature");
    while (cur.peek().text != "points") {
        if (cur.peek().text == "const") {
            cur.take("const");
            s.signature.constants.push_back(cur.name("constant"));
        } else if (cur.peek().text == "diameter") {
            Token kw = cur.take("diameter");
            if (s.signature.diameter) throw ParseError("diameter declared twice", kw.line, kw.column);
            s.signature.diameter = cur.rational("the diameter cap");
        } else {
            PredicateDecl decl;
            decl.name = cur.name("predicate");
            decl.arity = cur.small_int("arity of '" + decl.name + "'", 1, 8);
            decl.lipschitz = cur.rational("the Lipschitz constant of '" + decl.name + "'");
            decl.lo = cur.rational("the lower range bound of '" + decl.name + "'");
            decl.hi = cur.rational("the upper range bound of '" + decl.name + "'");
            s.signature.predicates.push_back(std::move(decl));
        }
    }

    cur.expect("points");
    while (cur.peek().text != "dist") s.points.push_back(cur.name("point label"));
    const int n = s.size();

    cur.expect("dist");
    s.dist.assign(static_cast<std::size_t>(n) * n, Rational(0));
    for (int i = 1; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            Rational q = cur.rational("d(" + s.points[i] + "," + s.points[j] + ")");
            s.d(i, j) = q;
            s.d(j, i) = std::move(q);
        }
    }

    std::vector<bool> table_seen(s.signature.predicates.size(), false);
    s.tables.resize(s.signature.predicates.size());
    std::vector<bool> const_seen(s.signature.constants.size(), false);
    s.constant_points.assign(s.signature.constants.size(), -1);

    while (!cur.done()) {
        Token kw = cur.take("'pred' or 'const'");
        if (kw.text == "pred") {
            Token nm = cur.take("a predicate name");
            int p = s.signature.predicate_index(nm.text);
            if (p < 0) throw ParseError("table for undeclared predicate '" + nm.text + "'", nm.line, nm.column);
            if (table_seen[p]) throw ParseError("duplicate table for predicate '" + nm.text + "'", nm.line, nm.column);
            table_seen[p] = true;
            std::size_t cells = 1;
            for (int i = 0; i < s.signature.predicates[p].arity; ++i) cells *= static_cast<std::size_t>(n);
            s.tables[p].reserve(cells);
            for (std::size_t i = 0; i < cells; ++i)
                s.tables[p].push_back(cur.rational("a value of '" + nm.text + "'"));
        } else if (kw.text == "const") {
            Token nm = cur.take("a constant name");
            int c = s.signature.constant_index(nm.text);
            if (c < 0) throw ParseError("assignment to undeclared constant '" + nm.text + "'", nm.line, nm.column);
            if (const_seen[c]) throw ParseError("duplicate assignment to constant '" + nm.text + "'", nm.line, nm.column);
            const_seen[c] = true;
            cur.expect("=");
            Token lbl = cur.take("a point label");
            int idx = s.point_index(lbl.text);
            if (idx < 0) throw ParseError("constant '" + nm.text + "' assigned to unknown point '" + lbl.text + "'",
                                          lbl.line, lbl.column);
            s.constant_points[c] = idx;
        } else {
            throw ParseError("expected 'pred' or 'const', found '" + kw.text + "'", kw.line, kw.column);
        }
    }

    for (std::size_t p = 0; p < table_seen.size(); ++p) {
        if (!table_seen[p])
            throw ParseError("missing table for predicate '" + s.signature.predicates[p].name + "'", cur.last_line(), 1);
    }
    for (std::size_t c = 0; c < const_seen.size(); ++c) {
        if (!const_seen[c])
            throw ParseError("missing assignment for constant '" + s.signature.constants[c] + "'", cur.last_line(), 1);
    }
    return s;
}

StructPtr load_structure(std::string_view text) { return make_structure(parse_structure(text)); }

std::string serialize_structure(const MetricStructure& s) {
    const int n = s.size();
    if (s.dist.size() != static_cast<std::size_t>(n) * n || s.tables.size() != s.signature.predicates.size() ||
        s.constant_points.size() != s.signature.constants.size())
        throw DomainError("serialize: malformed structure (wrong matrix or table shape)");
    for (const PredicateDecl& decl : s.signature.predicates) {
        if (!serializable_name(decl.name)) throw DomainError("serialize: predicate name '" + decl.name + "' not representable");
        if (decl.arity < 1) throw DomainError("serialize: predicate '" + decl.name + "' has arity < 1");
    }
    for (const std::string& c : s.signature.constants) {
        if (!serializable_name(c)) throw DomainError("serialize: constant name '" + c + "' not representable");
    }
    for (const std::string& p : s.points) {
        if (!serializable_name(p)) throw DomainError("serialize: point label '" + p + "' not representable");
    }
    for (int i = 0; i < n; ++i) {
        if (s.d(i, i) != 0) throw DomainError("serialize: nonzero diagonal entry not representable");
        for (int j = 0; j < i; ++j) {
            if (s.d(i, j) != s.d(j, i)) throw DomainError("serialize: asymmetric matrix not representable");
        }
    }
    for (int c : s.constant_points) {
        if (c < 0 || c >= n) throw DomainError("serialize: constant interpretation out of range");
    }

    std::ostringstream os;
    os << "fraisse-structure v1\n\nsignature\n";
    for (const PredicateDecl& decl : s.signature.predicates) {
        os << "  " << decl.name << " " << decl.arity << " " << to_string(decl.lipschitz) << " "
           << to_string(decl.lo) << " " << to_string(decl.hi) << "\n";
    }
    for (const std::string& c : s.signature.constants) os << "  const " << c << "\n";
    if (s.signature.diameter) os << "  diameter " << to_string(*s.signature.diameter) << "\n";

    os << "\npoints\n ";
    for (const std::string& p : s.points) os << " " << p;
    os << "\n\ndist\n";
    for (int i = 1; i < n; ++i) {
        os << " ";
        for (int j = 0; j < i; ++j) os << " " << to_string(s.d(i, j));
        os << "\n";
    }

    for (std::size_t p = 0; p < s.tables.size(); ++p) {
        os << "\npred " << s.signature.predicates[p].name << "\n";
        const std::vector<Rational>& table = s.tables[p];
        for (std::size_t i = 0; i < table.size(); ++i) {
            os << (i % n == 0 ? " " : "") << " " << to_string(table[i]);
            if (i % n == static_cast<std::size_t>(n) - 1) os << "\n";
        }
        if (table.empty() || n == 0) os << "\n";
    }

    if (!s.constant_points.empty()) os << "\n";
    for (std::size_t c = 0; c < s.constant_points.size(); ++c)
        os << "const " << s.signature.constants[c] << " = " << s.points[s.constant_points[c]] << "\n";
    return os.str();
}

StructPtr load_structure_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open structure file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_structure(buf.str());
    } catch (const DomainError& e) {
        throw DomainError(path + ": " + e.what());
    }
}

void write_structure_file(const std::string& path, const MetricStructure& s) {
    std::string text = serialize_structure(s);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write structure file '" + path + "'");
    out << text;
}

}  // namespace fraisse
