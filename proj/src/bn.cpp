#include "mts/bn.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mts {

bool UnateDnf::eval(const Configuration& x) const {
    if (is_constant())
        return *constant;
    for (const auto& clause : clauses) {
        bool sat = true;
        for (const auto& lit : clause) {
            if (static_cast<bool>(x[lit.var]) != lit.positive) {
                sat = false;
                break;
            }
        }
        if (sat)
            return true;
    }
    return false;
}

void UnateDnf::normalize() {
    if (is_constant())
        return;
    for (auto& clause : clauses) {
        std::sort(clause.begin(), clause.end());
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    }
    // shorter clauses first so a kept clause can only subsume later ones
    std::sort(clauses.begin(), clauses.end(),
              [](const DnfClause& a, const DnfClause& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    std::vector<DnfClause> kept;
    for (const auto& c : clauses) {
        bool subsumed = false;
        for (const auto& k : kept) {
            if (std::includes(c.begin(), c.end(), k.begin(), k.end())) {
                subsumed = true;
                break;
            }
        }
        if (!subsumed)
            kept.push_back(c);
    }
    clauses = std::move(kept);
    if (clauses.empty())
        constant = false;
    else
        constant.reset();
}

bool InfluenceGraph::locally_monotone() const {
    for (const auto& e : pos_edges)
        if (neg_edges.count(e))
            return false;
    return true;
}

BooleanNetwork::BooleanNetwork(std::vector<std::string> names,
                               std::vector<UnateDnf> functions)
    : names_(std::move(names)), functions_(std::move(functions)) {
    if (names_.size() != functions_.size())
        throw std::invalid_argument("component/function count mismatch");
    for (int i = 0; i < size(); ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw std::invalid_argument("duplicate component name: " + names_[i]);
    }
}

int BooleanNetwork::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

Configuration BooleanNetwork::image(const Configuration& x) const {
    Configuration y(size());
    for (int i = 0; i < size(); ++i)
        y[i] = eval_local(i, x);
    return y;
}

InfluenceGraph BooleanNetwork::influence_graph() const {
    InfluenceGraph g;
    g.n = size();
    for (int j = 0; j < size(); ++j) {
        for (const auto& clause : functions_[j].clauses) {
            for (const auto& lit : clause) {
                if (lit.positive)
                    g.pos_edges.emplace(lit.var, j);
                else
                    g.neg_edges.emplace(lit.var, j);
            }
        }
    }
    return g;
}

bool BooleanNetwork::locally_monotone() const {
    return influence_graph().locally_monotone();
}

BooleanNetwork BooleanNetwork::perturbed(const PartialAssignment& p) const {
    std::vector<UnateDnf> fs = functions_;
    for (const auto& [i, b] : p) {
        if (i < 0 || i >= size())
            throw std::out_of_range("perturbation index out of range");
        fs[i] = UnateDnf::make_constant(b);
    }
    return BooleanNetwork(names_, std::move(fs));
}

bool matches(const Configuration& x, const PartialAssignment& m) {
    for (const auto& [i, b] : m)
        if (static_cast<bool>(x[i]) != b)
            return false;
    return true;
}

PartialAssignment override_assignment(const PartialAssignment& p,
                                      const PartialAssignment& q) {
    PartialAssignment r = p;
    for (const auto& [i, b] : q)
        r[i] = b;
    return r;
}

// ---------------------------------------------------------------------------
// bnet parsing
// ---------------------------------------------------------------------------

namespace {

// Expression AST used only during parsing.
struct Expr {
    enum Kind { Var, Const, Not, And, Or } kind;
    int var = -1;
    bool value = false;
    std::vector<Expr> args;
};

class ExprParser {
public:
    ExprParser(const std::string& text, int line_no,
               const std::map<std::string, int>& index)
        : text_(text), line_(line_no), index_(index) {}

    Expr parse() {
        Expr e = parse_or();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    Expr parse_or() {
        Expr e = parse_and();
        skip_ws();
        while (peek() == '|') {
            ++pos_;
            Expr rhs = parse_and();
            if (e.kind != Expr::Or) {
                Expr o{Expr::Or};
                o.args.push_back(std::move(e));
                e = std::move(o);
            }
            e.args.push_back(std::move(rhs));
            skip_ws();
        }
        return e;
    }

    Expr parse_and() {
        Expr e = parse_factor();
        skip_ws();
        while (peek() == '&') {
            ++pos_;
            Expr rhs = parse_factor();
            if (e.kind != Expr::And) {
                Expr a{Expr::And};
                a.args.push_back(std::move(e));
                e = std::move(a);
            }
            e.args.push_back(std::move(rhs));
            skip_ws();
        }
        return e;
    }

    Expr parse_factor() {
        skip_ws();
        char c = peek();
        if (c == '!') {
            ++pos_;
            Expr n{Expr::Not};
            n.args.push_back(parse_factor());
            return n;
        }
        if (c == '(') {
            ++pos_;
            Expr e = parse_or();
            skip_ws();
            if (peek() != ')')
                fail("expected ')'");
            ++pos_;
            return e;
        }
        if (c == '0' || c == '1') {
            // a lone 0/1 literal; identifiers must not start with a digit
            ++pos_;
            Expr e{Expr::Const};
            e.value = (c == '1');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            auto it = index_.find(name);
            if (it == index_.end())
                throw ParseError("undefined component '" + name + "'", line_,
                                 static_cast<int>(start) + 1);
            Expr e{Expr::Var};
            e.var = it->second;
            return e;
        }
        fail(c == '\0' ? "unexpected end of expression"
                       : std::string("unexpected character '") + c + "'");
        return {};
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
    }

    const std::string& text_;
    int line_;
    const std::map<std::string, int>& index_;
    size_t pos_ = 0;
};

// Pushes negations to the leaves and distributes & over | to obtain a DNF
// as a list of literal conjunctions. Constants are folded on the fly.
void to_dnf(const Expr& e, bool negated, std::vector<DnfClause>& out) {
    switch (e.kind) {
    case Expr::Var:
        out.push_back({DnfLiteral{e.var, !negated}});
        return;
    case Expr::Const:
        if (e.value != negated)
            out.push_back({});  // true: one empty clause
        // false: no clause
        return;
    case Expr::Not:
        to_dnf(e.args[0], !negated, out);
        return;
    case Expr::And:
    case Expr::Or: {
        bool conj = (e.kind == Expr::And) != negated;
        if (!conj) {
            for (const auto& a : e.args)
                to_dnf(a, negated, out);
            return;
        }
        std::vector<DnfClause> acc{{}};
        for (const auto& a : e.args) {
            std::vector<DnfClause> sub;
            to_dnf(a, negated, sub);
            std::vector<DnfClause> next;
            next.reserve(acc.size() * sub.size());
            for (const auto& c1 : acc) {
                for (const auto& c2 : sub) {
                    DnfClause merged = c1;
                    merged.insert(merged.end(), c2.begin(), c2.end());
                    next.push_back(std::move(merged));
                }
            }
            acc = std::move(next);
        }
        for (auto& c : acc)
            out.push_back(std::move(c));
        return;
    }
    }
}

}  // namespace

BooleanNetwork BooleanNetwork::parse_bnet(const std::string& text) {
    // first pass: component declarations in file order
    std::vector<std::string> names;
    std::vector<std::string> exprs;
    std::vector<int> line_nos;
    std::map<std::string, int> index;
    {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            // skip the conventional header line
            if (line.compare(first, 8, "targets,") == 0 ||
                line.compare(first, 7, "targets") == 0)
                if (line.find("factors") != std::string::npos)
                    continue;
            size_t comma = line.find(',');
            if (comma == std::string::npos)
                throw ParseError("expected `name, expression`", line_no, 1);
            std::string name = line.substr(0, comma);
            name.erase(0, name.find_first_not_of(" \t"));
            name.erase(name.find_last_not_of(" \t\r") + 1);
            if (name.empty())
                throw ParseError("empty component name", line_no, 1);
            for (char c : name)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                    throw ParseError("invalid component name '" + name + "'",
                                     line_no, 1);
            if (index.count(name))
                throw ParseError("duplicate component '" + name + "'", line_no, 1);
            index.emplace(name, static_cast<int>(names.size()));
            names.push_back(name);
            exprs.push_back(line.substr(comma + 1));
            line_nos.push_back(line_no);
        }
    }

    std::vector<UnateDnf> functions;
    functions.reserve(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
        ExprParser parser(exprs[i], line_nos[i], index);
        Expr ast = parser.parse();
        std::vector<DnfClause> raw;
        to_dnf(ast, false, raw);

        // unateness check over the raw (unnormalized) DNF
        std::map<int, bool> sign;
        for (const auto& clause : raw) {
            for (const auto& lit : clause) {
                auto [it, inserted] = sign.emplace(lit.var, lit.positive);
                if (!inserted && it->second != lit.positive)
                    throw ParseError("component '" + names[lit.var] +
                                         "' occurs with both signs in the "
                                         "function of '" + names[i] +
                                         "' (network not locally monotone)",
                                     line_nos[i], 1);
            }
        }

        UnateDnf f;
        bool constant_true = false;
        for (auto& clause : raw) {
            if (clause.empty()) {
                constant_true = true;
                break;
            }
            f.clauses.push_back(std::move(clause));
        }
        if (constant_true) {
            f = UnateDnf::make_constant(true);
        } else if (f.clauses.empty()) {
            f = UnateDnf::make_constant(false);
        } else {
            f.normalize();
        }
        functions.push_back(std::move(f));
    }

    return BooleanNetwork(std::move(names), std::move(functions));
}

std::string BooleanNetwork::to_bnet() const {
    std::ostringstream out;
    for (int i = 0; i < size(); ++i) {
        out << names_[i] << ", ";
        const UnateDnf& f = functions_[i];
        if (f.is_constant()) {
            out << (*f.constant ? "1" : "0");
        } else {
            for (size_t c = 0; c < f.clauses.size(); ++c) {
                if (c)
                    out << " | ";
                bool paren = f.clauses.size() > 1 && f.clauses[c].size() > 1;
                if (paren)
                    out << "(";
                for (size_t l = 0; l < f.clauses[c].size(); ++l) {
                    if (l)
                        out << " & ";
                    if (!f.clauses[c][l].positive)
                        out << "!";
                    out << names_[f.clauses[c][l].var];
                }
                if (paren)
                    out << ")";
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace mts
