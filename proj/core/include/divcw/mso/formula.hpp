#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace divcw::mso {

// Prenex MSO formulas over vertex-colored graphs (colors are not part of the
// logic; only adjacency, equality and set membership are):
//
//   formula := quantifier+ ':' expr
//   quantifier := ('exists' | 'forall') ('set' | 'vertex') IDENT
//   expr := implies                 ( '->' is loosest, right-associative )
//   implies := or ('->' implies)?
//   or := and ('|' and)*            ( '&' binds tighter than '|' )
//   and := unary ('&' unary)*
//   unary := '!' unary | '(' expr ')' | atom
//   atom := 'adj' '(' IDENT ',' IDENT ')' | IDENT '=' IDENT | IDENT 'in' IDENT
//
// All variables must be bound by the prefix; the matrix is quantifier-free.

enum class QuantKind { Exists, Forall };
enum class VarSort { Vertex, Set };

struct Quantifier {
    QuantKind kind;
    VarSort sort;
    std::string name;
};

// Matrix AST.  Variable references are indices into the prefix, split by
// sort: vertex_index counts vertex variables in prefix order, set_index
// counts set variables.
struct Expr {
    enum class Op { Adj, Eq, In, Not, And, Or, Implies };
    Op op;
    int lhs_vertex = -1;  // Adj/Eq/In: first vertex variable (vertex_index)
    int rhs_vertex = -1;  // Adj/Eq: second vertex variable
    int set_var = -1;     // In: set variable (set_index)
    std::unique_ptr<Expr> left, right;  // Not uses left only
};

struct Formula {
    std::vector<Quantifier> prefix;
    std::unique_ptr<Expr> matrix;
    std::string text;  // original source, for labels

    int depth() const { return static_cast<int>(prefix.size()); }
    int num_vertex_vars() const;
    int num_set_vars() const;

    // For prefix position i: the index of that variable within its sort.
    int sort_index(int i) const;
};

// Throws parse_error on syntax errors, unknown or duplicate variables, sort
// mismatches (adj/= need vertex variables, 'in' needs vertex-in-set), and
// quantifiers appearing inside the matrix.
Formula parse_formula(const std::string& text);
Formula parse_formula_file(const std::string& path);

}  // namespace divcw::mso
