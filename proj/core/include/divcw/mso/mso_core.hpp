#pragma once

#include <memory>
#include <string>

#include "divcw/dp_core.hpp"
#include "divcw/graph.hpp"
#include "divcw/mso/eval_tree.hpp"
#include "divcw/mso/formula.hpp"

namespace divcw::mso {

// True iff the graph of the decomposition satisfies the closed formula.
// Works for any prenex formula with at least one vertex variable and
// quantifier depth <= 6.
bool model_check(const Formula& f, const CwDecomposition& d, std::size_t budget = kDefaultArenaBudget);

// Compiles the formula into a dynamic-programming core over d.  The formula
// must start with 'exists set Z': witnesses correspond to choices of Z that
// make the rest of the formula true, and the extracted solution is Z.
// Throws input_error if the first quantifier is not an existential set
// variable or no vertex variable is quantified.
std::unique_ptr<DpCore> mso_core(const Formula& f, const CwDecomposition& d, const std::string& label = "mso",
                                 std::size_t budget = kDefaultArenaBudget);

}  // namespace divcw::mso
