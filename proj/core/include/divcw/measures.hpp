#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace divcw {

using VertexSet = std::set<std::string>;

// Checked unsigned arithmetic: throws overflow_error instead of wrapping.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

// |S1 xor S2|: number of vertices in exactly one of the two sets.
std::uint64_t hamming(const VertexSet& s1, const VertexSet& s2);

// A diversity measure in Venn form: a function from membership vectors
// (which of the r sets contain a given vertex) to non-negative values,
// stored as an explicit table of 2^r entries.  Bit i of the table index is
// the membership of set i (i = 0 is the first set).
struct VennMeasure {
    int r = 0;
    std::vector<std::uint64_t> table;  // size 2^r
    std::string name;                  // "sum", "star", "table:...", free-form

    std::uint64_t at(unsigned membership) const { return table.at(membership); }
    std::uint64_t at_empty() const { return table.at(0); }  // f(0^r)

    // True iff the value depends only on the popcount of the membership
    // vector (all permutation-invariant measures have this form).
    bool symmetric() const;
};

inline constexpr int kMaxMeasureArity = 16;

// Sum-of-pairwise-Hamming-distances in Venn form: f(m) = ones(m) * zeros(m).
VennMeasure divsum_as_venn(int r);
// f(m) = r^2 - ones(m)^2.  Note f(0^r) = r^2 > 0.
VennMeasure divstar(int r);

// Loads a measure table:
//   r <arity>
//   <bitstring> <value>     (2^r lines; leftmost bit = first set)
// Every membership vector must appear exactly once.
VennMeasure parse_measure(std::istream& in, const std::string& name = "table");
VennMeasure parse_measure_file(const std::string& path);
std::string format_measure(const VennMeasure& f);

// Venn-form diversity of an r-tuple of sets: sum over the universe of
// f(membership vector).  Every set must be a subset of the universe and
// sets.size() must equal f.r.
std::uint64_t venn_div(const VennMeasure& f, const std::vector<VertexSet>& sets,
                       const std::vector<std::string>& universe);

// Reference implementations straight from the definitions.
// Sum of pairwise Hamming distances over all unordered pairs.
std::uint64_t div_sum(const std::vector<VertexSet>& sets);
// Minimum pairwise Hamming distance; requires at least two sets.
std::uint64_t div_min(const std::vector<VertexSet>& sets);

}  // namespace divcw
