#include "divcw/measures.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>
#include <sstream>

#include "divcw/errors.hpp"

namespace divcw {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw overflow_error("64-bit addition overflow");
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw overflow_error("64-bit multiplication overflow");
    return out;
}

std::uint64_t hamming(const VertexSet& s1, const VertexSet& s2) {
    std::uint64_t count = 0;
    auto it1 = s1.begin(), it2 = s2.begin();
    while (it1 != s1.end() && it2 != s2.end()) {
        if (*it1 == *it2) {
            ++it1;
            ++it2;
        } else if (*it1 < *it2) {
            ++count;
            ++it1;
        } else {
            ++count;
            ++it2;
        }
    }
    count += std::distance(it1, s1.end());
    count += std::distance(it2, s2.end());
    return count;
}

bool VennMeasure::symmetric() const {
    std::vector<std::uint64_t> by_popcount(r + 1, 0);
    std::vector<bool> seen(r + 1, false);
    for (unsigned m = 0; m < table.size(); ++m) {
        int ones = std::popcount(m);
        if (!seen[ones]) {
            seen[ones] = true;
            by_popcount[ones] = table[m];
        } else if (by_popcount[ones] != table[m]) {
            return false;
        }
    }
    return true;
}

namespace {

void check_arity(int r) {
    if (r < 1) throw input_error("measure arity must be at least 1");
    if (r > kMaxMeasureArity)
        throw input_error("measure arity " + std::to_string(r) + " exceeds the supported maximum " +
                          std::to_string(kMaxMeasureArity));
}

}  // namespace

VennMeasure divsum_as_venn(int r) {
    check_arity(r);
    VennMeasure f;
    f.r = r;
    f.name = "sum";
    f.table.resize(std::size_t{1} << r);
    for (unsigned m = 0; m < f.table.size(); ++m) {
        std::uint64_t ones = std::popcount(m);
        f.table[m] = ones * (static_cast<std::uint64_t>(r) - ones);
    }
    return f;
}

VennMeasure divstar(int r) {
    check_arity(r);
    VennMeasure f;
    f.r = r;
    f.name = "star";
    f.table.resize(std::size_t{1} << r);
    for (unsigned m = 0; m < f.table.size(); ++m) {
        std::uint64_t ones = std::popcount(m);
        f.table[m] = static_cast<std::uint64_t>(r) * r - ones * ones;
    }
    return f;
}

VennMeasure parse_measure(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    auto next_line = [&](std::vector<std::string>& tokens) {
        tokens.clear();
        while (std::getline(in, line)) {
            ++lineno;
            std::string stripped = line.substr(0, line.find('#'));
            std::istringstream ss(stripped);
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> tokens;
    if (!next_line(tokens) || tokens.size() != 2 || tokens[0] != "r")
        throw parse_error("expected 'r <arity>' header", lineno == 0 ? 1 : lineno, 1);
    int r = 0;
    try {
        r = std::stoi(tokens[1]);
    } catch (const std::exception&) {
        throw parse_error("bad arity '" + tokens[1] + "'", lineno, 3);
    }
    check_arity(r);

    VennMeasure f;
    f.r = r;
    f.name = name;
    f.table.assign(std::size_t{1} << r, 0);
    std::vector<bool> seen(f.table.size(), false);
    while (next_line(tokens)) {
        if (tokens.size() != 2) throw parse_error("expected '<bitstring> <value>'", lineno, 1);
        const std::string& bits = tokens[0];
        if (static_cast<int>(bits.size()) != r)
            throw parse_error("bitstring '" + bits + "' must have length " + std::to_string(r), lineno, 1);
        unsigned m = 0;
        for (int i = 0; i < r; ++i) {
            if (bits[i] == '1')
                m |= 1u << i;  // leftmost character is set 0 (the first set)
            else if (bits[i] != '0')
                throw parse_error("bitstring '" + bits + "' must be over {0,1}", lineno, 1);
        }
        if (seen[m]) throw parse_error("duplicate membership vector '" + bits + "'", lineno, 1);
        seen[m] = true;
        try {
            f.table[m] = std::stoull(tokens[1]);
        } catch (const std::exception&) {
            throw parse_error("bad value '" + tokens[1] + "'", lineno, 1);
        }
    }
    for (unsigned m = 0; m < seen.size(); ++m)
        if (!seen[m]) {
            std::string bits(r, '0');
            for (int i = 0; i < r; ++i)
                if (m & (1u << i)) bits[i] = '1';
            throw input_error("measure table is missing membership vector '" + bits + "'");
        }
    return f;
}

VennMeasure parse_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open measure file '" + path + "'");
    return parse_measure(in, "table:" + path);
}

std::string format_measure(const VennMeasure& f) {
    std::ostringstream out;
    out << "r " << f.r << '\n';
    for (unsigned m = 0; m < f.table.size(); ++m) {
        std::string bits(f.r, '0');
        for (int i = 0; i < f.r; ++i)
            if (m & (1u << i)) bits[i] = '1';
        out << bits << ' ' << f.table[m] << '\n';
    }
    return out.str();
}

std::uint64_t venn_div(const VennMeasure& f, const std::vector<VertexSet>& sets,
                       const std::vector<std::string>& universe) {
    if (static_cast<int>(sets.size()) != f.r)
        throw input_error("measure arity " + std::to_string(f.r) + " does not match tuple size " +
                          std::to_string(sets.size()));
    std::set<std::string> known(universe.begin(), universe.end());
    for (const VertexSet& s : sets)
        for (const std::string& v : s)
            if (!known.count(v)) throw input_error("set vertex '" + v + "' is not in the universe");

    std::uint64_t total = 0;
    for (const std::string& v : universe) {
        unsigned m = 0;
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (sets[i].count(v)) m |= 1u << i;
        total = checked_add(total, f.at(m));
    }
    return total;
}

std::uint64_t div_sum(const std::vector<VertexSet>& sets) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) total = checked_add(total, hamming(sets[i], sets[j]));
    return total;
}

std::uint64_t div_min(const std::vector<VertexSet>& sets) {
    if (sets.size() < 2) throw input_error("min-diversity needs at least two sets");
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) best = std::min(best, hamming(sets[i], sets[j]));
    return best;
}

}  // namespace divcw
