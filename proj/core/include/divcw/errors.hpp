#pragma once

#include <stdexcept>
#include <string>

namespace divcw {

// Malformed user input: bad file syntax, out-of-range parameters, invalid
// combinations of options.  The CLI maps this family to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in one of the text formats; carries a position.
class parse_error : public input_error {
public:
    parse_error(const std::string& what, int line, int column)
        : input_error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A computation refused to run because it would exceed a hard resource bound
// (oracle instance size, tuple-scan budget, evaluation-tree arena budget).
class budget_error : public input_error {
public:
    explicit budget_error(const std::string& what) : input_error(what) {}
};

// Unsigned 64-bit arithmetic would wrap.  Diversity values are exact or the
// run dies; they are never silently truncated.
class overflow_error : public std::runtime_error {
public:
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace divcw
