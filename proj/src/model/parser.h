#ifndef MODEL_PARSER_H
#define MODEL_PARSER_H

#include "model/problem.h"

#include <stdexcept>
#include <string>

namespace mtplan {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string &msg, int line_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
          line(line_) {}
};

// Parses a domain and problem (PDDL-like s-expression format, see README),
// grounds every action schema by full typed enumeration, computes the static
// mutex table and, when a metric is present, decompiles it into per-action
// costs. ParseError on malformed input, EvalError on bad constant arithmetic.
Problem load_problem_text(const std::string &domain_text,
                          const std::string &problem_text);

// Same, reading both files from disk. Throws std::runtime_error when a file
// cannot be read.
Problem load_problem_files(const std::string &domain_path,
                           const std::string &problem_path);

} // namespace mtplan

#endif
