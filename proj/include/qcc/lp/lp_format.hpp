#pragma once

#include <iosfwd>

#include "qcc/lp/linear_program.hpp"

namespace qcc::lp {

// Writes `program` in CPLEX LP text format, for cross-checking with external
// solvers. Names are sanitized to the format's identifier alphabet.
void write_lp_format(const LinearProgram& program, std::ostream& out);

}  // namespace qcc::lp
