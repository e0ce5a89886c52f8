#pragma once

#include <iosfwd>
#include <string>

#include "ltcam/conic/problem.hpp"

namespace ltcam::conic {

/// Writes a problem as plain text. Layout, one item per line:
///
///   ltcam-conic 1
///   n <variables> meq <equalities> min <inequalities> ncones <cones>
///   c <n values>
///   lower <n values>          (inf / -inf for unbounded)
///   upper <n values>
///   Aeq                       then meq lines, row-major: n coefficients
///                             followed by the right-hand side
///   Ain                       then min lines in the same layout (<= rows)
///   cones                     then one line per cone: size, then the
///                             variable indices with the head first
///
/// Numbers use 17 significant digits so the problem round-trips exactly.
void dump_problem(const ConicProblem& p, std::ostream& out);
void dump_problem(const ConicProblem& p, const std::string& path);

/// Reads the layout written by dump_problem.
ConicProblem read_problem(std::istream& in);

}  // namespace ltcam::conic
