#pragma once

// Plot-ready CSV output. Numbers are written with 17 significant digits so
// identical runs produce byte-identical files.

#include <ostream>
#include <string>
#include <vector>

#include "fracpmp/core.hpp"

namespace fracpmp {

std::string format_number(double x);

/// Header `t,y1..yn,u1..um,psi1..psin,hamiltonian,residual`, one row per
/// node. Empty `hamiltonian` / `residual` columns are written as 0.
void write_solution_csv(std::ostream& out, const Trajectory& y, const ControlSignal& u,
                        const AdjointTrajectory* psi, const std::vector<double>& hamiltonian,
                        const std::vector<double>& residual);

/// Generic table: header line then rows of numbers.
void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Opens `path` for writing; throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace fracpmp
