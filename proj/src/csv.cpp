#include "fracpmp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fracpmp {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_solution_csv(std::ostream& out, const Trajectory& y, const ControlSignal& u,
                        const AdjointTrajectory* psi, const std::vector<double>& hamiltonian,
                        const std::vector<double>& residual) {
    const Grid& grid = y.grid();
    const std::size_t N = grid.node_count();
    const std::size_t n = y.dim();
    const std::size_t m = u.dim();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",y" << i;
    for (std::size_t i = 1; i <= m; ++i) out << ",u" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",psi" << i;
    out << ",hamiltonian,residual\n";
    for (std::size_t j = 0; j <= N; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        out << format_number(grid.time(jj));
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            out << ',' << format_number(y.node(jj)[i]);
        }
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
            out << ',' << format_number(u.node(j)[i]);
        }
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            out << ',' << format_number(psi ? psi->node(jj)[i] : 0.0);
        }
        out << ',' << format_number(j < hamiltonian.size() ? hamiltonian[j] : 0.0);
        out << ',' << format_number(j < residual.size() ? residual[j] : 0.0) << '\n';
    }
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << contents;
    f.close();
    if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace fracpmp
