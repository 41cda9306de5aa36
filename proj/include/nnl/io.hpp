#pragma once

#include <map>
#include <array>

#include <Eigen/Sparse>
#include <nlohmann/json.hpp>

#include "nnl/grid.hpp"

namespace nnl {

/// Shortest exact decimal form used in all text outputs (%.17g).
std::string format_double(double v);

/// Cell table: cell,ix[,iy],cx[,cy],volume,tag — one row per active cell in
/// dof order.
void write_grid_csv(const std::string& path, const Grid& grid);

/// Field table: cell,cx[,cy],tag,value — one row per active cell in dof order.
void write_field_csv(const std::string& path, const Grid& grid, const Eigen::VectorXd& values);

/// Reads a field table back: rows are matched to dofs by the `cell` column
/// (values default to 0 on cells without a row).  Only the `cell` and `value`
/// columns are interpreted; duplicates or out-of-range cells are errors.
Eigen::VectorXd read_field_csv(const std::string& path, const Grid& grid);

/// Coordinate-format Matrix Market output (1-based indices, general real).
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& m);

/// JSON value for a double: finite numbers stay numbers, infinities become
/// the strings "inf"/"-inf" (JSON has no infinity literal).
nlohmann::ordered_json json_number(double v);

/// Writes a report with a trailing newline; content only, no timestamps.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

/// Cell-pair kernel values keyed by lattice indices (ix,iy,jx,jy; the y
/// components are 0 in one dimension).
struct KernelTableData {
    int dim = 1;
    bool symmetric = true;
    std::optional<double> horizon;
    std::map<std::array<int, 4>, double> values;
};

/// CSV with header i,j,value (1-D) or ix,iy,jx,jy,value (2-D): kernel values
/// between lattice cells, midpoint quadrature semantics.
KernelTableData read_kernel_table_csv(const std::string& path, int dim);

/// Kernel evaluating table lookups at cell centers: a point maps to the
/// lattice cell floor((p − anchor)/h) with the anchor at the domain's minimal
/// corner; absent pairs evaluate to 0.
Kernel make_table_kernel(const OmegaSpec& omega, double h, KernelTableData data);

} // namespace nnl
