#include "nnl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace nnl {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
    }
    return out;
}

} // namespace

void write_grid_csv(const std::string& path, const Grid& grid) {
    std::ofstream out = open_out(path);
    out << (grid.dim == 1 ? "cell,ix,cx,volume,tag\n" : "cell,ix,iy,cx,cy,volume,tag\n");
    for (int k = 0; k < grid.n_active(); ++k) {
        const GridCell& cell = grid.cells[grid.dof_to_cell[k]];
        out << k << ',' << cell.index[0] << ',';
        if (grid.dim == 2) out << cell.index[1] << ',';
        out << format_double(cell.center[0]) << ',';
        if (grid.dim == 2) out << format_double(cell.center[1]) << ',';
        out << format_double(grid.volume()) << ',' << to_string(cell.tag) << '\n';
    }
}

void write_field_csv(const std::string& path, const Grid& grid, const Eigen::VectorXd& values) {
    if (values.size() != grid.n_active())
        throw ContractError("write_field_csv: field/grid mismatch");
    std::ofstream out = open_out(path);
    out << (grid.dim == 1 ? "cell,cx,tag,value\n" : "cell,cx,cy,tag,value\n");
    for (int k = 0; k < grid.n_active(); ++k) {
        const Point c = grid.center_of_dof(k);
        out << k << ',' << format_double(c[0]) << ',';
        if (grid.dim == 2) out << format_double(c[1]) << ',';
        out << to_string(grid.tag_of_dof(k)) << ',' << format_double(values[k]) << '\n';
    }
}

Eigen::VectorXd read_field_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open field file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ContractError("field file '" + path + "' is empty");
    const std::vector<std::string> header = split_csv(line);
    int cell_col = -1, value_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "cell") cell_col = static_cast<int>(c);
        if (header[c] == "value") value_col = static_cast<int>(c);
    }
    if (cell_col < 0 || value_col < 0)
        throw ContractError("field file '" + path + "' needs 'cell' and 'value' columns");

    Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.n_active());
    std::vector<bool> seen(grid.n_active(), false);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_csv(line);
        if (static_cast<int>(f.size()) <= std::max(cell_col, value_col))
            throw ContractError("field file '" + path + "': short row at line " +
                                std::to_string(lineno));
        int cell = 0;
        double value = 0.0;
        try {
            cell = std::stoi(f[cell_col]);
            value = std::stod(f[value_col]);
        } catch (const std::exception&) {
            throw ContractError("field file '" + path + "': malformed row at line " +
                                std::to_string(lineno));
        }
        if (cell < 0 || cell >= grid.n_active())
            throw ContractError("field file '" + path + "': cell index out of range at line " +
                                std::to_string(lineno));
        if (seen[cell])
            throw ContractError("field file '" + path + "': duplicate cell at line " +
                                std::to_string(lineno));
        seen[cell] = true;
        out[cell] = value;
    }
    return out;
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& m) {
    std::ofstream out = open_out(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (int c = 0; c < m.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it)
            out << it.row() + 1 << ' ' << c + 1 << ' ' << format_double(it.value()) << '\n';
}

nlohmann::ordered_json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

KernelTableData read_kernel_table_csv(const std::string& path, int dim) {
    if (dim != 1 && dim != 2) throw ContractError("read_kernel_table_csv: dim must be 1 or 2");
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open kernel table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ContractError("kernel table '" + path + "' is empty");
    const std::vector<std::string> header = split_csv(line);
    const std::vector<std::string> expect =
        dim == 1 ? std::vector<std::string>{"i", "j", "value"}
                 : std::vector<std::string>{"ix", "iy", "jx", "jy", "value"};
    if (header != expect)
        throw ContractError("kernel table '" + path + "': header must be " +
                            (dim == 1 ? "'i,j,value'" : "'ix,iy,jx,jy,value'"));

    KernelTableData data;
    data.dim = dim;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != expect.size())
            throw ContractError("kernel table '" + path + "': wrong column count at line " +
                                std::to_string(lineno));
        try {
            std::array<int, 4> key{0, 0, 0, 0};
            if (dim == 1) {
                key[0] = std::stoi(f[0]);
                key[2] = std::stoi(f[1]);
            } else {
                key[0] = std::stoi(f[0]);
                key[1] = std::stoi(f[1]);
                key[2] = std::stoi(f[2]);
                key[3] = std::stoi(f[3]);
            }
            data.values[key] = std::stod(f.back());
        } catch (const std::exception&) {
            throw ContractError("kernel table '" + path + "': malformed row at line " +
                                std::to_string(lineno));
        }
    }
    return data;
}

Kernel make_table_kernel(const OmegaSpec& omega, double h, KernelTableData data) {
    if (h <= 0.0) throw ContractError("make_table_kernel: h must be positive");
    if (data.dim != omega.dim) throw ContractError("make_table_kernel: dimension mismatch");
    const Point anchor = omega.min_corner();
    const int dim = data.dim;
    auto table = std::make_shared<const KernelTableData>(std::move(data));

    Kernel k;
    k.dim = dim;
    k.symmetric = table->symmetric;
    k.horizon = table->horizon;
    k.regional = false;
    k.label = "table";
    k.eval = [table, anchor, h, dim](const Point& a, const Point& b) {
        std::array<int, 4> key{0, 0, 0, 0};
        key[0] = static_cast<int>(std::floor((a[0] - anchor[0]) / h));
        key[2] = static_cast<int>(std::floor((b[0] - anchor[0]) / h));
        if (dim == 2) {
            key[1] = static_cast<int>(std::floor((a[1] - anchor[1]) / h));
            key[3] = static_cast<int>(std::floor((b[1] - anchor[1]) / h));
        }
        const auto it = table->values.find(key);
        return it == table->values.end() ? 0.0 : it->second;
    };
    return k;
}

} // namespace nnl
