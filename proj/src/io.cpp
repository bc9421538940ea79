#include "ifskit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ifskit {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string cloud_to_csv(const PointCloud& cloud) {
    std::ostringstream out;
    const int dim = cloud.dimension();
    out << (dim == 1 ? "x\n" : "x,y\n");
    for (const auto& p : cloud.points()) {
        out << format_double(p.x());
        if (dim == 2) out << ',' << format_double(p.y());
        out << '\n';
    }
    return out.str();
}

std::string measure_to_csv(const DiscreteMeasure& m) {
    std::ostringstream out;
    const int dim = m.dimension();
    out << (dim == 1 ? "x,weight,label\n" : "x,y,weight,label\n");
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << format_double(m.atoms()[i].x()) << ',';
        if (dim == 2) out << format_double(m.atoms()[i].y()) << ',';
        out << format_double(m.weights()[i]) << ',';
        if (m.has_labels()) out << m.labels()[i].str();
        out << '\n';
    }
    return out.str();
}

DiscreteMeasure measure_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::domain_error("measure_from_csv: empty input");
    int dim;
    if (line == "x,weight,label")
        dim = 1;
    else if (line == "x,y,weight,label")
        dim = 2;
    else
        throw std::domain_error("measure_from_csv: unrecognized header '" + line + "'");

    std::vector<Point> atoms;
    std::vector<double> weights;
    std::vector<Word> labels;
    bool any_label = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        while (fields.size() < static_cast<std::size_t>(dim) + 2) fields.emplace_back();
        if (dim == 1)
            atoms.push_back(Point::line(std::stod(fields[0])));
        else
            atoms.push_back(Point::plane(std::stod(fields[0]), std::stod(fields[1])));
        weights.push_back(std::stod(fields[static_cast<std::size_t>(dim)]));
        Word w;
        for (char c : fields[static_cast<std::size_t>(dim) + 1]) {
            if (c < '0' || c > '9') throw std::domain_error("measure_from_csv: bad label");
            w.letters.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        any_label |= !w.empty();
        labels.push_back(std::move(w));
    }
    if (any_label) return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(labels));
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

std::string operator_to_text(const MatrixOperator& op) {
    std::ostringstream out;
    out << "ifskit-operator " << op.entries.rows() << ' ' << op.entries.cols() << '\n';
    out << "codomain-weights";
    for (double w : op.codomain->weights()) out << ' ' << format_double(w);
    out << "\ndomain-weights";
    for (double w : op.domain->weights()) out << ' ' << format_double(w);
    out << '\n';
    for (std::size_t i = 0; i < op.entries.rows(); ++i) {
        for (std::size_t j = 0; j < op.entries.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(op.entries(i, j).real()) << ' '
                << format_double(op.entries(i, j).imag());
        }
        out << '\n';
    }
    return out.str();
}

std::string povm_to_json(const POVMTable& table) {
    nlohmann::json j;
    auto& edges = j["partition_edges"] = nlohmann::json::array();
    for (std::size_t c = 0; c <= table.partition.cell_count(); ++c)
        edges.push_back(c < table.partition.cell_count() ? table.partition.lo(c)
                                                         : table.partition.span_hi());
    j["dimension"] = table.space->dim();
    auto& cells = j["cells"] = nlohmann::json::array();
    for (const auto& v : table.values) {
        nlohmann::json cell = nlohmann::json::array();
        for (std::size_t r = 0; r < v.rows(); ++r)
            for (std::size_t c = 0; c < v.cols(); ++c) {
                cell.push_back(v(r, c).real());
                cell.push_back(v(r, c).imag());
            }
        cells.push_back(std::move(cell));
    }
    return j.dump(2);
}

std::string fixpoint_history_to_csv(const std::vector<FixpointStep>& history) {
    std::ostringstream out;
    out << "iteration,res_lower,res_upper,min_eig,sum_defect\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << (i + 1) << ',' << format_double(history[i].res_lower) << ','
            << format_double(history[i].res_upper) << ',' << format_double(history[i].min_eig)
            << ',' << format_double(history[i].sum_defect) << '\n';
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_file: cannot open " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ifskit
