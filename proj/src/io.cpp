#include "latentgp/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace latentgp {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newline handling everywhere
    if (!out) throw ArgumentError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": not a number: '" << s << "'";
        throw ParseError(msg.str());
    }
}

}  // namespace

std::string fmt_double(double v) {
    // Shortest representation that round-trips: try increasing precision.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

void write_dataset_csv(const std::filesystem::path& path, const LabelledDesign& design) {
    auto out = open_out(path);
    for (int k = 0; k < design.dim(); ++k) out << "x" << (k + 1) << ",";
    out << "region\n";
    const Eigen::MatrixXd orig = design.original_points();
    for (int i = 0; i < design.n(); ++i) {
        for (int k = 0; k < design.dim(); ++k) out << fmt_double(orig(i, k)) << ",";
        out << (design.label(i) < 0 ? 1 : 2) << "\n";
    }
}

LabelledDesign read_dataset_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ":1: empty dataset file");

    const auto header = split_csv_line(line);
    int region_col = -1;
    int dim = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "region") {
            region_col = static_cast<int>(c);
        } else if (header[c] == "x" + std::to_string(dim + 1)) {
            ++dim;
        } else {
            throw ParseError(path.string() + ":1: unexpected column '" + header[c] +
                             "' (want x1..xd then region)");
        }
    }
    if (region_col < 0) throw ParseError(path.string() + ":1: missing required column 'region'");
    if (dim < 1) throw ParseError(path.string() + ":1: no coordinate columns x1..xd found");

    std::vector<Eigen::VectorXd> rows;
    std::vector<int> labels;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != dim + 1) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": expected " << (dim + 1)
                << " fields, got " << fields.size();
            throw ParseError(msg.str());
        }
        Eigen::VectorXd x(dim);
        for (int k = 0; k < dim; ++k) x(k) = parse_double(fields[k], path, line_no);
        const std::string& r = fields[region_col];
        if (r != "1" && r != "2") {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": region must be 1 or 2, got '" << r << "'";
            throw ParseError(msg.str());
        }
        rows.push_back(std::move(x));
        labels.push_back(r == "1" ? -1 : 1);
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");

    Eigen::MatrixXd pts(static_cast<int>(rows.size()), dim);
    Eigen::VectorXi lbl(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        pts.row(static_cast<int>(i)) = rows[i].transpose();
        lbl(static_cast<int>(i)) = labels[i];
    }
    return LabelledDesign::from_original(pts, lbl);
}

void write_chain_csv(const std::filesystem::path& path, const Chain& chain) {
    auto out = open_out(path);
    const int p = chain.draws.empty() ? 0 : static_cast<int>(chain.draws.front().params.beta.size());
    for (int i = 0; i < p; ++i) out << "beta_" << i << ",";
    out << "sigma2,delta,log_posterior,accepted\n";
    for (const auto& d : chain.draws) {
        for (int i = 0; i < p; ++i) out << fmt_double(d.params.beta(i)) << ",";
        out << fmt_double(d.params.sigma2) << "," << fmt_double(d.params.delta) << ","
            << fmt_double(d.log_posterior) << "," << (d.accepted ? 1 : 0) << "\n";
    }
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<ParamDiagnostic>& diags) {
    auto out = open_out(path);
    out << "parameter,mean,sd,ess,split_half_z\n";
    for (const auto& d : diags) {
        out << d.name << "," << fmt_double(d.mean) << "," << fmt_double(d.sd) << ","
            << fmt_double(d.ess) << "," << fmt_double(d.split_half_z) << "\n";
    }
}

void write_map_json(const std::filesystem::path& path, const FitRecord& record) {
    json j;
    j["beta"] = std::vector<double>(record.map_params.beta.data(),
                                    record.map_params.beta.data() + record.map_params.beta.size());
    j["sigma2"] = record.map_params.sigma2;
    j["delta"] = record.map_params.delta;
    j["log_posterior"] = record.map_log_posterior;
    j["basis"] = record.basis == BasisKind::Constant ? "constant" : "linear";
    j["scale_offset"] = std::vector<double>(record.scale.offset.data(),
                                            record.scale.offset.data() + record.scale.offset.size());
    j["scale_factor"] = std::vector<double>(record.scale.scale.data(),
                                            record.scale.scale.data() + record.scale.scale.size());
    j["seed"] = record.seed;
    j["acceptance_rate"] = record.acceptance_rate;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

FitRecord read_map_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    FitRecord r;
    try {
        const auto beta = j.at("beta").get<std::vector<double>>();
        r.map_params.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
        r.map_params.sigma2 = j.at("sigma2").get<double>();
        r.map_params.delta = j.at("delta").get<double>();
        r.map_log_posterior = j.at("log_posterior").get<double>();
        r.basis = j.at("basis").get<std::string>() == "constant" ? BasisKind::Constant
                                                                 : BasisKind::Linear;
        const auto off = j.at("scale_offset").get<std::vector<double>>();
        const auto fac = j.at("scale_factor").get<std::vector<double>>();
        r.scale.offset = Eigen::Map<const Eigen::VectorXd>(off.data(), off.size());
        r.scale.scale = Eigen::Map<const Eigen::VectorXd>(fac.data(), fac.size());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.acceptance_rate = j.at("acceptance_rate").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return r;
}

void write_grid_csv(const std::filesystem::path& path,
                    const std::vector<PredictiveSummary>& summaries, int dim) {
    auto out = open_out(path);
    for (int k = 0; k < dim; ++k) out << "x" << (k + 1) << ",";
    out << "latent_mean,latent_sd,p_region1\n";
    for (const auto& s : summaries) {
        for (int k = 0; k < dim; ++k) out << fmt_double(s.point(k)) << ",";
        out << fmt_double(s.latent_mean) << "," << fmt_double(s.latent_sd) << ","
            << fmt_double(s.p_region1) << "\n";
    }
}

void write_boundary_csv(const std::filesystem::path& path, const BoundaryEstimate& boundary) {
    auto out = open_out(path);
    if (boundary.dimension == 1) {
        out << "root,ci_lo,ci_hi\n";
        out << fmt_double(boundary.root) << "," << fmt_double(boundary.credible_interval.first)
            << "," << fmt_double(boundary.credible_interval.second) << "\n";
        return;
    }
    out << "polyline_id,vertex_index,x1,x2\n";
    for (std::size_t p = 0; p < boundary.polylines.size(); ++p) {
        for (std::size_t v = 0; v < boundary.polylines[p].size(); ++v) {
            out << p << "," << v << "," << fmt_double(boundary.polylines[p][v](0)) << ","
                << fmt_double(boundary.polylines[p][v](1)) << "\n";
        }
    }
}

void write_misclassification_csv(const std::filesystem::path& path, const LabelledDesign& design,
                                 const MisclassificationReport& report) {
    auto out = open_out(path);
    out << "point_index,";
    for (int k = 0; k < design.dim(); ++k) out << "x" << (k + 1) << ",";
    out << "label,rate\n";
    const Eigen::MatrixXd orig = design.original_points();
    for (int i = 0; i < design.n(); ++i) {
        out << i << ",";
        for (int k = 0; k < design.dim(); ++k) out << fmt_double(orig(i, k)) << ",";
        out << design.label(i) << "," << fmt_double(report.per_point_rate(i)) << "\n";
    }
}

}  // namespace latentgp
