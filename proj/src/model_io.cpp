#include "fcd/model_io.hpp"

#include "fcd/error.hpp"

#include <json.hpp>

#include <fstream>

namespace fcd {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::VectorXd r = m.row(i).transpose();
        rows.push_back(to_json(r));
    }
    return rows;
}

Eigen::VectorXd vector_from(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from(const json& j, Eigen::Index cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Eigen::VectorXd r = vector_from(j[i]);
        if (r.size() != cols) throw ParseError("matrix row has the wrong length", i + 1);
        m.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    return m;
}

const char* kind_name(TruncationRule::Kind k) {
    switch (k) {
        case TruncationRule::Kind::threshold: return "threshold";
        case TruncationRule::Kind::pve: return "pve";
        case TruncationRule::Kind::fixed: return "fixed";
    }
    return "threshold";
}

TruncationRule::Kind kind_from(const std::string& s) {
    if (s == "threshold") return TruncationRule::Kind::threshold;
    if (s == "pve") return TruncationRule::Kind::pve;
    if (s == "fixed") return TruncationRule::Kind::fixed;
    throw ParseError("unknown truncation rule '" + s + "'");
}

}  // namespace

void write_model(const FittedFLM& model, std::ostream& out) {
    json j;
    j["format"] = "fcd.flm";
    j["version"] = kVersion;
    j["grid_resolution"] = model.grid.resolution();
    j["layout"] = {{"curve_parts", model.layout.curve_parts},
                   {"scalar_parts", model.layout.scalar_parts},
                   {"resolution", model.layout.resolution}};
    j["truncation"] = model.truncation;
    j["rule"] = {{"kind", kind_name(model.rule.kind)},
                 {"m_n", model.rule.m_n},
                 {"scale", model.rule.scale == ThresholdScale::relative ? "relative" : "absolute"},
                 {"pve", model.rule.pve},
                 {"fixed", model.rule.fixed}};
    j["centered"] = model.centered;
    j["dof_correction"] = model.dof_correction;
    j["x_mean"] = to_json(model.x_mean);
    j["y_mean"] = to_json(model.y_mean);
    j["rho_hat"] = to_json(model.rho_hat);
    const Eigen::MatrixXd x_vectors = model.x_spectrum.eigenvectors.leftCols(model.truncation).transpose();
    j["x_spectrum"] = {{"eigenvalues", to_json(model.x_spectrum.eigenvalues)},
                       {"eigenvectors", to_json(x_vectors)},
                       {"clamped_mass", model.x_spectrum.clamped_mass}};
    const Eigen::MatrixXd g_vectors = model.gamma_hat.eigenvectors.transpose();
    j["gamma_hat"] = {{"eigenvalues", to_json(model.gamma_hat.eigenvalues)},
                      {"eigenvectors", to_json(g_vectors)},
                      {"clamped_mass", model.gamma_hat.clamped_mass}};
    json res = json::array();
    for (const auto& r : model.residuals) res.push_back(to_json(r.values()));
    j["residuals"] = std::move(res);
    out << j.dump() << '\n';
}

void save_model(const FittedFLM& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    write_model(model, out);
}

FittedFLM read_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != "fcd.flm") throw ParseError("not a model document");
        if (j.at("version").get<int>() != kVersion) throw ParseError("unsupported model version");
        FittedFLM m;
        m.grid = Grid(j.at("grid_resolution").get<int>());
        const auto& lay = j.at("layout");
        m.layout.curve_parts = lay.at("curve_parts").get<std::size_t>();
        m.layout.scalar_parts = lay.at("scalar_parts").get<std::size_t>();
        m.layout.resolution = lay.at("resolution").get<int>();
        const auto p = static_cast<Eigen::Index>(m.layout.dimension());
        const auto d = static_cast<Eigen::Index>(m.grid.size());
        m.truncation = j.at("truncation").get<int>();
        const auto& rule = j.at("rule");
        m.rule.kind = kind_from(rule.at("kind").get<std::string>());
        m.rule.m_n = rule.at("m_n").get<double>();
        m.rule.scale = rule.at("scale").get<std::string>() == "absolute" ? ThresholdScale::absolute : ThresholdScale::relative;
        m.rule.pve = rule.at("pve").get<double>();
        m.rule.fixed = rule.at("fixed").get<int>();
        m.centered = j.at("centered").get<bool>();
        m.dof_correction = j.at("dof_correction").get<bool>();
        m.x_mean = vector_from(j.at("x_mean"));
        m.y_mean = vector_from(j.at("y_mean"));
        m.rho_hat = matrix_from(j.at("rho_hat"), p);
        if (m.x_mean.size() != p || m.y_mean.size() != d || m.rho_hat.rows() != d) {
            throw ParseError("model dimensions are inconsistent");
        }
        const auto& xs = j.at("x_spectrum");
        m.x_spectrum.eigenvalues = vector_from(xs.at("eigenvalues"));
        m.x_spectrum.eigenvectors = matrix_from(xs.at("eigenvectors"), p).transpose();
        m.x_spectrum.clamped_mass = xs.at("clamped_mass").get<double>();
        const auto& gs = j.at("gamma_hat");
        m.gamma_hat.eigenvalues = vector_from(gs.at("eigenvalues"));
        m.gamma_hat.eigenvectors = matrix_from(gs.at("eigenvectors"), d).transpose();
        m.gamma_hat.clamped_mass = gs.at("clamped_mass").get<double>();
        if (m.gamma_hat.eigenvectors.cols() != m.gamma_hat.eigenvalues.size()) {
            throw ParseError("residual spectrum is inconsistent");
        }
        for (const auto& r : j.at("residuals")) {
            Eigen::VectorXd v = vector_from(r);
            if (v.size() != d) throw ParseError("residual curve has the wrong length");
            m.residuals.emplace_back(m.grid, std::move(v));
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

FittedFLM load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "' for reading");
    return read_model(in);
}

}  // namespace fcd
