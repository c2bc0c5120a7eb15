#include "pagecurve/matrix_io.hpp"

#include <fstream>

#include <json.hpp>

namespace pagecurve {

ComplexMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("matrix file " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw std::runtime_error("matrix file " + path.string() +
                                 ": expected object with keys dim, re, im");
    const auto n = j.at("dim").get<Eigen::Index>();
    if (n <= 0) throw std::runtime_error("matrix file " + path.string() + ": dim must be positive");
    ComplexMatrix m(n, n);
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || re.size() != size_t(n) || im.size() != size_t(n))
        throw std::runtime_error("matrix file " + path.string() + ": re/im must be dim rows");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (re[i].size() != size_t(n) || im[i].size() != size_t(n))
            throw std::runtime_error("matrix file " + path.string() + ": row length != dim");
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = Complex(re[i][k].get<double>(), im[i][k].get<double>());
    }
    return m;
}

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m,
                 const std::string& basis_note) {
    nlohmann::ordered_json j;
    j["dim"] = m.rows();
    j["basis"] = basis_note;
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row_re = nlohmann::ordered_json::array();
        nlohmann::ordered_json row_im = nlohmann::ordered_json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row_re.push_back(m(i, k).real());
            row_im.push_back(m(i, k).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path.string());
    out << j.dump(1) << "\n";
}

} // namespace pagecurve
