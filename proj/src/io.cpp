#include "asep/io.hpp"

#include <charconv>
#include <cmath>

#include "asep/model.hpp"

namespace asep {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& raw) {
    const bool needs_quote =
        raw.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    write_csv_row(os, header);
    for (const auto& row : rows) write_csv_row(os, row);
}

nlohmann::json json_complex(complexd z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

namespace {

const char* kind_name(TQKind kind) {
    switch (kind) {
        case TQKind::I:
            return "I";
        case TQKind::II:
            return "II";
        case TQKind::III:
            return "III";
        case TQKind::IV:
            return "IV";
    }
    return "?";
}

}  // namespace

nlohmann::json json_root_set(const BetheRootSet& s, const BoundaryRates& rates) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind_name(s.kind);
    nlohmann::json roots = nlohmann::json::array();
    for (complexd l : s.roots) roots.push_back(json_complex(l));
    j["roots"] = roots;
    j["E"] = json_complex(eigenvalue_from_roots(s, rates));
    if (s.is_infinite_string) {
        j["infinite_string"] = true;
        j["string_size"] = s.string_size;
        j["residual"] = 0.0;
    } else {
        const VectorXd r = bae_residual(s, rates);
        j["residual"] = r.size() ? r.maxCoeff() : 0.0;
    }
    return j;
}

nlohmann::json json_sim_estimate(const SimEstimate& e) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["current"] = {{"mean", e.current_mean}, {"stderr", e.current_stderr}};
    nlohmann::json dm = nlohmann::json::array();
    nlohmann::json ds = nlohmann::json::array();
    for (Eigen::Index i = 0; i < e.density_mean.size(); ++i) {
        dm.push_back(e.density_mean[i]);
        ds.push_back(e.density_stderr[i]);
    }
    j["density"] = {{"mean", dm}, {"stderr", ds}};
    nlohmann::json bm = nlohmann::json::array();
    nlohmann::json bs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < e.bond_mean.size(); ++i) {
        bm.push_back(e.bond_mean[i]);
        bs.push_back(e.bond_stderr[i]);
    }
    j["bonds"] = {{"mean", bm}, {"stderr", bs}};
    j["total_time"] = e.total_time;
    j["events_used"] = e.events_used;
    return j;
}

nlohmann::json json_rates(const BoundaryRates& rates) {
    return nlohmann::json{{"alpha", rates.alpha}, {"beta", rates.beta},
                          {"gamma", rates.gamma}, {"delta", rates.delta},
                          {"q", rates.q},         {"n_sites", rates.n_sites}};
}

void write_state_csv(std::ostream& os, const VectorXd& state, int n_sites) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(static_cast<std::size_t>(state.size()));
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        rows.push_back({std::to_string(i),
                        bitstring(static_cast<int>(i), n_sites),
                        format_double(state[i])});
    }
    write_csv(os, {"index", "bitstring", "component"}, rows);
}

}  // namespace asep
