#include "probframe/json_io.hpp"

#include "probframe/error.hpp"

#include <fstream>

namespace probframe {

namespace {

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json optional_flag(const std::optional<bool>& v) {
    return v ? Json(*v) : Json(nullptr);
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
    }
    return j.get<double>();
}

double number_field(const Json& j, const char* key) {
    return number(field(j, key), key);
}

bool flag_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_boolean()) {
        throw Error(ErrorCode::ParseError, std::string(key) + " must be a boolean");
    }
    return v.get<bool>();
}

std::optional<double> optional_number_field(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return number(j.at(key), key);
}

std::optional<bool> optional_flag_field(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return flag_field(j, key);
}

}  // namespace

Json to_json(const Vector& v) {
    return Json(v);
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(Json(Vector(m.row(i).begin(), m.row(i).end())));
    }
    return rows;
}

Json to_json(const DiscreteMeasure& m) {
    Json atoms = Json::array();
    for (const Vector& x : m.atoms()) {
        atoms.push_back(to_json(x));
    }
    return {{"dim", m.dim()}, {"atoms", std::move(atoms)}, {"weights", m.weights()}};
}

Json to_json(const Coupling& c) {
    return {{"source", to_json(c.source())}, {"target", to_json(c.target())},
            {"plan", to_json(c.plan())}};
}

Json to_json(const FrameReport& r) {
    return {{"frame_operator", to_json(r.frame_operator)},
            {"lower_bound", r.lower_bound},
            {"upper_bound", r.upper_bound},
            {"is_frame", r.is_frame},
            {"is_tight", r.is_tight},
            {"is_parseval", r.is_parseval},
            {"second_moment", r.second_moment}};
}

Json to_json(const TransportResult& r) {
    return {{"cost", r.cost},
            {"w2", r.w2},
            {"plan", to_json(r.plan)},
            {"slackness_residual", r.slackness_residual},
            {"dual_infeasibility", r.dual_infeasibility}};
}

Json to_json(const DualCertificate& c) {
    return {{"classification", std::string(to_string(c.classification))},
            {"deviation", c.deviation},
            {"mixed_operator", to_json(c.mixed_operator)},
            {"dual_lower_bound", optional_number(c.dual_lower_bound)},
            {"dual_upper_bound", optional_number(c.dual_upper_bound)},
            {"tol", c.tol},
            {"coupling", to_json(c.coupling)}};
}

Json to_json(const HypothesisFlags& f) {
    return {{"quadratic_closeness", optional_flag(f.quadratic_closeness)},
            {"ac_le_one", optional_flag(f.ac_le_one)},
            {"m2c_lt_one", optional_flag(f.m2c_lt_one)},
            {"inv_closeness", optional_flag(f.inv_closeness)},
            {"w2_below_sqrt_an", optional_flag(f.w2_below_sqrt_an)}};
}

Json to_json(const PerturbationReport& r) {
    return {{"lambda", r.lambda},
            {"lower_bound", r.lower_bound},
            {"dual_upper_bound", optional_number(r.dual_upper_bound)},
            {"lower_bound_estimate", optional_number(r.lower_bound_estimate)},
            {"measured_lower_bound", optional_number(r.measured_lower_bound)},
            {"directional_constant", optional_number(r.directional_constant)},
            {"inverse_displaced_cost", optional_number(r.inverse_displaced_cost)},
            {"deviation_bound", optional_number(r.deviation_bound)},
            {"w2", optional_number(r.w2)},
            {"a_n", optional_number(r.a_n)},
            {"c_n", optional_number(r.c_n)},
            {"flags", to_json(r.flags)},
            {"certificate", r.certificate ? to_json(*r.certificate) : Json(nullptr)},
            {"claim_made", r.claim_made},
            {"claim_holds", r.claim_holds},
            {"estimated", r.estimated}};
}

Vector vector_from_json(const Json& j) {
    if (j.is_number()) {
        return {j.get<double>()};
    }
    if (!j.is_array()) {
        throw Error(ErrorCode::ParseError, "vector must be an array of numbers");
    }
    Vector v;
    v.reserve(j.size());
    for (const Json& x : j) {
        v.push_back(number(x, "vector entry"));
    }
    return v;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorCode::ParseError, "matrix must be a non-empty array of rows");
    }
    if (j.front().is_number()) {
        // A bare list of numbers reads as a single column.
        Matrix m(j.size(), 1);
        for (std::size_t i = 0; i < j.size(); ++i) {
            m(i, 0) = number(j[i], "matrix entry");
        }
        return m;
    }
    std::vector<Vector> rows;
    for (const Json& r : j) {
        rows.push_back(vector_from_json(r));
        if (rows.back().size() != rows.front().size()) {
            throw Error(ErrorCode::ParseError, "matrix rows have different lengths");
        }
    }
    return Matrix::from_rows(rows);
}

DiscreteMeasure measure_from_json(const Json& j) {
    const Json& atoms_json = field(j, "atoms");
    if (!atoms_json.is_array()) {
        throw Error(ErrorCode::ParseError, "atoms must be an array");
    }
    std::vector<Vector> atoms;
    atoms.reserve(atoms_json.size());
    for (const Json& a : atoms_json) {
        atoms.push_back(vector_from_json(a));
    }
    std::size_t dim = 0;
    if (j.contains("dim")) {
        const Json& d = j.at("dim");
        if (!d.is_number_unsigned()) {
            throw Error(ErrorCode::ParseError, "dim must be a positive integer");
        }
        dim = d.get<std::size_t>();
    } else if (!atoms.empty()) {
        dim = atoms.front().size();
    }
    if (!j.contains("weights") || j.at("weights").is_null()) {
        return DiscreteMeasure::uniform(dim, std::move(atoms));
    }
    return DiscreteMeasure(dim, std::move(atoms), vector_from_json(j.at("weights")));
}

Coupling coupling_from_json(const Json& j) {
    return Coupling(measure_from_json(field(j, "source")), measure_from_json(field(j, "target")),
                    matrix_from_json(field(j, "plan")));
}

FrameReport frame_report_from_json(const Json& j) {
    FrameReport r;
    r.frame_operator = matrix_from_json(field(j, "frame_operator"));
    r.lower_bound = number_field(j, "lower_bound");
    r.upper_bound = number_field(j, "upper_bound");
    r.is_frame = flag_field(j, "is_frame");
    r.is_tight = flag_field(j, "is_tight");
    r.is_parseval = flag_field(j, "is_parseval");
    r.second_moment = number_field(j, "second_moment");
    return r;
}

TransportResult transport_result_from_json(const Json& j) {
    return {number_field(j, "cost"), number_field(j, "w2"), coupling_from_json(field(j, "plan")),
            number_field(j, "slackness_residual"), number_field(j, "dual_infeasibility")};
}

DualCertificate certificate_from_json(const Json& j) {
    const Json& cls = field(j, "classification");
    if (!cls.is_string()) {
        throw Error(ErrorCode::ParseError, "classification must be a string");
    }
    return {coupling_from_json(field(j, "coupling")),
            matrix_from_json(field(j, "mixed_operator")),
            number_field(j, "deviation"),
            dual_class_from_string(cls.get<std::string>()),
            optional_number_field(j, "dual_lower_bound"),
            optional_number_field(j, "dual_upper_bound"),
            number_field(j, "tol")};
}

HypothesisFlags flags_from_json(const Json& j) {
    HypothesisFlags f;
    f.quadratic_closeness = optional_flag_field(j, "quadratic_closeness");
    f.ac_le_one = optional_flag_field(j, "ac_le_one");
    f.m2c_lt_one = optional_flag_field(j, "m2c_lt_one");
    f.inv_closeness = optional_flag_field(j, "inv_closeness");
    f.w2_below_sqrt_an = optional_flag_field(j, "w2_below_sqrt_an");
    return f;
}

PerturbationReport perturbation_report_from_json(const Json& j) {
    PerturbationReport r;
    r.lambda = number_field(j, "lambda");
    r.lower_bound = number_field(j, "lower_bound");
    r.dual_upper_bound = optional_number_field(j, "dual_upper_bound");
    r.lower_bound_estimate = optional_number_field(j, "lower_bound_estimate");
    r.measured_lower_bound = optional_number_field(j, "measured_lower_bound");
    r.directional_constant = optional_number_field(j, "directional_constant");
    r.inverse_displaced_cost = optional_number_field(j, "inverse_displaced_cost");
    r.deviation_bound = optional_number_field(j, "deviation_bound");
    r.w2 = optional_number_field(j, "w2");
    r.a_n = optional_number_field(j, "a_n");
    r.c_n = optional_number_field(j, "c_n");
    r.flags = flags_from_json(field(j, "flags"));
    if (j.contains("certificate") && !j.at("certificate").is_null()) {
        r.certificate = certificate_from_json(j.at("certificate"));
    }
    r.claim_made = flag_field(j, "claim_made");
    r.claim_holds = flag_field(j, "claim_holds");
    r.estimated = flag_field(j, "estimated");
    return r;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

}  // namespace probframe
