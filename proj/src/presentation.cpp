#include "spacedmod/presentation.hpp"

#include <json.hpp>

#include <sstream>

namespace spacedmod {

using nlohmann::json;

const std::vector<Matrix>& SpacedModulePresentation::rad_list(int from, int to) const {
    static const std::vector<Matrix> kEmpty;
    auto it = rad.find({from, to});
    return it == rad.end() ? kEmpty : it->second;
}

SpanBasis SpacedModulePresentation::rad_span(int from, int to) const {
    SpanBasis s(dim(to), dim(from), field);
    for (const Matrix& m : rad_list(from, to)) s.insert(m);
    return s;
}

int SpacedModulePresentation::object_index(const std::string& name) const {
    for (const auto& o : objects)
        if (o.name == name) return o.index;
    return -1;
}

ValidationReport validate(const SpacedModulePresentation& p) {
    ValidationReport report;
    const int n = p.num_objects();

    for (const auto& [key, mats] : p.rad) {
        SpanBasis s(p.dim(key.second), p.dim(key.first), p.field);
        int inserted = 0;
        for (const Matrix& m : mats) inserted += s.insert(m) ? 1 : 0;
        if (inserted != static_cast<int>(mats.size()))
            report.issues.push_back({ValidationIssue::Kind::Independence,
                                     "spanning list is linearly dependent",
                                     {p.objects[key.first].name, p.objects[key.second].name}});
    }

    // composition closure: rad(b,c) * rad(a,b) inside span rad(a,c)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const auto& ab = p.rad_list(a, b);
            if (ab.empty()) continue;
            for (int c = 0; c < n; ++c) {
                const auto& bc = p.rad_list(b, c);
                if (bc.empty()) continue;
                SpanBasis target = p.rad_span(a, c);
                for (const Matrix& k : ab)
                    for (const Matrix& m : bc) {
                        Matrix prod = m * k;
                        if (!prod.is_zero() && !target.contains(prod))
                            report.issues.push_back(
                                {ValidationIssue::Kind::Closure,
                                 "product of radical morphisms leaves the declared span",
                                 {p.objects[a].name, p.objects[b].name, p.objects[c].name}});
                    }
            }
        }

    // nilpotency of each endomorphism radical
    for (int a = 0; a < n; ++a) {
        const auto& gens = p.rad_list(a, a);
        if (gens.empty()) continue;
        SpanBasis power(p.dim(a), p.dim(a), p.field);
        for (const Matrix& g : gens) power.insert(g);
        for (int it = 0; it < p.dim(a) + 1 && power.dimension() > 0; ++it) {
            SpanBasis next(p.dim(a), p.dim(a), p.field);
            for (const Matrix& g : gens)
                for (const Matrix& m : power.canonical_basis()) next.insert(g * m);
            if (next.equals(power)) break;
            power = next;
        }
        if (power.dimension() > 0)
            report.issues.push_back({ValidationIssue::Kind::Nilpotency,
                                     "endomorphism radical is not nilpotent",
                                     {p.objects[a].name}});
    }
    return report;
}

SpacedModulePresentation canonicalize(const SpacedModulePresentation& p) {
    SpacedModulePresentation out = p;
    for (auto& [key, mats] : out.rad) {
        SpanBasis s(out.dim(key.second), out.dim(key.first), out.field);
        for (const Matrix& m : mats) s.insert(m);
        mats = s.canonical_basis();
    }
    return out;
}

namespace {

ExactScalar entry_from_json(const json& e, const FieldDesc& f, const std::string& where) {
    if (e.is_number_integer()) return ExactScalar::from_int(e.get<std::int64_t>(), f);
    if (e.is_string()) return parse_scalar(e.get<std::string>(), f);
    throw std::invalid_argument("entry in " + where + " must be an integer or a string");
}

json entry_to_json(const ExactScalar& x) {
    if (!x.is_q()) return json(x.fp().r);
    const Rat& q = x.rat();
    Int num = boost::multiprecision::numerator(q);
    Int den = boost::multiprecision::denominator(q);
    if (den == 1 && num >= std::numeric_limits<std::int64_t>::min() &&
        num <= std::numeric_limits<std::int64_t>::max())
        return json(static_cast<std::int64_t>(num));
    return json(x.str());
}

void offset_to_line_col(const std::string& text, std::size_t off, int& line, int& col) {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < off && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
}

}  // namespace

SpacedModulePresentation parse_presentation(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        int line, col;
        offset_to_line_col(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw ParseError(std::string("JSON syntax error: ") + e.what(), line, col);
    }
    if (!doc.is_object()) throw std::invalid_argument("document must be a JSON object");

    SpacedModulePresentation p;
    const json& field = doc.at("field");
    if (field.is_string() && field.get<std::string>() == "Q") p.field = FieldDesc::rationals();
    else if (field.is_object() && field.contains("Fp")) p.field = FieldDesc::prime_field(field.at("Fp").get<std::int64_t>());
    else throw std::invalid_argument("field must be \"Q\" or {\"Fp\": p}");

    for (const json& o : doc.at("objects")) {
        ObjectId id{o.at("name").get<std::string>(), p.num_objects()};
        int d = o.at("dim").get<int>();
        if (d < 1) throw std::invalid_argument("object '" + id.name + "' must have dim >= 1");
        if (p.object_index(id.name) >= 0) throw std::invalid_argument("duplicate object name '" + id.name + "'");
        p.objects.push_back(id);
        p.dims.push_back(d);
    }

    if (doc.contains("rad")) {
        for (const json& block : doc.at("rad")) {
            std::string from = block.at("from").get<std::string>();
            std::string to = block.at("to").get<std::string>();
            int fi = p.object_index(from), ti = p.object_index(to);
            if (fi < 0 || ti < 0)
                throw std::invalid_argument("rad block references unknown object '" + (fi < 0 ? from : to) + "'");
            std::vector<Matrix>& mats = p.rad[{fi, ti}];
            int idx = 0;
            for (const json& jm : block.at("matrices")) {
                std::string where = "rad " + from + "->" + to + " matrix " + std::to_string(idx);
                const int r = p.dim(ti), c = p.dim(fi);
                if (static_cast<int>(jm.size()) != r)
                    throw std::invalid_argument("dimension mismatch in " + where + ": expected " +
                                                std::to_string(r) + " rows, got " + std::to_string(jm.size()));
                Matrix m(r, c, p.field);
                for (int i = 0; i < r; ++i) {
                    const json& row = jm.at(i);
                    if (static_cast<int>(row.size()) != c)
                        throw std::invalid_argument("dimension mismatch in " + where + " row " + std::to_string(i) +
                                                    ": expected " + std::to_string(c) + " columns, got " +
                                                    std::to_string(row.size()));
                    for (int j = 0; j < c; ++j) m.at(i, j) = entry_from_json(row.at(j), p.field, where);
                }
                mats.push_back(std::move(m));
                ++idx;
            }
        }
    }
    return p;
}

std::string serialize_presentation(const SpacedModulePresentation& p) {
    json doc;
    doc["field"] = p.field.is_q() ? json("Q") : json{{"Fp", p.field.p}};
    doc["objects"] = json::array();
    for (int i = 0; i < p.num_objects(); ++i)
        doc["objects"].push_back({{"dim", p.dim(i)}, {"name", p.objects[i].name}});
    doc["rad"] = json::array();
    for (const auto& [key, mats] : p.rad) {
        if (mats.empty()) continue;
        json block;
        block["from"] = p.objects[key.first].name;
        block["to"] = p.objects[key.second].name;
        json jmats = json::array();
        for (const Matrix& m : mats) {
            json jm = json::array();
            for (int i = 0; i < m.rows(); ++i) {
                json row = json::array();
                for (int j = 0; j < m.cols(); ++j) row.push_back(entry_to_json(m.at(i, j)));
                jm.push_back(std::move(row));
            }
            jmats.push_back(std::move(jm));
        }
        block["matrices"] = std::move(jmats);
        doc["rad"].push_back(std::move(block));
    }
    return doc.dump(2) + "\n";
}

}  // namespace spacedmod
