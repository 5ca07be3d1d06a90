#ifndef BIHOM_IO_HPP
#define BIHOM_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bihom/algebra.hpp"
#include "bihom/connections.hpp"
#include "bihom/decomposition.hpp"
#include "bihom/error.hpp"
#include "bihom/roots.hpp"

namespace bihom {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Algebra description files
// ---------------------------------------------------------------------------

/// Loads the JSON algebra description: name, dimension, basis labels, parity
/// list, sparse brackets {left, right, result: {index: "p/q"}}, row-major
/// phi/psi matrices of scalar texts, optional H index list. Shape and scalar
/// syntax are fully validated here; mathematical validity is deferred to
/// validate_structure.
inline SuperAlgebra algebra_from_json(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorKind::parse, "algebra file: top level must be an object");
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
        throw Error(ErrorKind::parse, "algebra file: missing or invalid \"dimension\"");
    const std::size_t dim = j["dimension"].get<std::size_t>();

    if (!j.contains("parity") || !j["parity"].is_array())
        throw Error(ErrorKind::parse, "algebra file: missing \"parity\" list");
    if (j["parity"].size() != dim)
        throw Error(ErrorKind::shape, "algebra file: \"parity\" length " +
                                          std::to_string(j["parity"].size()) +
                                          " does not match dimension " + std::to_string(dim));
    std::vector<Parity> parities;
    parities.reserve(dim);
    for (const auto& p : j["parity"]) {
        if (!p.is_number_unsigned() || p.get<unsigned>() > 1)
            throw Error(ErrorKind::parse, "algebra file: parity entries must be 0 or 1");
        parities.push_back(static_cast<Parity>(p.get<unsigned>()));
    }

    SuperAlgebra a = SuperAlgebra::make(j.value("name", std::string{}), std::move(parities));

    if (j.contains("basis")) {
        if (!j["basis"].is_array() || j["basis"].size() != dim)
            throw Error(ErrorKind::shape, "algebra file: \"basis\" length does not match dimension");
        a.basis_names.clear();
        for (const auto& b : j["basis"])
            a.basis_names.push_back(b.get<std::string>());
    }

    auto parse_matrix = [&](const char* field) -> Matrix {
        if (!j.contains(field))
            return Matrix::identity(dim);
        const auto& m = j[field];
        if (!m.is_array() || m.size() != dim)
            throw Error(ErrorKind::shape,
                        std::string("algebra file: \"") + field + "\" must have " +
                            std::to_string(dim) + " rows");
        Matrix out(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (!m[i].is_array() || m[i].size() != dim)
                throw Error(ErrorKind::shape, std::string("algebra file: \"") + field + "\" row " +
                                                  std::to_string(i) + " has the wrong length");
            for (std::size_t c = 0; c < dim; ++c)
                out(i, c) = parse_rational_or_throw(
                    m[i][c].get<std::string>(),
                    std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
        }
        return out;
    };
    a.phi = parse_matrix("phi");
    a.psi = parse_matrix("psi");

    if (j.contains("brackets")) {
        if (!j["brackets"].is_array())
            throw Error(ErrorKind::parse, "algebra file: \"brackets\" must be a list");
        for (const auto& entry : j["brackets"]) {
            if (!entry.contains("left") || !entry.contains("right") || !entry.contains("result"))
                throw Error(ErrorKind::parse,
                            "algebra file: bracket entries need left, right and result");
            const std::size_t left = entry["left"].get<std::size_t>();
            const std::size_t right = entry["right"].get<std::size_t>();
            if (left >= dim || right >= dim)
                throw Error(ErrorKind::shape, "algebra file: bracket index out of range");
            Vec value = zero_vec(dim);
            for (const auto& [key, text] : entry["result"].items()) {
                std::size_t index = 0;
                try {
                    index = static_cast<std::size_t>(std::stoul(key));
                } catch (...) {
                    throw Error(ErrorKind::parse,
                                "algebra file: bracket result key \"" + key +
                                    "\" is not an index");
                }
                if (index >= dim)
                    throw Error(ErrorKind::shape, "algebra file: bracket result index " + key +
                                                      " out of range");
                value[index] = parse_rational_or_throw(
                    text.get<std::string>(),
                    "brackets[" + std::to_string(left) + "," + std::to_string(right) + "]");
            }
            a.set_bracket(left, right, std::move(value));
        }
    }

    if (j.contains("H")) {
        if (!j["H"].is_array())
            throw Error(ErrorKind::parse, "algebra file: \"H\" must be a list of basis indices");
        std::vector<std::size_t> h;
        for (const auto& idx : j["H"]) {
            const std::size_t i = idx.get<std::size_t>();
            if (i >= dim)
                throw Error(ErrorKind::shape, "algebra file: H index out of range");
            h.push_back(i);
        }
        a.h_indices = std::move(h);
    }
    return a;
}

inline json algebra_to_json(const SuperAlgebra& a)
{
    json j;
    j["name"] = a.name;
    j["dimension"] = a.dim;
    j["basis"] = a.basis_names;
    json parity = json::array();
    for (Parity p : a.parity)
        parity.push_back(static_cast<unsigned>(p));
    j["parity"] = std::move(parity);

    json brackets = json::array();
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t k = 0; k < a.dim; ++k) {
            const Vec& v = a.basis_bracket(i, k);
            if (is_zero(v))
                continue;
            json result;
            for (std::size_t c = 0; c < a.dim; ++c)
                if (v[c] != 0)
                    result[std::to_string(c)] = to_string(v[c]);
            brackets.push_back({{"left", i}, {"right", k}, {"result", std::move(result)}});
        }
    j["brackets"] = std::move(brackets);

    auto matrix_json = [](const Matrix& m) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < m.cols(); ++c)
                row.push_back(to_string(m(i, c)));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["phi"] = matrix_json(a.phi);
    j["psi"] = matrix_json(a.psi);
    if (a.h_indices)
        j["H"] = *a.h_indices;
    return j;
}

inline SuperAlgebra load_algebra(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::parse, path + ": " + e.what());
    }
    return algebra_from_json(j);
}

inline void save_algebra(const SuperAlgebra& a, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot write " + path);
    out << algebra_to_json(a).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Report pieces
// ---------------------------------------------------------------------------

inline json vec_json(const Vec& v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(to_string(x));
    return out;
}

inline json subspace_json(const Subspace& s)
{
    json out;
    out["dimension"] = s.dim();
    json basis = json::array();
    for (const auto& v : s.basis())
        basis.push_back(vec_json(v));
    out["basis"] = std::move(basis);
    return out;
}

inline json verdict_json(const Verdict& v)
{
    json out;
    out["ok"] = v.ok;
    if (!v.note.empty())
        out["note"] = v.note;
    if (v.witness) {
        json w;
        w["indices"] = v.witness->indices;
        w["defect"] = vec_json(v.witness->defect);
        out["witness"] = std::move(w);
    }
    return out;
}

inline json validation_json(const ValidationReport& r)
{
    json out;
    out["grading"] = verdict_json(r.grading);
    out["maps_commute"] = verdict_json(r.maps_commute);
    out["phi_automorphism"] = verdict_json(r.phi_automorphism);
    out["psi_automorphism"] = verdict_json(r.psi_automorphism);
    out["superidentity"] = verdict_json(r.superidentity);
    out["bihom_skew"] = verdict_json(r.bihom_skew);
    out["regular"] = r.regular();
    out["bihom_lie_like"] = r.bihom_skew.ok;
    out["all_core_ok"] = r.all_core_ok();
    return out;
}

inline json root_functional_json(const RootFunctional& f) { return vec_json(f.values); }

inline json decomposition_json(const SplitDecomposition& d)
{
    json out;
    out["H"] = subspace_json(d.H);
    {
        // when H is spanned by basis coordinates, also list the indices
        json indices = json::array();
        bool coordinate_spanned = true;
        for (const auto& v : d.H.basis()) {
            std::size_t nonzero = 0, index = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) {
                    ++nonzero;
                    index = i;
                }
            if (nonzero == 1 && v[index] == 1)
                indices.push_back(index);
            else
                coordinate_spanned = false;
        }
        if (coordinate_spanned)
            out["H_indices"] = std::move(indices);
    }
    out["H_even"] = subspace_json(d.H0);
    out["H_odd"] = subspace_json(d.H1);
    out["h_abelian"] = verdict_json(d.h_abelian);
    out["h_graded"] = verdict_json(d.h_graded);
    out["operators_commute"] = verdict_json(d.operators_commute);
    json roots = json::array();
    for (const auto& r : d.roots) {
        json e;
        e["values"] = root_functional_json(r.root);
        e["even_dim"] = r.even.dim();
        e["odd_dim"] = r.odd.dim();
        e["even_basis"] = subspace_json(r.even)["basis"];
        e["odd_basis"] = subspace_json(r.odd)["basis"];
        e["graded"] = r.graded;
        roots.push_back(std::move(e));
    }
    out["roots"] = std::move(roots);
    out["zero_root_space"] = subspace_json(d.L0);
    out["uncaptured_dim"] = d.uncaptured_dim;
    out["split_ok"] = d.split_ok;
    out["notes"] = d.notes;
    return out;
}

inline json maximal_abelian_json(const MaximalAbelianReport& r)
{
    json out;
    switch (r.status) {
    case MaximalAbelianReport::Status::confirmed: out["status"] = "confirmed"; break;
    case MaximalAbelianReport::Status::refuted: out["status"] = "refuted"; break;
    case MaximalAbelianReport::Status::inconclusive: out["status"] = "inconclusive"; break;
    }
    if (r.witness)
        out["witness"] = vec_json(*r.witness);
    if (!r.note.empty())
        out["note"] = r.note;
    out["centralizer_dim"] = r.centralizer.dim();
    return out;
}

inline json root_lemmas_json(const RootLemmaReport& r)
{
    json out;
    out["phi_maps_root_spaces"] = verdict_json(r.phi_maps_root_spaces);
    out["psi_maps_root_spaces"] = verdict_json(r.psi_maps_root_spaces);
    out["bracket_into_twisted_sum"] = verdict_json(r.bracket_into_twisted_sum);
    out["lambda_twist_closed"] = verdict_json(r.lambda_twist_closed);
    out["zero_space_is_h"] = verdict_json(r.zero_space_is_h);
    out["all_ok"] = r.all_ok();
    return out;
}

inline json chain_json(const ConnectionChain& c)
{
    json out;
    if (c.direct) {
        out["kind"] = "direct";
        out["epsilon"] = c.epsilon;
        out["z1"] = c.z1;
        out["z2"] = c.z2;
        return out;
    }
    out["kind"] = "chain";
    json alphas = json::array();
    for (const auto& f : c.alphas)
        alphas.push_back(root_functional_json(f));
    out["alphas"] = std::move(alphas);
    out["entry"] = {{"n", c.entry_n}, {"r", c.entry_r}};
    out["exit"] = {{"epsilon", c.exit_epsilon}, {"m", c.exit_m}, {"s", c.exit_s}};
    json sums = json::array();
    for (const auto& f : c.partial_sums)
        sums.push_back(root_functional_json(f));
    out["partial_sums"] = std::move(sums);
    if (c.parity_trace) {
        json trace = json::array();
        for (Parity p : *c.parity_trace)
            trace.push_back(static_cast<unsigned>(p));
        out["parity_trace"] = std::move(trace);
    }
    return out;
}

inline json classes_json(const SplitDecomposition& d, const ConnectionPartition& p)
{
    json out;
    json classes = json::array();
    for (const auto& cls : p.classes) {
        json c;
        c["representative"] = root_functional_json(cls.representative);
        json members = json::array();
        for (std::size_t idx : cls.members)
            members.push_back(root_functional_json(d.roots[idx].root));
        c["members"] = std::move(members);
        classes.push_back(std::move(c));
    }
    out["count"] = p.classes.size();
    out["classes"] = std::move(classes);
    json chains = json::array();
    for (const auto& [pair, chain] : p.chains) {
        json e;
        e["from"] = root_functional_json(d.roots[pair.first].root);
        e["to"] = root_functional_json(d.roots[pair.second].root);
        e["chain"] = chain_json(chain);
        chains.push_back(std::move(e));
    }
    out["chains"] = std::move(chains);
    return out;
}

inline json class_ideal_json(const ClassIdeal& ci)
{
    json out;
    out["representative"] = root_functional_json(ci.cls.representative);
    out["I_H"] = subspace_json(ci.I_H);
    out["V"] = subspace_json(ci.V);
    out["I"] = subspace_json(ci.I);
    out["sum_direct"] = ci.sum_direct;
    out["is_ideal"] = ci.is_ideal();
    out["notes"] = ci.notes;
    return out;
}

inline json primary_decomposition_json(const PrimaryDecomposition& p)
{
    json out;
    out["generated_H_part"] = subspace_json(p.generated_h);
    out["U"] = subspace_json(p.U);
    json ideals = json::array();
    for (const auto& ci : p.ideals)
        ideals.push_back(class_ideal_json(ci));
    out["ideals"] = std::move(ideals);
    out["spanning"] = verdict_json(p.spanning);
    json ortho = json::array();
    for (std::size_t i = 0; i < p.orthogonality.size(); ++i)
        for (std::size_t j = 0; j < p.orthogonality.size(); ++j) {
            if (i == j)
                continue;
            json e;
            e["first"] = i;
            e["second"] = j;
            e["zero"] = p.orthogonality[i][j].ok;
            if (!p.orthogonality[i][j].ok && p.orthogonality[i][j].witness)
                e["witness"] = vec_json(p.orthogonality[i][j].witness->defect);
            ortho.push_back(std::move(e));
        }
    out["orthogonality"] = std::move(ortho);
    out["notes"] = p.notes;
    return out;
}

inline json direct_sum_json(const DirectSumReport& r)
{
    json out;
    out["annihilator_zero"] = verdict_json(r.annihilator_zero);
    out["h_generated"] = verdict_json(r.h_generated);
    out["sum_direct"] = verdict_json(r.sum_direct);
    out["sum_covers"] = verdict_json(r.sum_covers);
    out["conclusion_direct_sum"] = r.conclusion();
    return out;
}

inline json maximal_length_json(const MaximalLengthReport& r)
{
    json out;
    out["ok"] = r.ok;
    out["literal_reading"] = r.literal;
    json dims = json::array();
    for (const auto& [e, o] : r.dims)
        dims.push_back({{"even", e}, {"odd", o}});
    out["per_root_dims"] = std::move(dims);
    return out;
}

inline json j_partition_json(const SplitDecomposition& d, const JPartition& p)
{
    json out;
    out["J"] = subspace_json(p.j.J);
    out["left_bracket_vanishes"] = verdict_json(p.j.left_bracket_vanishes);
    auto side = [&](const std::array<std::vector<std::size_t>, 2>& s) {
        json e;
        for (std::size_t parity = 0; parity < 2; ++parity) {
            json roots = json::array();
            for (std::size_t idx : s[parity])
                roots.push_back(root_functional_json(d.roots[idx].root));
            e[parity == 0 ? "even" : "odd"] = std::move(roots);
        }
        return e;
    };
    out["lambda_J"] = side(p.lambda_j);
    out["lambda_not_J"] = side(p.lambda_not_j);
    out["mixed"] = side(p.mixed);
    out["J_side_symmetric"] = p.j_symmetric;
    out["not_J_side_symmetric"] = p.not_j_symmetric;
    return out;
}

inline json root_multiplicativity_json(const SplitDecomposition& d,
                                       const RootMultiplicativityReport& r)
{
    json out;
    out["applicable"] = r.applicable;
    if (r.applicable)
        out["ok"] = r.ok;
    json ces = json::array();
    for (const auto& ce : r.counterexamples) {
        json e;
        e["condition"] = ce.condition;
        e["first"] = root_functional_json(d.roots[ce.first_root].root);
        e["first_parity"] = name_of(ce.first_parity);
        e["second"] = root_functional_json(d.roots[ce.second_root].root);
        e["second_parity"] = name_of(ce.second_parity);
        ces.push_back(std::move(e));
    }
    out["counterexamples"] = std::move(ces);
    return out;
}

inline json simplicity_json(const SimplicityReport& r)
{
    json out;
    switch (r.outcome) {
    case SimplicityReport::Outcome::not_simple: out["outcome"] = "not-simple"; break;
    case SimplicityReport::Outcome::simple_consistent:
        out["outcome"] = "simple-consistent";
        break;
    case SimplicityReport::Outcome::inconclusive: out["outcome"] = "inconclusive"; break;
    }
    out["reason"] = r.reason;
    if (r.witness_ideal) {
        out["witness_ideal"] = subspace_json(*r.witness_ideal);
        out["witness_origin"] = r.witness_origin;
    }
    out["derived_nonzero"] = verdict_json(r.derived_nonzero);
    out["h_generated"] = verdict_json(r.h_generated);
    out["single_class"] = verdict_json(r.single_class);
    out["maximal_length"] = r.maximal_length;
    out["root_multiplicative_applicable"] = r.root_multiplicative_applicable;
    if (r.root_multiplicative_applicable)
        out["root_multiplicative"] = r.root_multiplicative;
    out["z_lie_zero"] = r.z_lie_zero;
    out["z_lie_zero_not_j_variant"] = r.z_lie_zero_not_j_variant;
    if (r.nj_connected_not_j)
        out["refined_connected_not_J"] = *r.nj_connected_not_j;
    if (r.nj_connected_j)
        out["refined_connected_J"] = *r.nj_connected_j;
    if (!r.nj_note.empty())
        out["refined_connectivity_note"] = r.nj_note;
    json frontier = json::array();
    for (const auto& c : r.frontier) {
        json e;
        e["origin"] = c.origin;
        e["dim"] = c.dim;
        e["proper"] = c.proper;
        e["is_ideal"] = c.is_ideal;
        e["equals_J"] = c.equals_j;
        frontier.push_back(std::move(e));
    }
    out["falsifier_frontier"] = std::move(frontier);
    out["prime_note"] = r.prime_note;
    return out;
}

// ---------------------------------------------------------------------------
// Text rendering: a deterministic indented walk of the JSON report.
// ---------------------------------------------------------------------------

inline bool renders_inline(const json& value)
{
    if (!value.is_structured())
        return true;
    if (value.is_object())
        return false;
    for (const auto& child : value)
        if (child.is_structured() && !renders_inline(child))
            return false;
    // arrays of primitives (or of primitive arrays) stay on one line
    for (const auto& child : value)
        if (child.is_object())
            return false;
    return true;
}

inline void render_text(const json& value, std::ostream& out, int indent = 0)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (value.is_object()) {
        for (const auto& [key, child] : value.items()) {
            if (renders_inline(child)) {
                out << pad << key << ": " << child.dump() << "\n";
            } else {
                out << pad << key << ":\n";
                render_text(child, out, indent + 1);
            }
        }
    } else if (value.is_array()) {
        std::size_t i = 0;
        for (const auto& child : value) {
            if (renders_inline(child)) {
                out << pad << "- " << child.dump() << "\n";
            } else {
                out << pad << "- [" << i << "]\n";
                render_text(child, out, indent + 1);
            }
            ++i;
        }
    } else {
        out << pad << value.dump() << "\n";
    }
}

inline std::string render_text(const json& value)
{
    std::ostringstream out;
    render_text(value, out, 0);
    return out.str();
}

}  // namespace bihom

#endif
