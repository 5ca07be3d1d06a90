#ifndef BIHOM_ANALYSIS_HPP
#define BIHOM_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bihom/algebra.hpp"
#include "bihom/connections.hpp"
#include "bihom/decomposition.hpp"
#include "bihom/error.hpp"
#include "bihom/ideals.hpp"
#include "bihom/io.hpp"
#include "bihom/roots.hpp"

namespace bihom {

enum class Command { validate, twist, decompose, classes, ideals, analyze };

inline const char* name_of(Command c)
{
    switch (c) {
    case Command::validate: return "validate";
    case Command::twist: return "twist";
    case Command::decompose: return "decompose";
    case Command::classes: return "classes";
    case Command::ideals: return "ideals";
    case Command::analyze: return "analyze";
    }
    return "?";
}

/// Pipeline switches. Every ambiguity toggle is echoed into the report
/// header so any output is self-describing.
struct AnalysisConfig {
    Command command = Command::analyze;
    std::optional<std::vector<std::size_t>> h_override;
    std::size_t orbit_bound = 64;
    bool strict_connections = true;
    bool literal_maximal_length = false;
    bool lie_annihilator_not_j = false;
};

inline Subspace resolve_h(const SuperAlgebra& a, const AnalysisConfig& cfg)
{
    const std::vector<std::size_t>* indices = nullptr;
    if (cfg.h_override)
        indices = &*cfg.h_override;
    else if (a.h_indices)
        indices = &*a.h_indices;
    if (!indices)
        throw Error(ErrorKind::precondition,
                    "no abelian part H: the file has no \"H\" field and no override was given");
    std::vector<Vec> gens;
    for (std::size_t i : *indices) {
        if (i >= a.dim)
            throw Error(ErrorKind::shape, "H index out of range");
        gens.push_back(a.basis_vector(i));
    }
    return Subspace::span(a.dim, std::move(gens));
}

/// Runs the analysis pipeline up to the requested command and assembles the
/// machine report. Mathematical falsity lands in verdict fields; only
/// operational failures throw.
inline json run_pipeline(const SuperAlgebra& a, const AnalysisConfig& cfg)
{
    json report;
    report["command"] = name_of(cfg.command);
    report["config"] = {
        {"orbit_bound", cfg.orbit_bound},
        {"strict_connections", cfg.strict_connections},
        {"literal_maximal_length", cfg.literal_maximal_length},
        {"lie_annihilator_variant", cfg.lie_annihilator_not_j ? "not-J" : "as-printed"},
    };
    report["input"] = {{"name", a.name}, {"dimension", a.dim}};

    const ValidationReport validation = validate_structure(a);
    report["validation"] = validation_json(validation);
    if (cfg.command == Command::validate)
        return report;

    const Subspace h = resolve_h(a, cfg);
    report["maximal_abelian"] = maximal_abelian_json(check_maximal_abelian(a, h));
    const SplitDecomposition d = find_root_system(a, h);
    report["decomposition"] = decomposition_json(d);
    report["root_lemmas"] = root_lemmas_json(verify_root_lemmas(a, d));
    if (cfg.command == Command::decompose)
        return report;

    const ConnectionContext ctx =
        ConnectionContext::from(d, cfg.orbit_bound, cfg.strict_connections);
    const ConnectionPartition partition = connection_classes(d, ctx);
    report["connections"] = classes_json(d, partition);
    if (cfg.command == Command::classes)
        return report;

    const PrimaryDecomposition primary = primary_decomposition(a, d, partition);
    report["primary_decomposition"] = primary_decomposition_json(primary);
    report["direct_sum"] = direct_sum_json(direct_sum_check(a, d, primary));
    if (cfg.command == Command::ideals)
        return report;

    const JPartition jpart = lambda_partition_j(a, d, compute_J(a));
    report["j_partition"] = j_partition_json(d, jpart);
    const MaximalLengthReport ml = maximal_length_check(d, cfg.literal_maximal_length);
    report["maximal_length"] = maximal_length_json(ml);
    report["root_multiplicativity"] =
        root_multiplicativity_json(d, root_multiplicativity_check(a, d, jpart, ml.ok));
    report["annihilator"] = subspace_json(annihilator(a));
    report["lie_annihilator"] = {
        {"selected_variant", cfg.lie_annihilator_not_j ? "not-J" : "as-printed"},
        {"as_printed", subspace_json(lie_annihilator(a, d, jpart, false))},
        {"not_J_variant", subspace_json(lie_annihilator(a, d, jpart, true))},
    };
    report["simplicity"] =
        simplicity_json(simplicity_report(a, d, partition, primary, jpart, ctx, ml.ok));
    return report;
}

}  // namespace bihom

#endif
