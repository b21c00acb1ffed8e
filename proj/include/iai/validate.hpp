#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iai/core.hpp"

namespace iai {

enum class Profile { Atomic, Workflow };
enum class Severity { Error, Warning, Info };

std::string_view to_string(Profile p);
std::string_view to_string(Severity s);
std::optional<Profile> parse_profile(std::string_view text);

/// Rule identifiers, in report order.
enum class Rule {
    R1_RelationLegality,
    R2_AiAtomicity,
    R3_InteractionRequirement,
    R4_CausalActivation,
    R5_Connectivity,
    R6_SequenceCompactness,
    R7_AugComposition,
    R8_RelationMultiplicity,
    // Emitted by apply_edit, not validate.
    E1_EditNoop,
};

std::string_view code(Rule r);
std::string_view rule_name(Rule r);

struct Finding {
    Rule rule;
    Severity severity;
    std::string message;
    /// Index into the graph's sorted edge list; empty for graph-level findings.
    std::optional<std::size_t> edge;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
    Profile profile = Profile::Atomic;
    std::vector<Finding> findings;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool passes() const { return error_count() == 0; }
    bool has(Rule r) const;
    std::size_t count(Rule r) const;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Activation bookkeeping shared by the validator, decomposer and composer.
///
/// H is always active; A starts active only when the artifact is exogenous.
/// G counts as active once invoked through T->G, Aug->G or A->G.
class ActivationState {
public:
    explicit ActivationState(bool exogenous_artifact, EntitySet carried = {});

    bool active(Entity e) const { return active_.contains(e); }
    bool invoked() const { return active_.contains(Entity::G); }
    EntitySet active_set() const { return active_; }

    /// Whether `edge` may fire now: its source is active and, for I->A,
    /// the artifact already exists.
    bool can_fire(EntityPair edge) const;
    void fire(EntityPair edge);

private:
    EntitySet active_;
};

/// Runs every rule of the profile over g. `carried` entities start active,
/// as if handed over by a preceding paradigm.
ValidationReport validate(const ParadigmGraph& g, Profile profile, EntitySet carried = {});

/// Seq values of the distinct invocation events, ascending.
std::vector<int> invocation_seqs(const ParadigmGraph& g);

/// One-line-per-finding text rendering.
std::string format_report(const ParadigmGraph& g, const ValidationReport& report);

}  // namespace iai
