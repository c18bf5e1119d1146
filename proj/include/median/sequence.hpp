#pragma once

#include <median/algebra.hpp>
#include <median/morphism.hpp>

#include <optional>
#include <string>
#include <vector>

namespace median {

struct SplitData {
    AlgebraPtr base;
    ConvexSet a;
    ConvexSet b;
};

struct SplitExtension {
    AlgebraPtr algebra; // (A×{0}) ∪ (B×{1}), one coordinate appended, not canonicalized
    Epimorphism proj;   // drops the appended coordinate
};

SplitExtension split_extension(const AlgebraPtr & k, const Subset & a, const Subset & b);

/// Every nonempty convex subset, sorted.
std::vector<Subset> convex_sets(const MedianAlgebra & m);

/// Unordered covers {A,B} by nonempty convex sets, represented with A ≤ B and
/// sorted by (A,B).
std::vector<SplitData> enumerate_convex_covers(const AlgebraPtr & k, const Limits & limits = {});

/// Median algebras with at most max_points points up to isomorphism, as canonical
/// representatives sorted by (size, carrier).  Generated by iterated splits from
/// the one-point algebra.
std::vector<AlgebraPtr> small_median_algebras(std::size_t max_points);

enum class EnumerationOrder { canonical, reversed };

std::string to_string(EnumerationOrder order);
EnumerationOrder parse_order(const std::string & name);

/// MEDIAN_FRAISSE_CAP when set, else 4096.
std::size_t default_stage_cap();

struct SaturationConfig {
    std::size_t size_bound = 2;
    std::size_t cap = default_stage_cap();
    EnumerationOrder order = EnumerationOrder::canonical;
};

/// One lifting problem (M,N,p,f) with its solution q : L ↠ N, p∘h = f∘q.
struct CertificateEntry {
    AlgebraPtr m;
    AlgebraPtr n;
    Map p; // K ↠ M
    Map f; // N ↠ M
    std::size_t resolved_at = 0; // tower index that first admitted a lift
    Map q; // L ↠ N
};

struct SaturationResult {
    AlgebraPtr algebra; // L
    Epimorphism h;      // L ↠ K
    std::vector<CertificateEntry> certificate;
    std::vector<std::size_t> tower_sizes;
};

/// The lifting problems over k with 1 < |N| ≤ size_bound, one per orbit of (p,f)
/// under Aut(M) × Aut(N), in the configured order.
std::vector<CertificateEntry> saturation_tuples(const AlgebraPtr & k, std::size_t size_bound, EnumerationOrder order);

SaturationResult saturation_step(const AlgebraPtr & k, const SaturationConfig & config);

struct StageProvenance {
    std::string kind; // "initial" or "saturation"
    std::size_t size_bound = 0;
    EnumerationOrder order = EnumerationOrder::canonical;
    std::vector<std::size_t> tower_sizes;
    std::vector<CertificateEntry> certificate;
};

/// Stages with bonds[i] : stages[i+1] ↠ stages[i].
struct InverseSequence {
    std::vector<AlgebraPtr> stages;
    std::vector<Epimorphism> bonds;
    std::vector<StageProvenance> provenance;

    std::size_t length() const { return stages.size(); }
};

/// Checks bond shapes, composability and the epimorphism property of each bond.
void validate_sequence(const InverseSequence & seq);

InverseSequence build_fraisse(std::size_t levels, const SaturationConfig & config);

/// p_α^β : stages[β] ↠ stages[α].
Epimorphism composite_projection(const InverseSequence & seq, std::size_t alpha, std::size_t beta);

struct ExtensionResult {
    std::optional<std::size_t> beta;
    std::optional<Epimorphism> g; // stages[β] ↠ K with f∘g = p_α^β
    std::string report;

    bool found() const { return beta.has_value(); }
};

/// Least β > α with a lift of p_α^β through f : K ↠ stages[α].
ExtensionResult check_extension_property(const InverseSequence & seq, const Epimorphism & f, std::size_t alpha);

struct HalfspaceResult {
    std::optional<std::size_t> beta;
    std::vector<Subset> halfspaces; // sides of stages[β]
    std::string report;

    bool found() const { return beta.has_value(); }
};

/// Halfspace C ⊇ ⋃𝒜 disjoint from ⋃ℬ at some β ≥ α, after pulling back.
HalfspaceResult check_m1(const InverseSequence & seq, std::size_t alpha, const std::vector<Subset> & fa,
                         const std::vector<Subset> & fb);
/// Nonempty halfspace C ⊆ ⋂𝒜 at some β ≥ α, after pulling back.
HalfspaceResult check_m2(const InverseSequence & seq, std::size_t alpha, const std::vector<Subset> & fa);
/// Two disjoint nonempty halfspaces inside the pulled-back A at some β ≥ α.
HalfspaceResult check_m3(const InverseSequence & seq, std::size_t alpha, const Subset & a);

struct Interleaving {
    std::vector<std::size_t> alphas; // alphas[k] indexes seqP
    std::vector<std::size_t> betas;  // betas[k] indexes seqQ
    std::vector<Epimorphism> forth;  // forth[k-1] = h_k : P[α_k] ↠ Q[β_{k-1}]
    std::vector<Epimorphism> back;   // back[k] = j_k : Q[β_k] ↠ P[α_k]; back[0] is the identity
    std::size_t depth = 0;           // completed forth/back rounds
    bool complete = false;           // both sequences used up to their last stage
    std::string stuck_side;          // "P" or "Q" when a step failed
    std::size_t stuck_stage = 0;
    std::string report;
};

Interleaving back_and_forth(const InverseSequence & seq_p, const InverseSequence & seq_q);

} // namespace median
