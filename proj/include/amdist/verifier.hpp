#pragma once

#include <functional>
#include <random>

#include "amdist/hypertree.hpp"
#include "amdist/io.hpp"

namespace amdist {

// What kind of datum an identity wants to be exercised on.
enum class ShapeFlavor {
    Generic,          // free entries, free a_e
    Tree,             // all blocks K2
    Multiplicative,   // all a_e = 1
    ConstantA,        // one shared a
    Hypertree,        // clique blocks with head/tail weights
    QHypertree,       // cliques in the sqrt(q) encoding, a_e = w_e/(q-1)
    QData,            // m = q^alpha, a_e = w_e/(q-1)
    QClassical,       // q-data meant to be evaluated at q = 1
    CorePlusCliques,  // constant-row-sum cores plus pendant cliques
};

struct ShapeSpec {
    ShapeFlavor flavor = ShapeFlavor::Generic;
    // Explicit topology: (block size, attach vertex id); attach ignored for
    // the first block. Empty means randomized from the ranges below.
    std::vector<std::pair<int, int>> topo;
    int min_blocks = 1, max_blocks = 3;
    int min_size = 2, max_size = 3;
    long bound = 10;           // magnitude of random entries
    int max_vertices = 16;     // feasibility cap
    std::string label;

    std::string describe() const;
    static ShapeSpec parse(const std::string& text);  // e.g. "tree:4", "chain:3x3"
};

// A generated datum bundle: the graph plus whatever side-structure the
// flavor carries (clique data, q-encoding, the auxiliary scalars q and x).
template <ScalarRing R>
struct TestDatum {
    GraphDatum<R> g;
    std::map<int, CliqueDatum<R>> cliques;      // block index -> clique data
    std::vector<std::pair<int, R>> q_blocks;    // (p_e, w_e) for q-encoded cliques
    R q = RingTraits<R>::zero();
    bool has_q = false;
    R x = RingTraits<R>::zero();
    int var_count = 0;
};

// Deterministic-from-seed random datum (rational ring).
TestDatum<Rational> random_datum(uint64_t seed, const ShapeSpec& shape);
// Fully symbolic datum: one variable per a_e and per off-diagonal entry.
TestDatum<RationalFunction> symbolic_datum(const ShapeSpec& shape);
// q-data with rational constants but the symbol q kept (for q -> 1 limits).
TestDatum<RationalFunction> semi_symbolic_q_datum(uint64_t seed, const ShapeSpec& shape);

struct TrialFailure {
    int trial = 0;
    std::string line;          // which comparison failed
    std::string lhs, rhs;      // serialized values
    std::string witness;       // datum JSON for reproduction
};

struct TrialReport {
    std::string identity;
    std::string shape;
    int trials_requested = 0;
    int trials_run = 0;
    int rejections = 0;
    std::vector<std::string> rejection_reasons;
    std::vector<TrialFailure> failures;
    double elapsed_seconds = 0;

    bool pass() const { return failures.empty(); }
};

struct IdentitySpec {
    std::string id;
    bool cleared = false;          // stated denominator-free
    bool needs_symbolic_ring = false;  // SZ trials must run over the q-ring
    std::function<CheckReport<Rational>(const TestDatum<Rational>&)> check_rat;
    std::function<CheckReport<RationalFunction>(const TestDatum<RationalFunction>&)> check_sym;
    std::vector<ShapeSpec> default_sym_shapes;
    std::vector<ShapeSpec> default_sz_shapes;
};

const std::vector<IdentitySpec>& identity_catalogue();
const IdentitySpec& find_identity(const std::string& id);

// Evaluates an identity on a datum, optionally with a single injected
// coefficient mutation (rhs of the first line gets + a_{e0}).
template <ScalarRing R>
CheckReport<R> run_identity(const IdentitySpec& spec, const TestDatum<R>& datum, bool mutate);

// Builds the fully symbolic datum for the shape and asserts polynomial
// equality of both sides.
TrialReport symbolic_check(const IdentitySpec& spec, const ShapeSpec& shape,
                           int max_vars = 20, bool mutate = false);

// Random integer sampling in [-bound, bound]; rejected draws (vanishing
// denominators / singular preconditions) are redrawn up to 100 times each.
TrialReport schwartz_zippel_check(const IdentitySpec& spec, const ShapeSpec& shape,
                                  int trials, uint64_t seed, bool mutate = false,
                                  long bound = 1000000);

// Brute-force oracle battery over one datum.
template <ScalarRing R>
TrialReport oracle_suite(const TestDatum<R>& datum);

// Every (I, J) with |I| = |J| <= max_size passing the admissibility
// classification.
template <ScalarRing R>
std::vector<std::pair<std::set<VertexId>, std::set<VertexId>>> admissible_pairs(
    const GraphDatum<R>& g, size_t max_size);

}  // namespace amdist
