#include "amdist/verifier.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace amdist {

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

namespace {

const char* flavor_name(ShapeFlavor f) {
    switch (f) {
        case ShapeFlavor::Generic: return "generic";
        case ShapeFlavor::Tree: return "tree";
        case ShapeFlavor::Multiplicative: return "multiplicative";
        case ShapeFlavor::ConstantA: return "constant-a";
        case ShapeFlavor::Hypertree: return "hypertree";
        case ShapeFlavor::QHypertree: return "q-hypertree";
        case ShapeFlavor::QData: return "q-data";
        case ShapeFlavor::QClassical: return "q-classical";
        case ShapeFlavor::CorePlusCliques: return "core-plus-cliques";
    }
    return "?";
}

struct TopoInstance {
    std::vector<std::pair<int, int>> blocks;  // (size, attach vertex; 0 for the first)
    std::vector<bool> is_core;                // CorePlusCliques roles
    int n = 0;
};

TopoInstance realize_topology(const ShapeSpec& shape, std::mt19937_64* rng) {
    TopoInstance t;
    auto push_block = [&](int size, int attach, bool core) {
        t.blocks.push_back({size, attach});
        t.is_core.push_back(core);
        t.n += (t.n == 0) ? size : size - 1;
    };
    if (!shape.topo.empty()) {
        for (size_t i = 0; i < shape.topo.size(); ++i)
            push_block(shape.topo[i].first, i == 0 ? 0 : shape.topo[i].second,
                       shape.flavor == ShapeFlavor::CorePlusCliques && i == 0);
    } else {
        if (!rng) throw ShapeInfeasible("random shape needs a seed");
        int min_total = shape.min_blocks * (shape.min_size - 1) + 1;
        if (min_total > shape.max_vertices)
            throw ShapeInfeasible("minimum vertex count exceeds the cap");
        std::uniform_int_distribution<int> nb(shape.min_blocks, shape.max_blocks);
        std::uniform_int_distribution<int> sz(shape.min_size, shape.max_size);
        int blocks = nb(*rng);
        for (int b = 0; b < blocks; ++b) {
            bool core = shape.flavor == ShapeFlavor::CorePlusCliques &&
                        (b == 0 || (*rng)() % 3 == 0);
            int size = core ? 3 + static_cast<int>((*rng)() % 2) : sz(*rng);
            if (shape.flavor == ShapeFlavor::Tree) size = 2;
            int projected = t.n + (t.n == 0 ? size : size - 1);
            if (projected > shape.max_vertices) {
                if (b >= shape.min_blocks) break;
                throw ShapeInfeasible("cannot fit the requested blocks under the vertex cap");
            }
            int attach = 0;
            if (b > 0) attach = 1 + static_cast<int>((*rng)() % t.n);
            push_block(size, attach, core);
        }
    }
    if (t.n > shape.max_vertices) throw ShapeInfeasible("vertex cap exceeded");
    return t;
}

std::vector<std::vector<VertexId>> block_vertex_lists(const TopoInstance& t) {
    std::vector<std::vector<VertexId>> out;
    int n = 0;
    for (size_t b = 0; b < t.blocks.size(); ++b) {
        auto [size, attach] = t.blocks[b];
        std::vector<VertexId> vs;
        if (b == 0) {
            for (int i = 1; i <= size; ++i) vs.push_back(i);
            n = size;
        } else {
            vs.push_back(attach);
            for (int i = 0; i < size - 1; ++i) vs.push_back(++n);
        }
        std::sort(vs.begin(), vs.end());
        out.push_back(std::move(vs));
    }
    return out;
}

}  // namespace

std::string ShapeSpec::describe() const {
    if (!label.empty()) return label;
    std::ostringstream os;
    os << flavor_name(flavor);
    if (!topo.empty()) {
        os << "[";
        for (size_t i = 0; i < topo.size(); ++i) {
            if (i) os << ",";
            os << topo[i].first;
            if (i) os << "@" << topo[i].second;
        }
        os << "]";
    } else {
        os << "[random " << min_blocks << ".." << max_blocks << " blocks of " << min_size
           << ".." << max_size << "]";
    }
    return os.str();
}

ShapeSpec ShapeSpec::parse(const std::string& text) {
    ShapeSpec s;
    s.label = text;
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto parse_kxs = [&](int def_s) {
        int k = 2, size = def_s;
        auto x = rest.find('x');
        if (x == std::string::npos) {
            if (!rest.empty()) k = std::stoi(rest);
        } else {
            k = std::stoi(rest.substr(0, x));
            size = std::stoi(rest.substr(x + 1));
        }
        return std::pair{k, size};
    };
    if (head == "tree") {
        s.flavor = ShapeFlavor::Tree;
        int k = rest.empty() ? 3 : std::stoi(rest);
        s.min_blocks = s.max_blocks = k;
        s.min_size = s.max_size = 2;
    } else if (head == "chain") {
        auto [k, size] = parse_kxs(3);
        int n = 0;
        for (int b = 0; b < k; ++b) {
            s.topo.push_back({size, b == 0 ? 0 : n});
            n += (b == 0) ? size : size - 1;
        }
    } else if (head == "star") {
        auto [k, size] = parse_kxs(3);
        for (int b = 0; b < k; ++b) s.topo.push_back({size, b == 0 ? 0 : 1});
    } else if (head == "single") {
        int size = rest.empty() ? 3 : std::stoi(rest);
        s.topo.push_back({size, 0});
    } else if (head == "hypertree") {
        s.flavor = ShapeFlavor::Hypertree;
        auto [k, size] = parse_kxs(3);
        s.min_blocks = s.max_blocks = k;
        s.min_size = s.max_size = size;
    } else if (head == "random" || head.empty()) {
        // defaults
    } else {
        throw ParseError("unknown shape: " + text);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Datum builders
// ---------------------------------------------------------------------------

namespace {

long draw(std::mt19937_64& rng, long bound) {
    std::uniform_int_distribution<long> d(-bound, bound);
    return d(rng);
}

long draw_nonzero(std::mt19937_64& rng, long bound) {
    long v = 0;
    for (int tries = 0; tries < 1000 && v == 0; ++tries) v = draw(rng, bound);
    if (v == 0) throw ShapeInfeasible("cannot draw a nonzero value");
    return v;
}

std::string idx_name(const char* stem, size_t e, size_t i, size_t j) {
    std::ostringstream os;
    os << stem << e + 1 << "_" << i + 1 << "_" << j + 1;
    return os.str();
}

std::string idx_name2(const char* stem, size_t e, size_t v) {
    std::ostringstream os;
    os << stem << e + 1 << "_" << v + 1;
    return os.str();
}

std::string idx_name1(const char* stem, size_t e) {
    std::ostringstream os;
    os << stem << e + 1;
    return os.str();
}

// alpha exponent pattern for symbolic q-data (fixed, deterministic).
int alpha_pattern(size_t e, size_t i, size_t j) {
    return 1 + static_cast<int>((e + 2 * i + 3 * j) % 3);
}

template <ScalarRing R>
Matrix<R> cycle_dstar(size_t p, const R& u) {
    Matrix<R> m(p, p);
    for (size_t i = 0; i < p; ++i)
        for (size_t j = 0; j < p; ++j)
            m(i, j) = (i == j) ? RingTraits<R>::one()
                               : ring_pow(u, static_cast<long>((j + p - i) % p));
    return m;
}

}  // namespace

TestDatum<Rational> random_datum(uint64_t seed, const ShapeSpec& shape) {
    std::mt19937_64 rng(seed);
    TopoInstance topo = realize_topology(shape, &rng);
    auto lists = block_vertex_lists(topo);
    const long bound = shape.bound;

    TestDatum<Rational> td;
    td.x = Rational(draw(rng, bound));
    Rational q0(0);
    bool flavor_has_q = shape.flavor == ShapeFlavor::QHypertree ||
                        shape.flavor == ShapeFlavor::QData;
    if (flavor_has_q) {
        do {
            q0 = Rational(draw(rng, bound));
        } while (q0 == 0 || q0 == 1);
        td.q = q0;
        td.has_q = true;
    }
    Rational shared_a(0);
    if (shape.flavor == ShapeFlavor::ConstantA) shared_a = Rational(draw_nonzero(rng, bound));

    std::vector<BlockDatum<Rational>> blocks;
    for (size_t e = 0; e < lists.size(); ++e) {
        size_t p = lists[e].size();
        BlockDatum<Rational> b;
        b.vertices = lists[e];
        switch (shape.flavor) {
            case ShapeFlavor::Generic:
            case ShapeFlavor::Tree: {
                b.a = Rational(draw_nonzero(rng, bound));
                b.dstar = Matrix<Rational>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j) b.dstar(i, j) = Rational(draw(rng, bound));
                break;
            }
            case ShapeFlavor::Multiplicative:
            case ShapeFlavor::ConstantA: {
                b.a = shape.flavor == ShapeFlavor::Multiplicative ? Rational(1) : shared_a;
                b.dstar = Matrix<Rational>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j) b.dstar(i, j) = Rational(draw(rng, bound));
                break;
            }
            case ShapeFlavor::Hypertree: {
                CliqueDatum<Rational> c;
                c.p = p;
                c.a = Rational(draw_nonzero(rng, bound));
                for (size_t v = 0; v < p; ++v) {
                    c.m.push_back(Rational(draw(rng, bound)));
                    c.mp.push_back(Rational(draw(rng, bound)));
                }
                b.a = c.a;
                b.dstar = clique_dstar(c);
                td.cliques[static_cast<int>(e)] = std::move(c);
                break;
            }
            case ShapeFlavor::QHypertree: {
                Rational w(draw_nonzero(rng, bound));
                CliqueDatum<Rational> c = q_clique(static_cast<int>(p), w, q0);
                b.a = c.a;
                b.dstar = clique_dstar(c);
                td.cliques[static_cast<int>(e)] = std::move(c);
                td.q_blocks.push_back({static_cast<int>(p), w});
                break;
            }
            case ShapeFlavor::QData: {
                Rational w(draw_nonzero(rng, bound));
                b.a = w / (q0 - 1);
                b.dstar = Matrix<Rational>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j)
                            b.dstar(i, j) = rational_pow(q0, 1 + static_cast<long>(rng() % 3));
                break;
            }
            case ShapeFlavor::QClassical:
                throw ShapeInfeasible("q-classical data live in the symbolic q ring");
            case ShapeFlavor::CorePlusCliques: {
                if (topo.is_core[e]) {
                    Rational u(draw_nonzero(rng, bound));
                    b.a = Rational(draw_nonzero(rng, bound));
                    b.dstar = cycle_dstar(p, u);
                } else {
                    CliqueDatum<Rational> c;
                    c.p = p;
                    c.a = Rational(draw_nonzero(rng, bound));
                    for (size_t v = 0; v < p; ++v) {
                        c.m.push_back(Rational(draw(rng, bound)));
                        c.mp.push_back(Rational(draw(rng, bound)));
                    }
                    b.a = c.a;
                    b.dstar = clique_dstar(c);
                    td.cliques[static_cast<int>(e)] = std::move(c);
                }
                break;
            }
        }
        blocks.push_back(std::move(b));
    }
    td.g = validate_datum(topo.n, std::move(blocks));
    return td;
}

TestDatum<RationalFunction> symbolic_datum(const ShapeSpec& shape) {
    TopoInstance topo = realize_topology(shape, nullptr);
    auto lists = block_vertex_lists(topo);
    TestDatum<RationalFunction> td;
    std::set<std::string> vars;
    auto var = [&](const std::string& name) {
        vars.insert(name);
        return RationalFunction::variable(name);
    };
    td.x = var("x");
    RationalFunction q;
    bool flavor_has_q = shape.flavor == ShapeFlavor::QHypertree ||
                        shape.flavor == ShapeFlavor::QData ||
                        shape.flavor == ShapeFlavor::QClassical;
    if (flavor_has_q) {
        q = var("q");
        td.q = q;
        td.has_q = true;
    }
    RationalFunction shared_a;
    if (shape.flavor == ShapeFlavor::ConstantA) shared_a = var("a");

    std::vector<BlockDatum<RationalFunction>> blocks;
    for (size_t e = 0; e < lists.size(); ++e) {
        size_t p = lists[e].size();
        BlockDatum<RationalFunction> b;
        b.vertices = lists[e];
        switch (shape.flavor) {
            case ShapeFlavor::Generic:
            case ShapeFlavor::Tree: {
                b.a = var(idx_name1("a", e));
                b.dstar = Matrix<RationalFunction>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j) b.dstar(i, j) = var(idx_name("m", e, i, j));
                break;
            }
            case ShapeFlavor::Multiplicative:
            case ShapeFlavor::ConstantA: {
                b.a = shape.flavor == ShapeFlavor::Multiplicative ? RationalFunction(1)
                                                                  : shared_a;
                b.dstar = Matrix<RationalFunction>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j) b.dstar(i, j) = var(idx_name("m", e, i, j));
                break;
            }
            case ShapeFlavor::Hypertree:
            case ShapeFlavor::CorePlusCliques: {
                bool core = shape.flavor == ShapeFlavor::CorePlusCliques && topo.is_core[e];
                if (core) {
                    RationalFunction u = var(idx_name1("u", e));
                    b.a = var(idx_name1("a", e));
                    b.dstar = cycle_dstar(p, u);
                } else {
                    CliqueDatum<RationalFunction> c;
                    c.p = p;
                    c.a = var(idx_name1("a", e));
                    for (size_t v = 0; v < p; ++v) {
                        c.m.push_back(var(idx_name2("hm", e, v)));
                        c.mp.push_back(var(idx_name2("hn", e, v)));
                    }
                    b.a = c.a;
                    b.dstar = clique_dstar(c);
                    td.cliques[static_cast<int>(e)] = std::move(c);
                }
                break;
            }
            case ShapeFlavor::QHypertree: {
                RationalFunction w = var(idx_name1("w", e));
                CliqueDatum<RationalFunction> c = q_clique(static_cast<int>(p), w, q);
                b.a = c.a;
                b.dstar = clique_dstar(c);
                td.cliques[static_cast<int>(e)] = std::move(c);
                td.q_blocks.push_back({static_cast<int>(p), w});
                break;
            }
            case ShapeFlavor::QData:
            case ShapeFlavor::QClassical: {
                RationalFunction w = var(idx_name1("w", e));
                b.a = w / (q - RationalFunction(1));
                b.dstar = Matrix<RationalFunction>::identity(p);
                for (size_t i = 0; i < p; ++i)
                    for (size_t j = 0; j < p; ++j)
                        if (i != j) b.dstar(i, j) = ring_pow(q, alpha_pattern(e, i, j));
                break;
            }
        }
        blocks.push_back(std::move(b));
    }
    td.g = validate_datum(topo.n, std::move(blocks));
    td.var_count = static_cast<int>(vars.size());
    return td;
}

TestDatum<RationalFunction> semi_symbolic_q_datum(uint64_t seed, const ShapeSpec& shape) {
    std::mt19937_64 rng(seed);
    TopoInstance topo = realize_topology(shape, &rng);
    auto lists = block_vertex_lists(topo);
    const long bound = shape.bound;
    TestDatum<RationalFunction> td;
    td.x = RationalFunction(Rational(draw(rng, bound)));
    RationalFunction q = RationalFunction::variable("q");
    td.q = q;
    td.has_q = true;
    std::vector<BlockDatum<RationalFunction>> blocks;
    for (size_t e = 0; e < lists.size(); ++e) {
        size_t p = lists[e].size();
        BlockDatum<RationalFunction> b;
        b.vertices = lists[e];
        RationalFunction w(Rational(draw_nonzero(rng, bound)));
        b.a = w / (q - RationalFunction(1));
        b.dstar = Matrix<RationalFunction>::identity(p);
        for (size_t i = 0; i < p; ++i)
            for (size_t j = 0; j < p; ++j)
                if (i != j) b.dstar(i, j) = ring_pow(q, 1 + static_cast<long>(rng() % 3));
        blocks.push_back(std::move(b));
    }
    td.g = validate_datum(topo.n, std::move(blocks));
    td.var_count = 1;
    return td;
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

namespace {

template <ScalarRing R>
struct Ctx {
    const GraphDatum<R>& g;
    AmMatrices<R> am;
    std::vector<BlockInvariants<R>> bi;
    R det_d, cof_d, kappa_direct, kappa_prod, det_star, cof_star, a_pow_prod;

    explicit Ctx(const GraphDatum<R>& gd)
        : g(gd), am(build_matrices(gd)), bi(all_block_invariants(gd)) {
        const size_t n = g.n();
        det_d = exact_det(am.d);
        cof_d = exact_det(am.d + Matrix<R>::ones(n, n)) - det_d;
        kappa_direct = kappa_of(am, g.vertices.front());
        kappa_prod = RingTraits<R>::one();
        for (auto& b : bi) kappa_prod = kappa_prod * b.kappa_e;
        det_star = exact_det(am.dstar);
        cof_star = exact_det(am.dstar + Matrix<R>::ones(n, n)) - det_star;
        a_pow_prod = RingTraits<R>::one();
        for (auto& b : g.blocks)
            a_pow_prod = a_pow_prod * ring_pow(b.a, static_cast<long>(b.p()) - 1);
    }

    R others_kappa(size_t e) const {
        R acc = RingTraits<R>::one();
        for (size_t f = 0; f < bi.size(); ++f)
            if (f != e) acc = acc * bi[f].kappa_e;
        return acc;
    }
};

template <ScalarRing R>
CheckReport<R> check_mghh1(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    R rhs = c.det_star * c.a_pow_prod;
    for (VertexId v0 : td.g.vertices)
        rep.add("kappa@v" + std::to_string(v0), kappa_of(c.am, v0), rhs);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_mghh2(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    rep.add("kappa=prod", c.kappa_direct, c.kappa_prod);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_mghh3(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    R rhs = RingTraits<R>::zero();
    for (size_t e = 0; e < c.bi.size(); ++e)
        rhs = rhs + c.bi[e].det_e * c.others_kappa(e);
    rep.add("det*prod_kappa", c.det_d * c.kappa_prod, c.kappa_direct * rhs);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_mghh4(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    R rhs = RingTraits<R>::zero();
    for (size_t e = 0; e < c.bi.size(); ++e)
        rhs = rhs + (c.bi[e].cof_e - c.bi[e].kappa_e) * c.others_kappa(e);
    rep.add("(cof-kappa)*prod_kappa", (c.cof_d - c.kappa_direct) * c.kappa_prod,
            c.kappa_direct * rhs);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_mghh5(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    rep.add("cof", c.cof_d, c.cof_star * c.a_pow_prod);
    rep.add("cof*det_star", c.cof_d * c.det_star, c.cof_star * c.kappa_direct);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_pmaster_det(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    R rhs = RingTraits<R>::zero();
    for (size_t e = 0; e < c.bi.size(); ++e)
        rhs = rhs + c.bi[e].det_e * c.others_kappa(e);
    rep.add("det", c.det_d, rhs);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_pmaster_cof(const TestDatum<R>& td) {
    Ctx<R> c(td.g);
    CheckReport<R> rep;
    R rhs = c.det_star * c.a_pow_prod;
    for (size_t e = 0; e < c.bi.size(); ++e)
        rhs = rhs + (c.bi[e].cof_e - c.bi[e].kappa_e) * c.others_kappa(e);
    rep.add("cof", c.cof_d, rhs);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_etemp(const TestDatum<R>& td) {
    CheckReport<R> rep;
    auto bi = all_block_invariants(td.g);
    for (size_t e = 0; e < bi.size(); ++e) {
        rep.add("block" + std::to_string(e), bi[e].det_e * bi[e].det_star,
                td.g.blocks[e].a * (bi[e].det_star - bi[e].cof_star) * bi[e].kappa_e);
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eghh12(const TestDatum<R>& td) {
    return classical_ghh_check(td.g, GhhFlavor::Multiplicative);
}

template <ScalarRing R>
CheckReport<R> check_eghh34(const TestDatum<R>& td) {
    return classical_ghh_check(td.g, GhhFlavor::Q);
}

template <ScalarRing R>
CheckReport<R> check_eghh56(const TestDatum<R>& td) {
    if constexpr (RingTraits<R>::symbolic) {
        return classical_ghh_check(td.g, GhhFlavor::Classical);
    } else {
        throw WrongSpecialization("classical GHH runs over the symbolic q ring");
    }
}

template <ScalarRing R>
CheckReport<R> check_emaster(const TestDatum<R>& td) {
    CheckReport<R> rep;
    const R one = RingTraits<R>::one();
    const size_t k = td.g.blocks.size();
    std::vector<R> a(k), m(k), mp(k), mm1(k);  // mm1 = m m' - 1
    for (size_t e = 0; e < k; ++e) {
        const BlockDatum<R>& b = td.g.blocks[e];
        if (b.p() != 2) throw ShapeInfeasible("tree master formula needs edge blocks");
        a[e] = b.a;
        m[e] = b.dstar(0, 1);
        mp[e] = b.dstar(1, 0);
        mm1[e] = m[e] * mp[e] - one;
    }
    auto others_mm1 = [&](size_t e) {
        R acc = one;
        for (size_t f = 0; f < k; ++f)
            if (f != e) acc = acc * mm1[f];
        return acc;
    };
    AmMatrices<R> am = build_matrices(td.g);
    const size_t n = td.g.n();
    Matrix<R> dxj = am.d + Matrix<R>::ones(n, n) * td.x;
    R all_mm1 = one;
    for (size_t e = 0; e < k; ++e) all_mm1 = all_mm1 * mm1[e];
    R lhs = exact_det(dxj) * all_mm1;

    R kappa = one;
    for (size_t e = 0; e < k; ++e) kappa = kappa * (a[e] * -mm1[e]);
    R sum_a = RingTraits<R>::zero(), sum_1 = RingTraits<R>::zero();
    for (size_t e = 0; e < k; ++e) {
        R t = (m[e] - one) * (mp[e] - one) * others_mm1(e);
        sum_a = sum_a + a[e] * t;
        sum_1 = sum_1 + t;
    }
    R rhs = kappa * (sum_a + td.x * (all_mm1 - sum_1));
    rep.add("master", lhs, rhs);
    return rep;
}

std::string set_str(const std::set<VertexId>& s) {
    std::string out = "{";
    for (VertexId v : s) out += std::to_string(v) + ",";
    if (out.size() > 1) out.pop_back();
    return out + "}";
}

template <ScalarRing R>
CheckReport<R> check_minor_det(const TestDatum<R>& td) {
    CheckReport<R> rep;
    AmMatrices<R> am = build_matrices(td.g);
    const size_t n = td.g.n();
    Matrix<R> dxj = am.d + Matrix<R>::ones(n, n) * td.x;
    size_t cap = n <= 8 ? 2 : 1;
    for (auto& [I, J] : admissible_pairs(td.g, cap)) {
        R closed = minor_det(td.g, I, J, td.x);
        std::vector<VertexId> rows, cols;
        for (VertexId v : td.g.vertices) {
            if (!I.count(v)) rows.push_back(v);
            if (!J.count(v)) cols.push_back(v);
        }
        R brute = exact_det(dxj.submatrix_labels(rows, cols));
        rep.add("I=" + set_str(I) + " J=" + set_str(J), brute, closed);
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_minor_kappa(const TestDatum<R>& td) {
    CheckReport<R> rep;
    AmMatrices<R> am = build_matrices(td.g);
    size_t cap = td.g.n() <= 8 ? 2 : 1;
    for (auto& [I, J] : admissible_pairs(td.g, cap)) {
        for (VertexId v0 : td.g.vertices) {
            if (I.count(v0) || J.count(v0)) continue;
            R closed = minor_kappa(td.g, I, J, v0);
            R direct = minor_kappa_direct(am, I, J, v0);
            rep.add("I=" + set_str(I) + " J=" + set_str(J) + " v0=" + std::to_string(v0),
                    direct, closed);
        }
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_lminors(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Ctx<R> c(td.g);
    const size_t n = td.g.n();
    R expected = c.kappa_direct;
    if (n % 2 == 0) expected = -expected;
    size_t probes = std::min<size_t>(n, 4);
    for (size_t vi = 0; vi < probes; ++vi) {
        VertexId v = td.g.vertices[vi];
        for (int which = 0; which < 2; ++which) {
            R x = which == 0 ? RingTraits<R>::zero() : td.x;
            Matrix<R> m(n + 1, n + 1);
            size_t vc = c.am.dstar.col_index(v);
            for (size_t i = 0; i < n; ++i) {
                m(i, 0) = c.am.dstar(i, vc);
                for (size_t j = 0; j < n; ++j) m(i, j + 1) = c.am.d(i, j) + x;
            }
            for (size_t j = 0; j < n; ++j) m(n, j + 1) = RingTraits<R>::one();
            rep.add("v=" + std::to_string(v) + (which ? " x" : " x=0"), exact_det(m),
                    expected);
        }
    }
    return rep;
}

template <ScalarRing R>
void add_matrix_identity(CheckReport<R>& rep, const std::string& tag, const Matrix<R>& lhs,
                         const Matrix<R>& rhs) {
    for (size_t i = 0; i < lhs.rows(); ++i)
        for (size_t j = 0; j < lhs.cols(); ++j)
            rep.add(tag + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                    lhs(i, j), rhs(i, j));
}

template <ScalarRing R>
CheckReport<R> check_einverse(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Matrix<R> inv = inverse_closed_form(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    add_matrix_identity(rep, "D*Dinv", am.d * inv, Matrix<R>::identity(td.g.n()));
    add_matrix_identity(rep, "Dinv*D", inv * am.d, Matrix<R>::identity(td.g.n()));
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eghh_inverse(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Matrix<R> assembled = dstar_inverse_assembled(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    add_matrix_identity(rep, "D**inv", am.dstar * assembled,
                        Matrix<R>::identity(td.g.n()));
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eprojesh22(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Ctx<R> c(td.g);
    InverseParts<R> parts = compute_parts(td.g);
    R tau_in_sum = RingTraits<R>::zero(), tau_out_sum = RingTraits<R>::zero();
    for (auto& t : parts.tau_in) tau_in_sum = tau_in_sum + t;
    for (auto& t : parts.tau_out) tau_out_sum = tau_out_sum + t;
    rep.add("det_star*sum_tau_in", c.det_star * tau_in_sum, c.cof_star);
    rep.add("det_star*sum_tau_out", c.det_star * tau_out_sum, c.cof_star);
    rep.add("cof_star*kappa", c.cof_star * c.kappa_direct, c.cof_d * c.det_star);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eprojesh23(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Ctx<R> c(td.g);
    InverseParts<R> parts = compute_parts(td.g);
    const size_t n = td.g.n();
    for (size_t j = 0; j < n; ++j) {
        R colsum = RingTraits<R>::zero();
        for (size_t i = 0; i < n; ++i) colsum = colsum + parts.c_matrix(i, j);
        rep.add("col" + std::to_string(j + 1), c.det_d * colsum, c.kappa_direct - c.cof_d);
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eprojesh24(const TestDatum<R>& td) {
    CheckReport<R> rep;
    InverseParts<R> parts = compute_parts(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    const size_t n = td.g.n();
    Matrix<R> cd = parts.c_matrix;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cd(i, j) = cd(i, j) * parts.tau_in[j];
    Matrix<R> combo = cd - parts.laplacian;
    add_matrix_identity(rep, "C", parts.c_matrix, combo * am.dstar);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_ptreelike(const TestDatum<R>& td) {
    CheckReport<R> rep;
    InverseParts<R> parts = compute_parts(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    const size_t n = td.g.n();
    Matrix<R> cd = parts.c_matrix;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cd(i, j) = cd(i, j) * parts.tau_in[j];
    Matrix<R> out = cd - parts.laplacian;
    R scale = RingTraits<R>::one() / parts.alpha;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out(i, j) = out(i, j) + scale * parts.tau_out[i] * parts.tau_in[j];
    add_matrix_identity(rep, "D*L-form", am.d * out, Matrix<R>::identity(n));
    // tau_in^T m_{.->l} = 1 for every column l
    for (size_t l = 0; l < n; ++l) {
        R acc = RingTraits<R>::zero();
        for (size_t v = 0; v < n; ++v) acc = acc + parts.tau_in[v] * am.dstar(v, l);
        rep.add("tau_in*m_col" + std::to_string(l + 1), acc, RingTraits<R>::one());
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_rae_constant(const TestDatum<R>& td) {
    CheckReport<R> rep;
    const R& a = td.g.blocks.front().a;
    for (auto& b : td.g.blocks)
        if (!(b.a == a)) throw WrongSpecialization("constant-a flavor required");
    InverseParts<R> parts = compute_parts(td.g);
    Matrix<R> expect_c = Matrix<R>::identity(td.g.n()) * (RingTraits<R>::one() / a);
    add_matrix_identity(rep, "C=(1/a)Id", parts.c_matrix, expect_c);
    Matrix<R> sm = q_inverse_special(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    add_matrix_identity(rep, "SM-inverse", am.d * sm, Matrix<R>::identity(td.g.n()));
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_qinv(const TestDatum<R>& td) {
    CheckReport<R> rep;
    Matrix<R> sm = q_inverse_special(td.g);
    AmMatrices<R> am = build_matrices(td.g);
    add_matrix_identity(rep, "Dq*inv", am.d * sm, Matrix<R>::identity(td.g.n()));
    Matrix<R> closed = inverse_closed_form(td.g);
    add_matrix_identity(rep, "inv=closed", sm, closed);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_hypertree_mult(const TestDatum<R>& td) {
    CheckReport<R> rep;
    if (td.cliques.empty()) throw ShapeInfeasible("hypertree flavor required");
    for (auto& [idx, c] : td.cliques) {
        Matrix<R> ds = clique_dstar(c);
        R det_direct = exact_det(ds);
        R cof_direct = exact_det(ds + Matrix<R>::ones(c.p, c.p)) - det_direct;
        auto [det_closed, cof_closed] = clique_det_cof(c);
        rep.add("det_block" + std::to_string(idx), det_direct, det_closed);
        rep.add("cof_block" + std::to_string(idx), cof_direct, cof_closed);
    }
    return rep;
}

template <ScalarRing R>
std::vector<HypertreeBlock<R>> hypertree_blocks_of(const TestDatum<R>& td) {
    if (td.cliques.size() != td.g.blocks.size())
        throw InvalidHypertree("datum is not a pure hypertree");
    std::vector<HypertreeBlock<R>> out;
    for (size_t e = 0; e < td.g.blocks.size(); ++e) {
        HypertreeBlock<R> hb;
        hb.vertices = td.g.blocks[e].vertices;
        hb.clique = td.cliques.at(static_cast<int>(e));
        out.push_back(std::move(hb));
    }
    return out;
}

template <ScalarRing R>
CheckReport<R> check_hypertree_inv(const TestDatum<R>& td) {
    CheckReport<R> rep;
    auto blocks = hypertree_blocks_of(td);
    int n_id = td.g.vertices.back();
    InvariantTriple<R> closed = hypertree_invariants(n_id, blocks);
    AmMatrices<R> am = build_matrices(td.g);
    InvariantTriple<R> direct = invariants_direct(am, td.g);
    InvariantTriple<R> ghh = invariants_ghh(td.g);
    rep.add("det_vs_direct", direct.det, closed.det);
    rep.add("cof_vs_direct", direct.cof, closed.cof);
    rep.add("kappa_vs_direct", direct.kappa, closed.kappa);
    rep.add("det_vs_ghh", ghh.det, closed.det);
    rep.add("cof_vs_ghh", ghh.cof, closed.cof);
    rep.add("kappa_vs_ghh", ghh.kappa, closed.kappa);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_hypertree_q(const TestDatum<R>& td) {
    CheckReport<R> rep;
    if (td.q_blocks.empty()) throw ShapeInfeasible("q-hypertree flavor required");
    auto [kappa_closed, detx_closed] = hypertree_q(td.q_blocks, td.q, td.x);
    Ctx<R> c(td.g);
    const size_t n = td.g.n();
    R detx_direct = exact_det(c.am.d + Matrix<R>::ones(n, n) * td.x);
    rep.add("kappa", c.kappa_direct, kappa_closed);
    rep.add("det_plus_xJ", detx_direct, detx_closed);
    // the sqrt(q) encoding leaves every off-diagonal product equal to q
    for (auto& [idx, cl] : td.cliques) {
        bool ok = true;
        for (size_t i = 0; i < cl.p && ok; ++i)
            for (size_t j = 0; j < cl.p && ok; ++j)
                if (i != j) ok = cl.m[i] * cl.mp[j] == td.q;
        rep.add("encoding_block" + std::to_string(idx),
                ok ? RingTraits<R>::one() : RingTraits<R>::zero(), RingTraits<R>::one());
    }
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_hypertree_inverse(const TestDatum<R>& td) {
    CheckReport<R> rep;
    auto blocks = hypertree_blocks_of(td);
    int n_id = td.g.vertices.back();
    InverseParts<R> closed = hypertree_inverse_parts(n_id, blocks);
    InverseParts<R> general = compute_parts(td.g);
    rep.add("alpha", general.alpha, closed.alpha);
    for (size_t i = 0; i < general.tau_in.size(); ++i) {
        rep.add("tau_in" + std::to_string(i + 1), general.tau_in[i], closed.tau_in[i]);
        rep.add("tau_out" + std::to_string(i + 1), general.tau_out[i], closed.tau_out[i]);
    }
    for (auto& [v, b] : general.beta)
        rep.add("beta" + std::to_string(v), b, closed.beta.at(v));
    add_matrix_identity(rep, "L", general.laplacian, closed.laplacian);
    add_matrix_identity(rep, "C", general.c_matrix, closed.c_matrix);
    return rep;
}

template <ScalarRing R>
CheckReport<R> check_eaddcliques(const TestDatum<R>& td) {
    CheckReport<R> rep;
    PendantCliqueInput<R> in{td.g, td.cliques};
    R closed = pendant_clique_det(in, td.x);
    AmMatrices<R> am = build_matrices(td.g);
    const size_t n = td.g.n();
    R brute = exact_det(am.d + Matrix<R>::ones(n, n) * td.x);
    rep.add("det_plus_xJ", brute, closed);
    return rep;
}

ShapeSpec sym_shape(ShapeFlavor f, std::vector<std::pair<int, int>> topo) {
    ShapeSpec s;
    s.flavor = f;
    s.topo = std::move(topo);
    return s;
}

ShapeSpec rand_shape(ShapeFlavor f, int min_b, int max_b, int min_s, int max_s) {
    ShapeSpec s;
    s.flavor = f;
    s.min_blocks = min_b;
    s.max_blocks = max_b;
    s.min_size = min_s;
    s.max_size = max_s;
    return s;
}

template <ScalarRing R>
using CheckFn = CheckReport<R> (*)(const TestDatum<R>&);

IdentitySpec make_spec(std::string id, bool cleared, CheckFn<Rational> rat,
                       CheckFn<RationalFunction> sym, std::vector<ShapeSpec> sym_shapes,
                       std::vector<ShapeSpec> sz_shapes, bool needs_symbolic_ring = false) {
    IdentitySpec s;
    s.id = std::move(id);
    s.cleared = cleared;
    s.needs_symbolic_ring = needs_symbolic_ring;
    s.check_rat = rat;
    s.check_sym = sym;
    s.default_sym_shapes = std::move(sym_shapes);
    s.default_sz_shapes = std::move(sz_shapes);
    return s;
}

}  // namespace

template <ScalarRing R>
std::vector<std::pair<std::set<VertexId>, std::set<VertexId>>> admissible_pairs(
    const GraphDatum<R>& g, size_t max_size) {
    std::vector<std::pair<std::set<VertexId>, std::set<VertexId>>> out;
    const auto& vs = g.vertices;
    std::vector<std::set<VertexId>> subsets{{}};
    for (size_t sz = 1; sz <= max_size && sz + 3 <= g.n(); ++sz) {
        std::vector<size_t> idx(sz);
        std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
            if (depth == sz) {
                std::set<VertexId> s;
                for (size_t d = 0; d < sz; ++d) s.insert(vs[idx[d]]);
                subsets.push_back(std::move(s));
                return;
            }
            for (size_t i = start; i < vs.size(); ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
    }
    for (auto& I : subsets)
        for (auto& J : subsets) {
            if (I.size() != J.size()) continue;
            if (classify_minor(g, I, J).admissible()) out.push_back({I, J});
        }
    return out;
}

template std::vector<std::pair<std::set<VertexId>, std::set<VertexId>>> admissible_pairs(
    const GraphDatum<Rational>&, size_t);
template std::vector<std::pair<std::set<VertexId>, std::set<VertexId>>> admissible_pairs(
    const GraphDatum<RationalFunction>&, size_t);

const std::vector<IdentitySpec>& identity_catalogue() {
    static const std::vector<IdentitySpec> catalogue = [] {
        std::vector<IdentitySpec> c;
        auto path22 = sym_shape(ShapeFlavor::Generic, {{2, 0}, {2, 2}});
        auto mix23 = sym_shape(ShapeFlavor::Generic, {{2, 0}, {3, 2}});
        auto single3 = sym_shape(ShapeFlavor::Generic, {{3, 0}});
        auto chain3 = sym_shape(ShapeFlavor::Generic, {{2, 0}, {2, 2}, {2, 3}});
        auto gen_small = std::vector<ShapeSpec>{path22, mix23, single3};
        auto gen_rand = std::vector<ShapeSpec>{rand_shape(ShapeFlavor::Generic, 1, 4, 2, 4)};
        auto tree_sym = std::vector<ShapeSpec>{
            sym_shape(ShapeFlavor::Tree, {{2, 0}, {2, 2}}),
            sym_shape(ShapeFlavor::Tree, {{2, 0}, {2, 1}, {2, 2}})};
        auto tree_rand = std::vector<ShapeSpec>{rand_shape(ShapeFlavor::Tree, 1, 6, 2, 2)};
        auto hyper_sym = std::vector<ShapeSpec>{
            sym_shape(ShapeFlavor::Hypertree, {{3, 0}, {2, 1}}),
            sym_shape(ShapeFlavor::Hypertree, {{3, 0}, {3, 3}})};
        auto hyper_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::Hypertree, 1, 3, 2, 4)};
        auto qh_sym =
            std::vector<ShapeSpec>{sym_shape(ShapeFlavor::QHypertree, {{3, 0}, {2, 1}})};
        auto qh_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::QHypertree, 1, 3, 2, 4)};
        auto qd_sym = std::vector<ShapeSpec>{sym_shape(ShapeFlavor::QData, {{2, 0}, {3, 2}})};
        auto qd_rand = std::vector<ShapeSpec>{rand_shape(ShapeFlavor::QData, 1, 4, 2, 4)};
        auto qc_sym = std::vector<ShapeSpec>{
            sym_shape(ShapeFlavor::QClassical, {{2, 0}, {3, 2}})};
        auto qc_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::QClassical, 1, 4, 2, 3)};
        auto mult_sym = std::vector<ShapeSpec>{
            sym_shape(ShapeFlavor::Multiplicative, {{3, 0}, {2, 1}})};
        auto mult_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::Multiplicative, 1, 4, 2, 4)};
        auto consta_sym =
            std::vector<ShapeSpec>{sym_shape(ShapeFlavor::ConstantA, {{3, 0}, {2, 1}})};
        auto consta_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::ConstantA, 1, 4, 2, 4)};
        auto cpc_sym = std::vector<ShapeSpec>{
            sym_shape(ShapeFlavor::CorePlusCliques, {{4, 0}, {3, 1}, {2, 1}})};
        auto cpc_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::CorePlusCliques, 2, 3, 2, 4)};
        auto inv_sym = std::vector<ShapeSpec>{path22, single3};
        auto minor_sym = std::vector<ShapeSpec>{
            chain3, sym_shape(ShapeFlavor::Generic, {{2, 0}, {3, 2}, {2, 4}})};
        auto minor_rand =
            std::vector<ShapeSpec>{rand_shape(ShapeFlavor::Generic, 2, 4, 2, 3)};

        c.push_back(make_spec("MGHH1", false, check_mghh1<Rational>,
                              check_mghh1<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("MGHH2", false, check_mghh2<Rational>,
                              check_mghh2<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("MGHH3", true, check_mghh3<Rational>,
                              check_mghh3<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("MGHH4", true, check_mghh4<Rational>,
                              check_mghh4<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("MGHH5", false, check_mghh5<Rational>,
                              check_mghh5<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("PMASTER_DET", false, check_pmaster_det<Rational>,
                              check_pmaster_det<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("PMASTER_COF", false, check_pmaster_cof<Rational>,
                              check_pmaster_cof<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("ETEMP", true, check_etemp<Rational>,
                              check_etemp<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("EGHH12", false, check_eghh12<Rational>,
                              check_eghh12<RationalFunction>, mult_sym, mult_rand));
        c.push_back(make_spec("EGHH34", false, check_eghh34<Rational>,
                              check_eghh34<RationalFunction>, qd_sym, qd_rand));
        c.push_back(make_spec("EGHH56", false, check_eghh56<Rational>,
                              check_eghh56<RationalFunction>, qc_sym, qc_rand,
                              /*needs_symbolic_ring=*/true));
        c.push_back(make_spec("EMASTER", true, check_emaster<Rational>,
                              check_emaster<RationalFunction>, tree_sym, tree_rand));
        c.push_back(make_spec("MINOR_DET", true, check_minor_det<Rational>,
                              check_minor_det<RationalFunction>, minor_sym, minor_rand));
        c.push_back(make_spec("MINOR_KAPPA", false, check_minor_kappa<Rational>,
                              check_minor_kappa<RationalFunction>, minor_sym, minor_rand));
        c.push_back(make_spec("LMINORS", false, check_lminors<Rational>,
                              check_lminors<RationalFunction>, gen_small, gen_rand));
        c.push_back(make_spec("EINVERSE", false, check_einverse<Rational>,
                              check_einverse<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("EGHH_INVERSE", false, check_eghh_inverse<Rational>,
                              check_eghh_inverse<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("EPROJESH22", true, check_eprojesh22<Rational>,
                              check_eprojesh22<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("EPROJESH23", true, check_eprojesh23<Rational>,
                              check_eprojesh23<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("EPROJESH24", false, check_eprojesh24<Rational>,
                              check_eprojesh24<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("PTREELIKE", false, check_ptreelike<Rational>,
                              check_ptreelike<RationalFunction>, inv_sym, gen_rand));
        c.push_back(make_spec("RAE_CONSTANT", false, check_rae_constant<Rational>,
                              check_rae_constant<RationalFunction>, consta_sym,
                              consta_rand));
        c.push_back(make_spec("QINV", false, check_qinv<Rational>,
                              check_qinv<RationalFunction>, qd_sym, qd_rand));
        c.push_back(make_spec("HYPERTREE_MULT", true, check_hypertree_mult<Rational>,
                              check_hypertree_mult<RationalFunction>, hyper_sym,
                              hyper_rand));
        c.push_back(make_spec("HYPERTREE_INV", true, check_hypertree_inv<Rational>,
                              check_hypertree_inv<RationalFunction>, hyper_sym,
                              hyper_rand));
        c.push_back(make_spec("HYPERTREE_Q", true, check_hypertree_q<Rational>,
                              check_hypertree_q<RationalFunction>, qh_sym, qh_rand));
        c.push_back(make_spec("HYPERTREE_INVERSE", false,
                              check_hypertree_inverse<Rational>,
                              check_hypertree_inverse<RationalFunction>, hyper_sym,
                              hyper_rand));
        c.push_back(make_spec("EADDCLIQUES", true, check_eaddcliques<Rational>,
                              check_eaddcliques<RationalFunction>, cpc_sym, cpc_rand));
        return c;
    }();
    return catalogue;
}

const IdentitySpec& find_identity(const std::string& id) {
    for (auto& s : identity_catalogue())
        if (s.id == id) return s;
    throw Error("unknown identity: " + id);
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

template <ScalarRing R>
CheckReport<R> run_identity(const IdentitySpec& spec, const TestDatum<R>& datum,
                            bool mutate) {
    CheckReport<R> rep;
    if constexpr (RingTraits<R>::symbolic) {
        rep = spec.check_sym(datum);
    } else {
        rep = spec.check_rat(datum);
    }
    if (mutate && !rep.lines.empty()) {
        // single injected coefficient mutation: rhs += a_{e0}
        auto& line = rep.lines.front();
        line.rhs = line.rhs + datum.g.blocks.front().a;
        line.equal = line.lhs == line.rhs;
        rep.pass = true;
        for (auto& l : rep.lines) rep.pass = rep.pass && l.equal;
    }
    return rep;
}

template CheckReport<Rational> run_identity(const IdentitySpec&, const TestDatum<Rational>&,
                                            bool);
template CheckReport<RationalFunction> run_identity(const IdentitySpec&,
                                                    const TestDatum<RationalFunction>&,
                                                    bool);

namespace {

template <ScalarRing R>
void harvest_failures(TrialReport& out, const CheckReport<R>& rep, int trial,
                      const GraphDatum<R>& g) {
    for (auto& line : rep.lines) {
        if (line.equal) continue;
        TrialFailure f;
        f.trial = trial;
        f.line = line.name;
        f.lhs = RingTraits<R>::str(line.lhs);
        f.rhs = RingTraits<R>::str(line.rhs);
        f.witness = datum_to_json(g).dump();
        out.failures.push_back(std::move(f));
    }
}

}  // namespace

TrialReport symbolic_check(const IdentitySpec& spec, const ShapeSpec& shape, int max_vars,
                           bool mutate) {
    auto start = std::chrono::steady_clock::now();
    TrialReport out;
    out.identity = spec.id;
    out.shape = shape.describe();
    out.trials_requested = 1;
    TestDatum<RationalFunction> td = symbolic_datum(shape);
    if (td.var_count > max_vars)
        throw TooManyVariables("symbolic datum needs " + std::to_string(td.var_count) +
                               " variables, cap is " + std::to_string(max_vars));
    CheckReport<RationalFunction> rep = run_identity(spec, td, mutate);
    out.trials_run = 1;
    harvest_failures(out, rep, 0, td.g);
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

TrialReport schwartz_zippel_check(const IdentitySpec& spec, const ShapeSpec& shape,
                                  int trials, uint64_t seed, bool mutate, long bound) {
    auto start = std::chrono::steady_clock::now();
    TrialReport out;
    out.identity = spec.id;
    out.shape = shape.describe();
    out.trials_requested = trials;
    ShapeSpec sampled = shape;
    sampled.bound = bound;
    uint64_t draw_seed = seed;
    for (int t = 0; t < trials; ++t) {
        int rejects = 0;
        while (true) {
            if (rejects >= 100)
                throw TooManyRejections("identity " + spec.id + " on shape " + out.shape +
                                        ": 100 consecutive degenerate samples");
            uint64_t this_seed = draw_seed++;
            try {
                if (spec.needs_symbolic_ring) {
                    TestDatum<RationalFunction> td =
                        semi_symbolic_q_datum(this_seed, sampled);
                    CheckReport<RationalFunction> rep = run_identity(spec, td, mutate);
                    ++out.trials_run;
                    harvest_failures(out, rep, t, td.g);
                } else {
                    TestDatum<Rational> td = random_datum(this_seed, sampled);
                    CheckReport<Rational> rep = run_identity(spec, td, mutate);
                    ++out.trials_run;
                    harvest_failures(out, rep, t, td.g);
                }
                break;
            } catch (const TooManyVariables&) {
                throw;
            } catch (const Error& e) {
                ++rejects;
                ++out.rejections;
                out.rejection_reasons.push_back(e.what());
            }
        }
    }
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

// ---------------------------------------------------------------------------
// Oracle battery
// ---------------------------------------------------------------------------

template <ScalarRing R>
TrialReport oracle_suite(const TestDatum<R>& td) {
    auto start = std::chrono::steady_clock::now();
    TrialReport out;
    out.identity = "oracle_suite";
    out.shape = std::to_string(td.g.n()) + " vertices / " +
                std::to_string(td.g.blocks.size()) + " blocks";
    CheckReport<R> rep;

    AmMatrices<R> am = build_matrices(td.g);
    InvariantTriple<R> direct = invariants_direct(am, td.g);
    InvariantTriple<R> ghh = invariants_ghh(td.g);
    rep.add("ghh.det", direct.det, ghh.det);
    rep.add("ghh.cof", direct.cof, ghh.cof);
    rep.add("ghh.kappa", direct.kappa, ghh.kappa);

    for (VertexId v0 : td.g.vertices)
        rep.add("kappa@v" + std::to_string(v0), kappa_of(am, v0), direct.kappa);

    const size_t n = td.g.n();
    Matrix<R> dxj = am.d + Matrix<R>::ones(n, n) * td.x;
    for (auto& [I, J] : admissible_pairs(td.g, n <= 10 ? 2 : 1)) {
        R closed = minor_det(td.g, I, J, td.x);
        std::vector<VertexId> rows, cols;
        for (VertexId v : td.g.vertices) {
            if (!I.count(v)) rows.push_back(v);
            if (!J.count(v)) cols.push_back(v);
        }
        rep.add("minor I=" + set_str(I) + " J=" + set_str(J),
                exact_det(dxj.submatrix_labels(rows, cols)), closed);
        for (VertexId v0 : td.g.vertices) {
            if (I.count(v0) || J.count(v0)) continue;
            rep.add("minor_kappa I=" + set_str(I) + " J=" + set_str(J) +
                        " v0=" + std::to_string(v0),
                    minor_kappa_direct(am, I, J, v0), minor_kappa(td.g, I, J, v0));
        }
    }

    {
        R expected = direct.kappa;
        if (n % 2 == 0) expected = -expected;
        rep.add("bordered", bordered_kappa(td.g, am, td.g.vertices.front(), td.x),
                expected);
    }

    bool invertible = !amdist::is_zero(direct.det);
    for (auto& b : td.g.blocks)
        if (amdist::is_zero(b.a) || amdist::is_zero(exact_det(b.dstar))) invertible = false;
    if (invertible) {
        Matrix<R> oracle = solve_inverse(am.d);
        Matrix<R> closed = inverse_closed_form(td.g);
        Matrix<R> lap = inverse_via_laplacian(td.g);
        add_matrix_identity(rep, "inv_closed", closed, oracle);
        add_matrix_identity(rep, "inv_laplacian", lap, oracle);
        add_matrix_identity(rep, "dstar_inv", dstar_inverse_assembled(td.g) * am.dstar,
                            Matrix<R>::identity(n));
    }

    if (!td.cliques.empty() && td.cliques.size() == td.g.blocks.size()) {
        auto rep2 = check_hypertree_inv(td);
        for (auto& l : rep2.lines) rep.add("hyper." + l.name, l.lhs, l.rhs);
        if (invertible) {
            auto rep3 = check_hypertree_inverse(td);
            for (auto& l : rep3.lines) rep.add("hyper." + l.name, l.lhs, l.rhs);
        }
    }
    if (!td.q_blocks.empty()) {
        auto repq = check_hypertree_q(td);
        for (auto& l : repq.lines) rep.add("hyperq." + l.name, l.lhs, l.rhs);
    }

    out.trials_requested = out.trials_run = 1;
    harvest_failures(out, rep, 0, td.g);
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

template TrialReport oracle_suite(const TestDatum<Rational>&);
template TrialReport oracle_suite(const TestDatum<RationalFunction>&);

}  // namespace amdist
