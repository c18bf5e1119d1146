#include <median/io.hpp>

#include <fstream>
#include <sstream>

namespace median::io {

namespace {
    void check_version(const json & j)
    {
        if (! j.contains("schema_version"))
            return;
        const auto & v = j.at("schema_version");
        if (! v.is_number_integer() || v.get<int>() != schema_version)
            fail(Errc::UnsupportedSchema, "unsupported schema_version", {v.dump()});
    }

    template <typename F>
    auto parsing(F && body) -> decltype(body())
    {
        try {
            return body();
        }
        catch (const json::exception & e) {
            fail(Errc::ParseError, e.what());
        }
    }

    Map map_from_json(const json & j)
    {
        if (! j.is_array())
            fail(Errc::ParseError, "map must be an array of integers");
        Map m;
        m.reserve(j.size());
        for (auto & v : j) {
            if (! v.is_number_unsigned() && ! (v.is_number_integer() && v.get<long long>() >= 0))
                fail(Errc::ParseError, "map entries must be nonnegative integers", {v.dump()});
            m.push_back(v.get<std::uint32_t>());
        }
        return m;
    }

    json certificate_to_json(const CertificateEntry & c)
    {
        return {{"M", to_json(*c.m)}, {"N", to_json(*c.n)}, {"p", c.p},
                {"f", c.f},           {"q", c.q},           {"resolved_at", c.resolved_at}};
    }

    std::string vertex(const MedianAlgebra & m, std::size_t i)
    {
        return m.dim() == 0 ? "\"ε\"" : "\"" + m.point(i).to_string() + "\"";
    }
} // namespace

json to_json(const MedianAlgebra & m)
{
    json pts = json::array();
    for (auto & p : m.points())
        pts.push_back(p.to_string());
    return {{"dim", m.dim()}, {"points", pts}, {"schema_version", schema_version}};
}

json to_json(const MaximalLinkedSystem & s) { return {{"ground", s.ground}, {"family", s.family}}; }

json to_json(const Epimorphism & f)
{
    return {{"source", to_json(*f.source)}, {"target", to_json(*f.target)}, {"map", f.map},
            {"schema_version", schema_version}};
}

json to_json(const InverseSequence & seq)
{
    json stages = json::array();
    for (auto & s : seq.stages)
        stages.push_back(to_json(*s));
    json bonds = json::array();
    for (std::size_t i = 0; i < seq.bonds.size(); ++i)
        bonds.push_back({{"source", i + 1}, {"target", i}, {"map", seq.bonds[i].map}});
    json provenance = json::array();
    for (auto & p : seq.provenance) {
        json cert = json::array();
        for (auto & c : p.certificate)
            cert.push_back(certificate_to_json(c));
        provenance.push_back({{"kind", p.kind},
                              {"size_bound", p.size_bound},
                              {"order", to_string(p.order)},
                              {"tower_sizes", p.tower_sizes},
                              {"certificate", cert}});
    }
    return {{"schema_version", schema_version}, {"stages", stages}, {"bonds", bonds}, {"provenance", provenance}};
}

MedianAlgebra algebra_from_json(const json & j)
{
    return parsing([&] {
        if (! j.is_object())
            fail(Errc::ParseError, "algebra must be a JSON object");
        check_version(j);
        const auto & dim = j.at("dim");
        if (! dim.is_number_integer() || dim.get<long long>() < 0)
            fail(Errc::ParseError, "dim must be a nonnegative integer");
        const auto & pts = j.at("points");
        if (! pts.is_array())
            fail(Errc::ParseError, "points must be an array of bit strings");
        std::vector<std::string> strings;
        for (auto & p : pts) {
            if (! p.is_string())
                fail(Errc::ParseError, "points must be bit strings", {p.dump()});
            strings.push_back(p.get<std::string>());
        }
        auto m = MedianAlgebra::validate(strings, dim.get<std::size_t>());
        const auto c = canonicalize(m);
        const bool canonical = c.algebra.dim() == m.dim() && c.algebra.points() == m.points();
        return MedianAlgebra::assume_closed(m.points(), m.dim(), canonical);
    });
}

MaximalLinkedSystem mls_from_json(const json & j)
{
    return parsing([&] {
        MaximalLinkedSystem s{j.at("ground").get<std::size_t>(), j.at("family").get<std::vector<std::uint32_t>>()};
        std::sort(s.family.begin(), s.family.end());
        if (s.ground == 0 || s.ground > 16)
            fail(Errc::ShapeError, "ground size out of range");
        if (! is_maximal_linked(s.ground, s.family))
            fail(Errc::NotLinked, "family is not a maximal linked system");
        return s;
    });
}

Epimorphism epimorphism_from_json(const json & j, const std::filesystem::path & base_dir)
{
    return parsing([&] {
        if (! j.is_object())
            fail(Errc::ParseError, "morphism must be a JSON object");
        check_version(j);
        auto side = [&](const char * key) {
            const auto & v = j.at(key);
            if (v.is_string())
                return share(algebra_from_json(read_json_file(base_dir / v.get<std::string>())));
            return share(algebra_from_json(v));
        };
        auto source = side("source");
        auto target = side("target");
        return check_epimorphism(source, target, map_from_json(j.at("map")));
    });
}

InverseSequence sequence_from_json(const json & j)
{
    return parsing([&] {
        if (! j.is_object())
            fail(Errc::ParseError, "sequence must be a JSON object");
        if (! j.contains("schema_version"))
            fail(Errc::UnsupportedSchema, "sequence files must carry schema_version");
        check_version(j);
        InverseSequence seq;
        for (auto & s : j.at("stages"))
            seq.stages.push_back(share(algebra_from_json(s)));
        for (auto & b : j.at("bonds")) {
            const auto src = b.at("source").get<std::size_t>();
            const auto dst = b.at("target").get<std::size_t>();
            if (src >= seq.stages.size() || dst >= seq.stages.size())
                fail(Errc::IndexOutOfRange, "bond refers to a missing stage");
            seq.bonds.push_back({seq.stages[src], seq.stages[dst], map_from_json(b.at("map"))});
        }
        validate_sequence(seq);
        if (j.contains("provenance")) {
            for (auto & p : j.at("provenance")) {
                StageProvenance sp{p.at("kind").get<std::string>(), p.at("size_bound").get<std::size_t>(),
                                   parse_order(p.at("order").get<std::string>()),
                                   p.at("tower_sizes").get<std::vector<std::size_t>>(),
                                   {}};
                for (auto & c : p.at("certificate"))
                    sp.certificate.push_back({share(algebra_from_json(c.at("M"))), share(algebra_from_json(c.at("N"))),
                                              map_from_json(c.at("p")), map_from_json(c.at("f")),
                                              c.at("resolved_at").get<std::size_t>(), map_from_json(c.at("q"))});
                seq.provenance.push_back(std::move(sp));
            }
            if (seq.provenance.size() != seq.stages.size())
                fail(Errc::ShapeError, "one provenance record per stage is required");
            // Every certificate lift must commute with its bond.
            for (std::size_t i = 1; i < seq.stages.size(); ++i)
                for (auto & c : seq.provenance[i].certificate) {
                    check_epimorphism(seq.stages[i - 1], c.m, c.p);
                    check_epimorphism(c.n, c.m, c.f);
                    check_epimorphism(seq.stages[i], c.n, c.q);
                    const auto & h = seq.bonds[i - 1].map;
                    for (std::size_t x = 0; x < h.size(); ++x)
                        if (c.p[h[x]] != c.f[c.q[x]])
                            fail(Errc::NotMedianPreserving, "certificate lift does not commute at stage " +
                                                                std::to_string(i));
                }
        }
        return seq;
    });
}

std::string dump(const json & j) { return j.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path & path)
{
    std::ifstream in(path);
    if (! in)
        fail(Errc::ParseError, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    }
    catch (const json::exception & e) {
        fail(Errc::ParseError, path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path & path, const std::string & text)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        fail(Errc::ParseError, "cannot write " + path.string());
    out << text;
}

DocumentKind detect_kind(const json & j)
{
    if (j.is_object()) {
        if (j.contains("stages"))
            return DocumentKind::sequence;
        if (j.contains("map"))
            return DocumentKind::morphism;
        if (j.contains("points"))
            return DocumentKind::algebra;
    }
    fail(Errc::ParseError, "document is not an algebra, morphism or sequence");
}

std::string to_dot(const MedianAlgebra & m)
{
    std::string out = "graph median {\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        out += "  " + vertex(m, i) + ";\n";
    for (auto [a, b] : median_graph_edges(m))
        out += "  " + vertex(m, a) + " -- " + vertex(m, b) + ";\n";
    return out + "}\n";
}

} // namespace median::io
