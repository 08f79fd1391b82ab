#include "sara/pgm/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sara::pgm {

namespace {

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << '/' << boost::multiprecision::denominator(r);
    return os.str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    using boost::multiprecision::cpp_int;
    if (slash == std::string::npos) return Rational(cpp_int(s));
    return Rational(cpp_int(s.substr(0, slash)), cpp_int(s.substr(slash + 1)));
}

}  // namespace

std::string serialize_instance(const QueryInstance& instance) {
    std::ostringstream os;
    const Pgm& pgm = instance.pgm;
    os << "nodes " << pgm.n_hidden << '\n';
    for (const auto& [a, b] : pgm.edges) os << "edge " << a << ' ' << b << '\n';
    os << "anchor " << pgm.anchor << ' ' << pgm.anchor_value << '\n';
    for (const auto& [v, cpt] : pgm.cpts)
        os << "cpt " << v << ' ' << cpt.parent << ' ' << rational_str(cpt.flip)
           << '\n';
    os << "target " << instance.target << ' ' << instance.target_value << '\n';
    for (const auto& path : instance.correct_paths) {
        os << "path";
        for (Index v : path) os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

QueryInstance parse_instance(const std::string& text) {
    QueryInstance instance;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("instance line " +
                                        std::to_string(lineno) + ": " + why);
        };
        if (keyword == "nodes") {
            if (!(ls >> instance.pgm.n_hidden)) fail("bad node count");
        } else if (keyword == "edge") {
            Index a, b;
            if (!(ls >> a >> b)) fail("bad edge");
            instance.pgm.edges.emplace_back(a, b);
        } else if (keyword == "anchor") {
            if (!(ls >> instance.pgm.anchor >> instance.pgm.anchor_value))
                fail("bad anchor");
        } else if (keyword == "cpt") {
            Index v, parent;
            std::string flip;
            if (!(ls >> v >> parent >> flip)) fail("bad cpt");
            instance.pgm.cpts[v] = NoisyCopyCpt{parent, parse_rational(flip)};
        } else if (keyword == "target") {
            if (!(ls >> instance.target >> instance.target_value))
                fail("bad target");
        } else if (keyword == "path") {
            std::vector<Index> path;
            Index v;
            while (ls >> v) path.push_back(v);
            if (path.empty()) fail("empty path");
            instance.correct_paths.push_back(std::move(path));
        } else {
            fail("unknown keyword '" + keyword + "'");
        }
    }
    instance.validate();
    return instance;
}

QueryInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_instance(os.str());
}

void save_instance(const QueryInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file " + path);
    out << serialize_instance(instance);
}

QueryInstance canonical_instance() {
    QueryInstance instance;
    instance.pgm.n_hidden = 4;
    instance.pgm.edges = {{1, 2}, {1, 3}, {2, 4}};
    instance.pgm.anchor = 1;
    instance.pgm.anchor_value = 1;
    Rational eps(1, 10);
    instance.pgm.cpts[2] = NoisyCopyCpt{1, eps};
    instance.pgm.cpts[3] = NoisyCopyCpt{1, eps};
    instance.pgm.cpts[4] = NoisyCopyCpt{2, eps};
    instance.target = 4;
    instance.target_value = 1;
    instance.correct_paths = {{1, 2, 4}};
    instance.validate();
    return instance;
}

}  // namespace sara::pgm
