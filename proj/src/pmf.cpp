#include "rangewalk/pmf.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "rangewalk/errors.hpp"

namespace rangewalk {

IncrementPmf::IncrementPmf(int dim, std::vector<Atom> atoms) : dim_(dim) {
    if (dim < 1) throw ValidationError("pmf dimension must be positive");
    if (atoms.empty()) throw ValidationError("pmf has empty support");

    // Merge duplicates so that repeated lines in a file add up.
    std::map<Site, mpq_class> merged;
    for (auto& a : atoms) {
        if (static_cast<int>(a.offset.size()) != dim)
            throw ValidationError("pmf site " + to_string(a.offset) + " has wrong dimension");
        a.weight.canonicalize();
        merged[a.offset] += a.weight;
    }

    mpq_class total = 0;
    for (const auto& [site, w] : merged) {
        if (sgn(w) <= 0)
            throw ValidationError("pmf weight at " + to_string(site) + " is not strictly positive");
        total += w;
    }
    if (total != 1)
        throw ValidationError("pmf weights sum to " + total.get_str() + ", not 1");

    for (const auto& [site, w] : merged) {
        auto it = merged.find(negate(site));
        if (it == merged.end() || it->second != w)
            throw ValidationError("pmf is not symmetric at site " + to_string(site));
    }

    for (auto& [site, w] : merged) {
        support_radius_ = std::max(support_radius_, sup_norm(site));
        atoms_.push_back({site, w});
    }

    for (const auto& a : atoms_) mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(),
                                         a.weight.get_den_mpz_t());
    numerators_.reserve(atoms_.size());
    for (const auto& a : atoms_) numerators_.push_back(a.weight.get_num() * (denominator_ / a.weight.get_den()));
}

mpq_class IncrementPmf::weight(const Site& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, const Site& s) { return a.offset < s; });
    if (it != atoms_.end() && it->offset == x) return it->weight;
    return 0;
}

std::string IncrementPmf::describe() const {
    std::ostringstream os;
    os << "d=" << dim_ << " {";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) os << ", ";
        os << to_string(atoms_[i].offset) << ":" << atoms_[i].weight.get_str();
    }
    os << "}";
    return os.str();
}

IncrementPmf parse_pmf(std::istream& in) {
    std::vector<IncrementPmf::Atom> atoms;
    int dim = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens.size() < 2)
            throw ValidationError("pmf line " + std::to_string(lineno) + ": expected coordinates and a weight");
        const int d = static_cast<int>(tokens.size()) - 1;
        if (dim < 0) dim = d;
        if (d != dim)
            throw ValidationError("pmf line " + std::to_string(lineno) + ": inconsistent dimension");
        Site x;
        for (int c = 0; c < d; ++c) {
            try {
                std::size_t used = 0;
                x.push_back(std::stoi(tokens[static_cast<std::size_t>(c)], &used));
                if (used != tokens[static_cast<std::size_t>(c)].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ValidationError("pmf line " + std::to_string(lineno) + ": bad coordinate");
            }
        }
        mpq_class w;
        if (w.set_str(tokens.back(), 10) != 0 || sgn(w.get_den()) == 0)
            throw ValidationError("pmf line " + std::to_string(lineno) + ": bad rational weight '" + tokens.back() + "'");
        w.canonicalize();
        atoms.push_back({std::move(x), w});
    }
    if (dim < 0) throw ValidationError("pmf input is empty");
    return IncrementPmf(dim, std::move(atoms));
}

IncrementPmf load_pmf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pmf file " + path);
    return parse_pmf(in);
}

IncrementPmf simple_symmetric(int dim) {
    std::vector<IncrementPmf::Atom> atoms;
    const mpq_class w(1, 2 * dim);
    for (int i = 0; i < dim; ++i) {
        atoms.push_back({unit_vector(dim, i, 1), w});
        atoms.push_back({unit_vector(dim, i, -1), w});
    }
    return IncrementPmf(dim, std::move(atoms));
}

IncrementPmf lazy_half(int dim) {
    std::vector<IncrementPmf::Atom> atoms{{origin(dim), mpq_class(1, 2)}};
    const mpq_class w(1, 4 * dim);
    for (int i = 0; i < dim; ++i) {
        atoms.push_back({unit_vector(dim, i, 1), w});
        atoms.push_back({unit_vector(dim, i, -1), w});
    }
    return IncrementPmf(dim, std::move(atoms));
}

IncrementPmf uniform_cube(int dim) {
    std::vector<IncrementPmf::Atom> atoms;
    std::size_t count = 1;
    for (int c = 0; c < dim; ++c) count *= 3;
    mpz_class den(static_cast<unsigned long>(count));
    for (std::size_t code = 0; code < count; ++code) {
        Site x(static_cast<std::size_t>(dim));
        std::size_t k = code;
        for (int c = 0; c < dim; ++c, k /= 3) x[static_cast<std::size_t>(c)] = static_cast<int>(k % 3) - 1;
        atoms.push_back({x, mpq_class(1, den)});
    }
    return IncrementPmf(dim, std::move(atoms));
}

IncrementPmf point_mass(int dim) { return IncrementPmf(dim, {{origin(dim), mpq_class(1)}}); }

IncrementPmf pmf_from_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("pmf spec '" + std::string(spec) + "' must look like NAME:ARG");
    const std::string name(spec.substr(0, colon));
    const std::string arg(spec.substr(colon + 1));
    if (name == "file") return load_pmf_file(arg);
    int dim = 0;
    try {
        std::size_t used = 0;
        dim = std::stoi(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError("pmf spec '" + std::string(spec) + "': bad dimension");
    }
    if (dim < 1 || dim > 8) throw ValidationError("pmf dimension must be in 1..8");
    if (name == "srw") return simple_symmetric(dim);
    if (name == "lazy") return lazy_half(dim);
    if (name == "uniform3") return uniform_cube(dim);
    if (name == "point") return point_mass(dim);
    throw ValidationError("unknown pmf '" + name + "'");
}

bool WalkClass::has(ClassTag t) const { return std::find(satisfied.begin(), satisfied.end(), t) != satisfied.end(); }

std::string to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::SimpleSymmetric: return "SimpleSymmetric";
        case ClassTag::ClassI: return "ClassI";
        case ClassTag::LazyHalf: return "LazyHalf";
        case ClassTag::Unclassified: return "Unclassified";
    }
    return "?";
}

namespace {

bool is_simple_symmetric(const IncrementPmf& pmf) {
    const int d = pmf.dim();
    if (pmf.support_size() != static_cast<std::size_t>(2 * d)) return false;
    const mpq_class w(1, 2 * d);
    for (const auto& a : pmf.atoms())
        if (l1_norm(a.offset) != 1 || a.weight != w) return false;
    return true;
}

bool is_class_one(const IncrementPmf& pmf) {
    if (pmf.dim() != 1) return false;
    auto p = [&](int k) { return pmf.weight(Site{k}); };
    // Beyond the support radius every term is zero, so checking up to r suffices.
    for (int k = 1; k <= pmf.support_radius(); ++k)
        if (p(k) < p(k + 1)) return false;
    return p(0) >= p(3);
}

}  // namespace

WalkClass validate_class(const IncrementPmf& pmf) {
    WalkClass wc;
    wc.dim = pmf.dim();
    if (is_simple_symmetric(pmf)) wc.satisfied.push_back(ClassTag::SimpleSymmetric);
    if (is_class_one(pmf)) wc.satisfied.push_back(ClassTag::ClassI);
    if (pmf.weight(origin(pmf.dim())) >= mpq_class(1, 2)) wc.satisfied.push_back(ClassTag::LazyHalf);
    wc.tag = wc.satisfied.empty() ? ClassTag::Unclassified : wc.satisfied.front();
    if (wc.satisfied.empty()) wc.satisfied.push_back(ClassTag::Unclassified);
    return wc;
}

}  // namespace rangewalk
