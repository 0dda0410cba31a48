#include "rangewalk/perturb.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rangewalk/errors.hpp"
#include "rangewalk/rng.hpp"

namespace rangewalk {

namespace {

void check_sites(const std::vector<Site>& values, const char* what) {
    if (values.empty()) throw ValidationError(std::string(what) + " is empty");
    const std::size_t d = values.front().size();
    if (d == 0) throw ValidationError(std::string(what) + " has zero dimension");
    for (const auto& s : values)
        if (s.size() != d) throw ValidationError(std::string(what) + " mixes dimensions");
}

int parse_int(const std::string& tok, const std::string& context) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(context + ": bad integer '" + tok + "'");
    }
}

}  // namespace

InsertionPath::InsertionPath(std::vector<Site> values) : values_(std::move(values)) {
    check_sites(values_, "insertion path");
    for (std::size_t k = 1; 2 * k < values_.size(); ++k)
        if (values_[2 * k - 1] != values_[2 * k])
            throw ValidationError("insertion path violates f_{2k-1} = f_{2k} at k = " + std::to_string(k));
}

InsertionPath InsertionPath::prefix(std::size_t n) const {
    if (n >= values_.size()) throw ValidationError("insertion path prefix beyond its length");
    return InsertionPath(std::vector<Site>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n + 1)));
}

InsertionPath InsertionPath::zero(int dim, std::size_t length) {
    return InsertionPath(std::vector<Site>(length, origin(dim)));
}

TrapTrajectory::TrapTrajectory(std::vector<Site> values) : values_(std::move(values)) {
    check_sites(values_, "trap trajectory");
}

int TrapTrajectory::extent() const {
    int e = 0;
    for (const auto& s : values_) e = std::max(e, sup_norm(s));
    return e;
}

TrapTrajectory TrapTrajectory::held_to(std::size_t length) const {
    auto v = values_;
    while (v.size() < length) v.push_back(v.back());
    return TrapTrajectory(std::move(v));
}

TrapTrajectory TrapTrajectory::zero(int dim, std::size_t length) {
    return TrapTrajectory(std::vector<Site>(length, origin(dim)));
}

TrapTrajectory contract(const InsertionPath& f) {
    std::vector<Site> ext = f.values();
    if (ext.size() % 2 == 0) ext.push_back(ext.back());
    std::vector<Site> phi;
    for (std::size_t i = 0; 2 * i < ext.size(); ++i) phi.push_back(negate(ext[2 * i]));
    return TrapTrajectory(std::move(phi));
}

std::vector<std::vector<Site>> trap_field(const TrapTrajectory& phi, int n) {
    if (n < 0) throw ValidationError("trap field time must be >= 0");
    if (static_cast<std::size_t>(n) + 1 >= phi.size())
        throw ValidationError("trap field at time " + std::to_string(n) + " needs phi_" + std::to_string(n + 1) +
                              " but the trajectory ends at phi_" + std::to_string(phi.size() - 1));
    std::vector<std::vector<Site>> field;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
        std::vector<Site> sites{phi[i]};
        if (phi[i + 1] != phi[i]) sites.push_back(phi[i + 1]);
        field.push_back(std::move(sites));
    }
    return field;
}

TrapTrajectory alternating_phi(int n) {
    if (n < 0) throw ValidationError("alternating trajectory needs n >= 0");
    std::vector<Site> v;
    for (int i = 0; i <= n; ++i) v.push_back(Site{i % 2});
    return TrapTrajectory(std::move(v));
}

TrapTrajectory random_phi(std::uint64_t seed, int n, const IncrementPmf& step_law) {
    if (n < 0) throw ValidationError("random trajectory needs n >= 0");
    Engine eng = make_engine(seed, 0);
    StepSampler step(step_law);
    std::vector<Site> v{origin(step_law.dim())};
    for (int i = 1; i <= n; ++i) v.push_back(add(v.back(), step(eng)));
    return TrapTrajectory(std::move(v));
}

InsertionPath random_insertion(std::uint64_t seed, int n, const IncrementPmf& step_law) {
    if (n < 0) throw ValidationError("random insertion path needs n >= 0");
    Engine eng = make_engine(seed, 1);
    StepSampler step(step_law);
    std::vector<Site> v{origin(step_law.dim())};
    for (int i = 1; i <= n; ++i) v.push_back(i % 2 == 1 ? add(v.back(), step(eng)) : v.back());
    return InsertionPath(std::move(v));
}

std::vector<Site> read_sites(std::istream& in) {
    std::vector<Site> sites;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Site s;
        for (std::string tok; ls >> tok;) s.push_back(parse_int(tok, "line " + std::to_string(lineno)));
        if (!s.empty()) sites.push_back(std::move(s));
    }
    check_sites(sites, "site list");
    return sites;
}

std::vector<Site> load_sites_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open trajectory file " + path);
    return read_sites(in);
}

void write_sites(std::ostream& out, const std::vector<Site>& sites) {
    for (const auto& s : sites) {
        for (std::size_t c = 0; c < s.size(); ++c) out << (c ? " " : "") << s[c];
        out << '\n';
    }
}

TrapTrajectory phi_from_spec(std::string_view spec, int dim) {
    const std::string s(spec);
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ValidationError("trajectory spec '" + s + "' must look like KIND:ARGS");
    const std::string kind = s.substr(0, colon);
    const std::string rest = s.substr(colon + 1);
    if (kind == "file") return TrapTrajectory(load_sites_file(rest));
    if (kind == "alternating") {
        if (dim != 1) throw DimensionError("alternating trajectory is defined in d = 1");
        return alternating_phi(parse_int(rest, "alternating"));
    }
    if (kind == "zero") return TrapTrajectory::zero(dim, static_cast<std::size_t>(parse_int(rest, "zero")) + 1);
    if (kind == "random") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw ValidationError("random trajectory spec must be random:SEED:N");
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(rest.substr(0, c2));
        } catch (const std::exception&) {
            throw ValidationError("random trajectory: bad seed");
        }
        return random_phi(seed, parse_int(rest.substr(c2 + 1), "random"), uniform_cube(dim));
    }
    throw ValidationError("unknown trajectory kind '" + kind + "'");
}

}  // namespace rangewalk
