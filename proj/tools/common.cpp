#include <charconv>

#include "commands.hpp"
#include "rangewalk/errors.hpp"
#include "rangewalk/pmf.hpp"

namespace rangewalk::cli {

ArithMode arith_mode(const GlobalOptions& global) {
    if (global.exact) return ArithMode::Exact;
    if (global.floating) return ArithMode::Float;
    return ArithMode::Auto;
}

Site parse_site(const std::string& text) {
    Site s;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        int v = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + comma;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || first == last)
            throw ValidationError("cannot parse site '" + text + "'; expected comma-separated integers");
        s.push_back(v);
        pos = comma + 1;
    }
    return s;
}

TrapTrajectory load_phi(const std::string& spec, const std::string& file, int dim) {
    if (!file.empty()) return TrapTrajectory(load_sites_file(file));
    return phi_from_spec(spec, dim);
}

InsertionPath load_f(const std::string& spec, const std::string& file, int dim, int n) {
    if (!file.empty()) return InsertionPath(load_sites_file(file));
    if (spec.empty()) return InsertionPath::zero(dim, static_cast<std::size_t>(std::max(n, 0)) + 1);
    if (spec.rfind("file:", 0) == 0) return InsertionPath(load_sites_file(spec.substr(5)));
    if (spec.rfind("zero:", 0) == 0) return InsertionPath::zero(dim, std::stoul(spec.substr(5)) + 1);
    if (spec.rfind("random:", 0) == 0) {
        const std::string rest = spec.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw ValidationError("expected random:SEED:N, got '" + spec + "'");
        try {
            return random_insertion(std::stoull(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1)),
                                    uniform_cube(dim));
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const ValidationError*>(&e)) throw;
            throw ValidationError("expected random:SEED:N, got '" + spec + "'");
        }
    }
    throw ValidationError("unknown path spec '" + spec + "'");
}

}  // namespace rangewalk::cli
