#include "continuized/csv.hpp"

#include "continuized/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace continuized {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_double(const std::string& s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
}

}  // namespace

void write_csv(const RunSet& runset, std::ostream& out) {
    out << "t,metric,mean,q05,q95" << (runset.has_bounds ? ",bound" : "") << '\n';
    for (const auto& r : runset.rows) {
        out << fmt(r.t) << ',' << r.metric << ',' << fmt(r.mean) << ',' << fmt(r.q05) << ',' << fmt(r.q95);
        if (runset.has_bounds) {
            out << ',';
            if (r.bound) out << fmt(*r.bound);
        }
        out << '\n';
    }
}

void emit_csv(const RunSet& runset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_csv(runset, out);
    out.flush();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<AggregateRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("csv file is empty");
    const bool has_bound = line == "t,metric,mean,q05,q95,bound";
    if (!has_bound && line != "t,metric,mean,q05,q95") throw InvalidArgument("unexpected csv header '" + line + "'");
    std::vector<AggregateRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (has_bound && line.back() == ',') f.emplace_back();
        if (f.size() != (has_bound ? 6u : 5u)) {
            throw InvalidArgument("csv line " + std::to_string(lineno) + ": wrong field count");
        }
        AggregateRow r{parse_double(f[0], lineno), f[1], parse_double(f[2], lineno),
                       parse_double(f[3], lineno), parse_double(f[4], lineno), std::nullopt};
        if (has_bound && !f[5].empty()) r.bound = parse_double(f[5], lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace continuized
