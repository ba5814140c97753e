#include "khess/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace khess::csv {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open for writing: " + path);
    return os;
}

std::vector<std::vector<double>> read_table(const std::string& path,
                                            const std::string& expected_header, int cols) {
    std::ifstream is(path);
    if (!is) throw input_error("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw input_error("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw input_error("bad header in " + path + " (expected '" + expected_header + "')");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                std::ostringstream os;
                os << path << ":" << lineno << ": cannot parse '" << cell << "'";
                throw input_error(os.str());
            }
        }
        if (static_cast<int>(row.size()) != cols) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected " << cols << " columns";
            throw input_error(os.str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void write_profile(const std::string& path, const RadialSolution& sol) {
    auto os = open_out(path);
    os << "r,w,wprime\n";
    for (const auto& s : sol.samples)
        os << format_double(s.r) << ',' << format_double(s.w) << ',' << format_double(s.wprime)
           << '\n';
}

void write_orbit(const std::string& path, const Orbit& orb) {
    auto os = open_out(path);
    os << "t,x,y\n";
    for (const auto& s : orb.samples)
        os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << '\n';
}

void write_sweep(const std::string& path, const BifurcationCurve& curve) {
    auto os = open_out(path);
    os << "a,lambda\n";
    for (const auto& pt : curve.points)
        os << format_double(pt.a) << ',' << format_double(pt.lambda) << '\n';
}

RadialSolution read_profile(const std::string& path) {
    RadialSolution sol;
    for (const auto& row : read_table(path, "r,w,wprime", 3))
        sol.samples.push_back({row[0], row[1], row[2]});
    if (sol.samples.empty()) throw input_error("no samples in " + path);
    sol.w0 = sol.samples.front().w;
    for (std::size_t i = 1; i < sol.samples.size(); ++i)
        if (!(sol.samples[i].r > sol.samples[i - 1].r))
            throw input_error(path + ": r must be strictly increasing");
    return sol;
}

std::vector<std::pair<double, double>> read_weight_table(const std::string& path) {
    std::vector<std::pair<double, double>> out;
    for (const auto& row : read_table(path, "r,rho", 2)) out.emplace_back(row[0], row[1]);
    return out;
}

}  // namespace khess::csv
