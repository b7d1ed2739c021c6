#include "iwsurv/errors.hpp"
#include "iwsurv/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace iwsurv {

Sample::Sample(std::vector<double> values, std::string name)
    : values_(std::move(values)), name_(std::move(name)) {
    for (double v : values_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("Sample: observations must be positive and finite");
        }
    }
    std::sort(values_.begin(), values_.end());
}

Sample Sample::scaled(double c) const {
    if (!(c > 0.0)) {
        throw DomainError("Sample::scaled: factor must be positive");
    }
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return Sample(std::move(v), name_);
}

Sample read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string token;
        while (fields >> token) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                throw DomainError(path + ":" + std::to_string(line_no) + ": not a number: '" + token + "'");
            }
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw DomainError(path + ":" + std::to_string(line_no) + ": observations must be positive");
            }
            values.push_back(v);
        }
    }
    return Sample(std::move(values), path);
}

void write_sample_file(const Sample& s, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write '" + path + "'");
    for (double v : s.values()) std::fprintf(f, "%.17g\n", v);
    if (std::fclose(f) != 0) throw Error("error writing '" + path + "'");
}

} // namespace iwsurv
