#pragma once

#include "iwsurv/iwsurv.h"

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

/// Failure carrying the process exit status.
class Failure : public std::runtime_error {
public:
    Failure(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

inline int exit_code_for(iws_status s) {
    switch (s) {
    case IWS_ERR_DOMAIN:
    case IWS_ERR_NULL_ARG:
    case IWS_ERR_IO:
    case IWS_ERR_COEFFICIENTS:
        return 2;
    default:
        return 1;
    }
}

inline void check(iws_status s) {
    if (s != IWS_OK) throw Failure(exit_code_for(s), iws_last_error());
}

struct SampleDeleter {
    void operator()(iws_sample* p) const { iws_sample_free(p); }
};
struct ModelDeleter {
    void operator()(iws_model* p) const { iws_model_free(p); }
};
struct RngDeleter {
    void operator()(iws_rng* p) const { iws_rng_free(p); }
};
struct StudyDeleter {
    void operator()(iws_study* p) const { iws_study_free(p); }
};

using SamplePtr = std::unique_ptr<iws_sample, SampleDeleter>;
using ModelPtr = std::unique_ptr<iws_model, ModelDeleter>;
using RngPtr = std::unique_ptr<iws_rng, RngDeleter>;
using StudyPtr = std::unique_ptr<iws_study, StudyDeleter>;

inline RngPtr make_rng(std::uint64_t seed) {
    iws_rng* r = nullptr;
    check(iws_rng_create(seed, &r));
    return RngPtr(r);
}

inline SamplePtr fixture(char id) {
    iws_sample* s = nullptr;
    check(iws_sample_fixture(id, &s));
    return SamplePtr(s);
}

inline ModelPtr make_model(iws_model_kind kind, std::vector<double> params) {
    iws_model* m = nullptr;
    check(iws_model_create(kind, params.data(), params.size(), &m));
    return ModelPtr(m);
}

inline ModelPtr fit(iws_model_kind kind, const iws_sample* s, int* boundary = nullptr) {
    iws_model* m = nullptr;
    check(iws_fit(kind, s, &m, boundary));
    return ModelPtr(m);
}

inline std::vector<double> params(const iws_model* m) {
    std::vector<double> p(iws_model_params(m, nullptr, 0));
    iws_model_params(m, p.data(), p.size());
    return p;
}

inline std::vector<double> values(const iws_sample* s) {
    std::vector<double> v(iws_sample_size(s));
    check(iws_sample_values(s, v.data(), v.size()));
    return v;
}

inline double eval(const iws_model* m, iws_function fn, double x) {
    double out = 0.0;
    check(iws_model_eval(m, fn, x, &out));
    return out;
}

/// Parameter names in the order iws_model_params reports them.
inline std::vector<std::string> param_names(iws_model_kind kind) {
    switch (kind) {
    case IWS_MODEL_IW: return {"a", "b"};
    case IWS_MODEL_LL: return {"sigma", "gamma"};
    case IWS_MODEL_POLY: return {"c1", "c2", "c3", "t_max"};
    case IWS_MODEL_WEIBULL: return {"u", "v"};
    }
    return {};
}

/// Value rounded to 6 significant digits, the precision of all reports.
inline double sig6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace cli
