#include "kf/kernel_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>

#include "kf/optimizer.hpp"

namespace kf {

namespace {

std::string coeff_string(const Rat& q) {
    if (q.get_den() <= 1000000) return rat_to_string(q);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", to_double(q));
    return buf;
}

}  // namespace

nlohmann::json kernel_to_json(const PiecewiseKernel& k) {
    if (!k.instantiated())
        throw std::invalid_argument("kernel_to_json: kernel has symbolic coefficients");
    nlohmann::json j;
    j["r"] = rat_to_string(k.spec().r);
    j["p"] = k.degree();
    j["smooth"] = k.spec().smooth;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < k.pieces(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int jj = 1; jj <= k.degree(); ++jj)
            row.push_back(coeff_string(k.coeff(i, jj).constant_value()));
        rows.push_back(row);
    }
    j["coeffs"] = rows;
    return j;
}

PiecewiseKernel kernel_from_json(const nlohmann::json& j) {
    const KernelSpec spec(parse_rational(j.at("r").get<std::string>()), j.at("p").get<int>(),
                          j.at("smooth").get<bool>());
    const auto& rows = j.at("coeffs");
    if (static_cast<int>(rows.size()) != spec.pieces())
        throw IoError("kernel json: wrong number of coefficient rows");
    std::vector<std::vector<MultiPoly>> coeffs;
    for (int i = 0; i < spec.pieces(); ++i) {
        std::vector<MultiPoly> row;
        row.push_back(MultiPoly::constant(Rat(i == 0 ? 1 : 0)));
        const auto& jrow = rows[i];
        if (static_cast<int>(jrow.size()) != spec.degree)
            throw IoError("kernel json: wrong number of coefficients in a row");
        for (const auto& cell : jrow)
            row.push_back(MultiPoly::constant(parse_rational(cell.get<std::string>())));
        coeffs.push_back(std::move(row));
    }
    return PiecewiseKernel(spec, std::move(coeffs));
}

void save_kernel(const PiecewiseKernel& k, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << kernel_to_json(k).dump(2) << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

PiecewiseKernel load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        return kernel_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad kernel file '" + path + "': " + e.what());
    }
}

KernelSpec spec_from_selector(const std::string& selector) {
    std::string body = selector;
    for (const char* prefix : {"opt:", "paper:"}) {
        if (body.rfind(prefix, 0) == 0) {
            body = body.substr(std::string(prefix).size());
            break;
        }
    }
    if (body.rfind("K_", 0) != 0)
        throw std::invalid_argument("bad kernel family selector '" + selector + "'");
    body = body.substr(2);
    bool smooth = false;
    if (body.size() > 2 && body.substr(body.size() - 2) == "_S") {
        smooth = true;
        body = body.substr(0, body.size() - 2);
    }
    const auto sep = body.rfind('_');
    if (sep == std::string::npos)
        throw std::invalid_argument("bad kernel family selector '" + selector + "'");
    return KernelSpec(parse_rational(body.substr(0, sep)), std::stoi(body.substr(sep + 1)),
                      smooth);
}

Kernel1D parse_kernel_selector(const std::string& selector) {
    const auto split = [&]() -> std::pair<std::string, std::string> {
        const auto colon = selector.find(':');
        if (colon == std::string::npos) return {selector, ""};
        return {selector.substr(0, colon), selector.substr(colon + 1)};
    };
    const auto [head, arg] = split();

    if (selector == "nearest") return nearest_kernel();
    if (selector == "linear") return linear_kernel();
    if (selector == "keys") return keys_kernel();
    if (selector == "keys33") return keys33_kernel();
    if (selector == "schaum") return schaum_kernel();
    if (selector == "mitchell" || selector == "mn") return mitchell_kernel();
    if (head == "lanczos") return lanczos_kernel(std::stoi(arg));
    if (head == "lagrange") return lagrange_kernel(std::stoi(arg));
    if (head == "bspline") return bspline_basis(std::stoi(arg));
    if (head == "sinc") return sinc_kernel(std::stoi(arg));
    if (head == "bstar") {
        const auto colon = arg.find(':');
        if (colon == std::string::npos) return bspline_interp_kernel(std::stoi(arg));
        return bspline_interp_kernel(std::stoi(arg.substr(0, colon)),
                                     std::stoi(arg.substr(colon + 1)));
    }
    if (head == "file") return from_piecewise("file:" + arg, load_kernel(arg));
    if (head == "opt" || head == "paper") {
        const KernelSpec spec = spec_from_selector(selector);
        // designed kernels are deterministic; cache per spec
        static std::map<std::string, PiecewiseKernel> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(spec.name());
        if (it == cache.end())
            it = cache.emplace(spec.name(), optimize_kernel(spec).kernel).first;
        return from_piecewise("opt:" + spec.name(), it->second);
    }
    throw std::invalid_argument("unknown kernel selector '" + selector + "'");
}

}  // namespace kf
