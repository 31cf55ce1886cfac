#include "hillspec/io.hpp"

#include <json.hpp>

namespace hillspec {

using nlohmann::json;

namespace {

json triples(const std::vector<std::pair<index_t, cplx>>& e) {
    json a = json::array();
    for (const auto& [k, v] : e) a.push_back(json::array({k, v.real(), v.imag()}));
    return a;
}

std::vector<std::pair<index_t, cplx>> read_triples(const json& a, const char* what) {
    if (!a.is_array()) throw InvalidSequence(std::string(what) + " must be an array of [k, re, im]");
    std::vector<std::pair<index_t, cplx>> e;
    for (const auto& t : a) {
        if (!t.is_array() || t.size() != 3) throw InvalidSequence(std::string(what) + " entries must be [k, re, im]");
        e.emplace_back(t[0].get<index_t>(), cplx(t[1].get<double>(), t[2].get<double>()));
    }
    return e;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& ex) {
        throw InvalidSequence(std::string("malformed JSON: ") + ex.what());
    }
}

}  // namespace

std::string to_json(const FourierSeq& f, int indent) {
    std::vector<std::pair<index_t, cplx>> e;
    for (std::size_t i = 0; i < f.nnz(); ++i) e.emplace_back(f.indices()[i], f.values()[i]);
    json j;
    j["half_range"] = f.half_range();
    j["real"] = f.is_real();
    j["zero_mean"] = f.is_zero_mean();
    j["one_periodic"] = f.is_one_periodic();
    j["coeffs"] = triples(e);
    return j.dump(indent);
}

FourierSeq fourier_seq_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        SeqFlags fl{j.value("real", false), j.value("zero_mean", false), j.value("one_periodic", false)};
        FourierSeq f = FourierSeq::from_pairs(j.at("half_range").get<index_t>(),
                                              read_triples(j.at("coeffs"), "coeffs"), fl);
        f.validate();
        return f;
    } catch (const json::exception& ex) {
        throw InvalidSequence(std::string("FourierSeq JSON: ") + ex.what());
    }
}

std::string to_json(const BirkhoffState& z, int indent) {
    std::vector<std::pair<index_t, cplx>> e;
    for (index_t n = -z.count(); n <= z.count(); ++n)
        if (n != 0) e.emplace_back(n, z.z(n));
    json j;
    j["modes"] = triples(e);
    json I = json::array(), om = json::array();
    for (index_t n = 1; n <= z.count(); ++n) {
        const double a = z.action(n).real();
        const double k = 2.0 * static_cast<double>(n) * kPi;
        I.push_back(a);
        om.push_back(k * k * k - 6.0 * a);
    }
    j["actions"] = I;
    j["frequencies"] = om;
    j["asymptotic"] = true;
    return j.dump(indent);
}

BirkhoffState birkhoff_state_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        BirkhoffState z;
        for (const auto& [n, v] : read_triples(j.at("modes"), "modes")) z.set(n, v);
        return z;
    } catch (const json::exception& ex) {
        throw InvalidSequence(std::string("Birkhoff JSON: ") + ex.what());
    }
}

std::string to_json(const PDEState& u, int indent) {
    std::vector<std::pair<index_t, cplx>> e;
    for (index_t k = -u.K; k <= u.K; ++k) e.emplace_back(k, u[k]);
    json j;
    j["t"] = u.t;
    j["K"] = u.K;
    j["coeffs"] = triples(e);
    return j.dump(indent);
}

PDEState pde_state_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        PDEState u(j.at("K").get<index_t>());
        u.t = j.value("t", 0.0);
        for (const auto& [k, v] : read_triples(j.at("coeffs"), "coeffs")) {
            if (std::abs(k) > u.K) throw InvalidSequence("snapshot mode beyond K");
            u[k] = v;
        }
        return u;
    } catch (const json::exception& ex) {
        throw InvalidSequence(std::string("snapshot JSON: ") + ex.what());
    }
}

}  // namespace hillspec
