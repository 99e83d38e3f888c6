#include "lpq/seqio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpq {

nlohmann::json seq_to_json(const Seq& s) {
    nlohmann::json j;
    j["prefix"] = s.prefix();
    if (s.tail().is_zero()) {
        j["tail"] = {{"kind", "zero"}};
    } else {
        j["tail"] = {{"kind", "power"}, {"c", s.tail().c}, {"sigma", s.tail().sigma}};
    }
    return j;
}

Seq seq_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("prefix"))
        throw std::invalid_argument("sequence JSON: object with \"prefix\" required");
    std::vector<double> prefix = j.at("prefix").get<std::vector<double>>();
    Tail tail = Tail::zero();
    if (j.contains("tail")) {
        const auto& tj = j.at("tail");
        std::string kind = tj.at("kind").get<std::string>();
        if (kind == "power") {
            tail = Tail::power(tj.at("c").get<double>(), tj.at("sigma").get<double>());
        } else if (kind != "zero") {
            throw std::invalid_argument("sequence JSON: tail kind must be zero|power");
        }
    }
    return Seq(std::move(prefix), tail);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string format_csv(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace lpq
