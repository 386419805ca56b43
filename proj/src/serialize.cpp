#include "polysemi/serialize.hpp"

#include "polysemi/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polysemi {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::separator() {
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back() && !pending_key_) out_ += ",";
        first_in_scope_.back() = false;
    }
    pending_key_ = false;
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += "{";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
    if (!k.empty()) key(k);
    separator();
    out_ += "[";
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    out_ += "\"" + k + "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += fmt17(v);
    return *this;
}

JsonWriter& JsonWriter::value(long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ += "\"";
    for (char c : v) {
        switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        default: out_ += c;
        }
    }
    out_ += "\"";
    return *this;
}

JsonWriter& JsonWriter::complex_value(cplx z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
}

void write_text_file(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw OutputError("write_text_file: cannot open " + tmp);
        out << body;
        if (!out) throw OutputError("write_text_file: short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw OutputError("write_text_file: rename failed: " + ec.message());
}

std::string measure_to_csv(const EmpiricalMeasure& mu) {
    std::string out = "re,im,weight\n";
    for (const auto& a : mu.atoms) {
        out += fmt17(a.location.real());
        out += ",";
        out += fmt17(a.location.imag());
        out += ",";
        out += fmt17(a.weight);
        out += "\n";
    }
    return out;
}

EmpiricalMeasure measure_from_csv(const std::string& body) {
    EmpiricalMeasure mu;
    std::istringstream in(body);
    std::string line;
    if (!std::getline(in, line) || line != "re,im,weight")
        throw ConfigError("measure_from_csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double re = 0, im = 0, w = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &re, &im, &w) != 3)
            throw ConfigError("measure_from_csv: bad row: " + line);
        mu.atoms.push_back({{re, im}, w});
    }
    return mu;
}

std::string points_to_csv(std::span<const cplx> pts) {
    std::string out = "re,im\n";
    for (const cplx& p : pts) {
        out += fmt17(p.real());
        out += ",";
        out += fmt17(p.imag());
        out += "\n";
    }
    return out;
}

std::string reports_to_json(const std::string& command, std::uint64_t seed,
                            const std::vector<VerificationReport>& reports) {
    JsonWriter w;
    w.begin_object();
    w.field("command", command);
    w.field("seed", static_cast<unsigned long long>(seed));
    w.begin_array("reports");
    for (const auto& r : reports) {
        w.begin_object();
        w.field("name", r.name);
        w.field("passed", r.passed);
        w.field("tolerance", r.tolerance);
        w.field("observed", r.observed);
        w.field("details", r.details);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string capacity_report_to_json(const CapacityReport& rep) {
    JsonWriter w;
    w.begin_object();
    w.field("robin_F", rep.robin_F);
    w.field("lower_bound", rep.lower_bound);
    w.field("cap_estimate", rep.cap_estimate);
    w.field("diam_estimate", rep.diam_estimate);
    w.field("diam_lower", rep.diam_lower);
    w.key("condition_flags").begin_object();
    w.field("orbit_unbounded", rep.orbit_unbounded);
    w.field("orbit_nondense", rep.orbit_nondense);
    w.field("all_deg_ge_2", rep.all_deg_ge_2);
    w.field("main_condition", rep.main_condition);
    w.end_object();
    w.field("cap_exceeds_bound", rep.cap_exceeds_bound);
    w.field("diam_exceeds_bound", rep.diam_exceeds_bound);
    w.field("main_condition_note", rep.main_condition_note);
    w.end_object();
    return w.str() + "\n";
}

std::string generators_to_json(const GeneratorSet& G) {
    JsonWriter w;
    w.begin_object();
    w.begin_array("generators");
    for (const auto& g : G.gens) {
        w.begin_array();
        for (const cplx& c : g.coeffs()) w.complex_value(c);
        w.end_array();
    }
    w.end_array();
    w.field("count", static_cast<long>(G.N));
    w.field("degree_sum", static_cast<long>(G.D));
    w.end_object();
    return w.str() + "\n";
}

} // namespace polysemi
