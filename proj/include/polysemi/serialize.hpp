#ifndef POLYSEMI_SERIALIZE_HPP
#define POLYSEMI_SERIALIZE_HPP

#include "polysemi/backward.hpp"
#include "polysemi/potential.hpp"

#include <string>
#include <vector>

namespace polysemi {

/// Outcome of one numerical check.
struct VerificationReport {
    std::string name;
    bool passed = false;
    double tolerance = 0.0;
    double observed = 0.0;
    std::string details;
};

/// Doubles in text artifacts always carry 17 significant digits so a
/// re-parse reproduces the exact bits.
std::string fmt17(double v);

/// Minimal insertion-ordered JSON writer (fixed key order, fmt17 floats).
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key = "");
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(unsigned long long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& field(const std::string& k, double v) { return key(k).value(v); }
    JsonWriter& field(const std::string& k, long v) { return key(k).value(v); }
    JsonWriter& field(const std::string& k, unsigned long long v) {
        return key(k).value(v);
    }
    JsonWriter& field(const std::string& k, int v) { return key(k).value(v); }
    JsonWriter& field(const std::string& k, bool v) { return key(k).value(v); }
    JsonWriter& field(const std::string& k, const std::string& v) {
        return key(k).value(v);
    }
    JsonWriter& complex_value(cplx z);

    std::string str() const { return out_; }

private:
    void separator();
    std::string out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

/// Atomic text write (temp + rename); throws OutputError.
void write_text_file(const std::string& path, const std::string& body);

/// Measure CSV: header "re,im,weight", one atom per row at 17 significant
/// digits.
std::string measure_to_csv(const EmpiricalMeasure& mu);
EmpiricalMeasure measure_from_csv(const std::string& body);

/// Point CSV: header "re,im".
std::string points_to_csv(std::span<const cplx> pts);

std::string reports_to_json(const std::string& command, std::uint64_t seed,
                            const std::vector<VerificationReport>& reports);

std::string capacity_report_to_json(const CapacityReport& rep);

std::string generators_to_json(const GeneratorSet& G);

} // namespace polysemi

#endif
