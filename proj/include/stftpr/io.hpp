#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "stftpr/adversary.hpp"
#include "stftpr/recovery.hpp"

namespace stftpr::io {

using nlohmann::json;

// every float leaves the tool with 12 significant digits
std::string fmt(double x);
double round12(double x);
std::string fmt_complex(Complex z);  // a+bi
Complex parse_complex(const std::string& token);

json signal_to_json(const CyclicSignal& s);
CyclicSignal signal_from_json(const json& j);

void write_measurement_csv(std::ostream& os, const SpectrogramMeasurement& X);
SpectrogramMeasurement read_measurement_csv(std::istream& is);
json measurement_to_json(const SpectrogramMeasurement& X);
SpectrogramMeasurement measurement_from_json(const json& j);
void write_complex_csv(std::ostream& os, const ComplexTable& t);
ComplexTable read_complex_csv(std::istream& is);

json mask_to_json(const OmegaMask& m);
json report_to_json(const WindowReport& r);
json partition_to_json(const ConnectivityPartition& p);
json outcome_to_json(const RecoveryOutcome& o);
json decision_to_json(const Decision& d);
json bundle_to_json(const CounterexampleBundle& b);

CyclicSignal read_signal_file(const std::string& path);
SpectrogramMeasurement read_measurement_file(const std::string& path);  // CSV, or JSON by extension
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stftpr::io
