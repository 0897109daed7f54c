#ifndef THERMOSHIFT_IO_HPP
#define THERMOSHIFT_IO_HPP

#include <string>
#include <vector>

#include "thermoshift/coe.hpp"
#include "thermoshift/kms.hpp"
#include "thermoshift/zeta.hpp"

namespace thermoshift::io {

// All emitted JSON is canonical: object keys sorted, floating point values
// rounded to 15 significant digits before insertion, two-space indentation.
// Identical inputs therefore produce byte-identical files.

std::string format_double(double v);  // 15 significant digits
double round15(double v);             // value after the 15-digit round trip

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Matrix formats: plain text (first line N, then N rows of N space-separated
// 0/1 digits) and JSON {"n": N, "rows": [[...]]}.  parse_matrix sniffs the
// format from the first non-space byte.
MatrixPtr parse_matrix(const std::string& content);
std::string matrix_to_text(const MatrixPtr& m);
std::string matrix_to_json(const MatrixPtr& m);

// Function literal JSON {"depth": m, "kind": "int"|"real", "values":
// {"word": value, ...}}.  Every admissible word of the depth must appear;
// unknown or inadmissible words are rejected.
LocallyConstantFunction parse_function(const std::string& content, const MatrixPtr& m);
std::string function_to_json(const LocallyConstantFunction& f);

// Witness JSON {"source": matrix, "target": matrix, "tau": {"1": "1", ...},
// "k1": function, "l1": function, "k2": function, "l2": function}.
CoeWitness parse_witness(const std::string& content);
std::string witness_to_json(const CoeWitness& w);

std::string entropy_report_to_json(const PerronData& data);
std::string rpf_to_json(const RpfData& data, int mass_depth);
std::string kms_to_json(const KmsSolution& sol, int mass_depth);
std::string zeta_to_json(const ZetaSeries& z);
std::string verify_report_to_json(const VerifyReport& report, const CoeWitness& w);
std::string scoe_to_json(const ScoeResult& result, int alphabet);
std::string cocycles_to_json(const CoeWitness& w);
std::string limit_constants_to_json(const LimitConstants& c);
std::string hn_report_to_json(const std::vector<std::pair<int, double>>& rows);

// CSV with header n,E_n,entropy_estimate,r_pow_n_times_E_n.
std::string entropy_rows_to_csv(const std::vector<EntropyLimitRow>& rows);
std::string entropy_rows_to_json(const std::vector<EntropyLimitRow>& rows);

}  // namespace thermoshift::io

#endif
