#pragma once

#include <string>

#include "json.hpp"
#include "uncert/catalog.hpp"
#include "uncert/certify.hpp"
#include "uncert/oracle.hpp"

namespace uncert {

/// Library version, set by the build.
const char* version();

nlohmann::json to_json(const Moments3& m);
nlohmann::json to_json(const OracleResult& r);
nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const CertifyConfig& cfg);
nlohmann::json to_json(const ComplexSqueeze& cs);

/// Full report document. Non-finite numbers are written as null. `name` and
/// `expected` are filled for catalog runs.
nlohmann::json report_document(const BoundReport& report, const Functional& f,
                               const CertifyConfig& cfg, const std::string& name = {},
                               const Expectation* expected = nullptr);

}  // namespace uncert
