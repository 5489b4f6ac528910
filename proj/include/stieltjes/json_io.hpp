#pragma once

#include "stieltjes/linalg.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/polynomial.hpp"
#include "stieltjes/sequence.hpp"
#include "stieltjes/transforms.hpp"
#include "stieltjes/verify.hpp"

#include "json.hpp"

namespace stieltjes::io {

using Json = nlohmann::json;

// Complex numbers are [re, im]; plain numbers are accepted as real values.
Json to_json(Complex z);
Complex complex_from_json(const Json& j);

// Row-major nested arrays of complex entries.
Json to_json(const CMatrix& A);
CMatrix matrix_from_json(const Json& j);

Json to_json(const MomentSequence& s);
MomentSequence sequence_from_json(const Json& j);

Json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j, const ToleranceConfig& cfg = {});

Json to_json(const StieltjesFunctionRep& rep);

Json to_json(const MatrixPolynomial& p);
MatrixPolynomial polynomial_from_json(const Json& j);

Json to_json(const ParameterFunction& p);
// {"kind": "zero", "q": n} | {"kind": "direct", "measure": ...} |
// {"kind": "low_dim", "measure": ..., "U": optional matrix}
ParameterFunction parameter_from_json(const Json& j, const CMatrix& Q_last, double reference_scale,
                                      const ToleranceConfig& cfg = {});

Json to_json(const ToleranceConfig& cfg);
Json to_json(const StieltjesParametrization& p);
Json to_json(const ClassReport& r);
Json to_json(const Violation& v);
Json to_json(const AdmissibilityReport& r);
Json to_json(const RecoveryConfig& cfg);
Json to_json(const VerificationReport& r);

}  // namespace stieltjes::io
