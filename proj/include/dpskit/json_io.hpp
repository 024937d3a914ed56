#pragma once

#include <string>

#include "dpskit/applications.hpp"
#include "dpskit/hermitian.hpp"
#include "dpskit/optimality.hpp"

namespace dpskit {

/// {"dims": [..], "re": [[..]], "im": [[..]]}; "im" may be omitted.
/// Throws parse_error on malformed text or shapes.
HermitianOperator operator_from_json(const std::string& text);
std::string operator_to_json(const HermitianOperator& x);

/// {"ensemble": [{"p": .., "encoded": <operator>, "source": {"re": [..], "im": [..]}}]}
EstimationProblem problem_from_json(const std::string& text);
std::string problem_to_json(const EstimationProblem& p);

/// {"verdict": .., "N": n, "ranks": [full, left, right], "witness": <operator> | null}
std::string certify_to_json(const CertifyResult& r);

}  // namespace dpskit
