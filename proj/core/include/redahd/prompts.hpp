#pragma once

#include <map>
#include <string>
#include <string_view>

#include "redahd/cop/types.hpp"

// Prompt texts with {NAME} placeholders. Substitution is a single pass over
// {UPPER_CASE} tokens only, so the literal {{Problem B1 involves ...}} lines
// and any braces inside substituted code are left alone.
namespace redahd::prompts {

// Throws ContractError when the template uses a name missing from values.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Root-problem descriptions (no canonical problem names).
std::string_view problem_description(cop::CopKind kind);

// The Python skeleton given to the reduction-synthesis prompt, with the
// kind's signature, Args, Returns and placeholder filled in.
std::string reduction_template(cop::CopKind kind);
std::string_view heuristic_template();

// LR generation and refinement.
//   candidates:    PROBLEM_A, M_INIT
//   reduction:     PROBLEM_A, PROBLEM_B, REDUCTION_TEMPLATE
//   code template: REDUCTION_FUNCTIONS, HEURISTIC_TEMPLATE
//   refinement:    PROBLEM_A, PROBLEM_B, REDUCTION_FUNCTIONS
extern const std::string_view kCandidateProblems;
extern const std::string_view kReductionFunctions;
extern const std::string_view kCodeTemplate;
extern const std::string_view kRefinement;

// Heuristic evolution; problem and template refer to the LR's Problem B.
//   init: PROBLEM_DESCRIPTION, CODE_TEMPLATE
//   e2:   + ALGORITHM_1, CODE_1, ALGORITHM_2, CODE_2
//   m1:   + ALGORITHM, CODE
extern const std::string_view kInitialization;
extern const std::string_view kCrossoverE2;
extern const std::string_view kMutationM1;

// Appended to a prompt when the previous answer was unusable.
std::string with_feedback(std::string_view prompt, std::string_view failure);

}  // namespace redahd::prompts
