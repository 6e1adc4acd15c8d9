#include "redahd/prompts.hpp"

#include <regex>

#include "redahd/error.hpp"

namespace redahd::prompts {

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  static const std::regex token(R"(\{([A-Z][A-Z0-9_]*)\})");
  std::string out;
  auto begin = tmpl.begin();
  std::match_results<std::string_view::const_iterator> m;
  while (std::regex_search(begin, tmpl.end(), m, token)) {
    out.append(begin, m[0].first);
    // {{NAME}} is literal text, not a placeholder.
    if (m[0].first != tmpl.begin() && *(m[0].first - 1) == '{' && m[0].second != tmpl.end() &&
        *m[0].second == '}') {
      out.append(m[0].first, m[0].second);
      begin = m[0].second;
      continue;
    }
    auto it = values.find(m[1].str());
    if (it == values.end()) throw ContractError("prompt placeholder {" + m[1].str() + "} has no value");
    out += it->second;
    begin = m[0].second;
  }
  out.append(begin, tmpl.end());
  return out;
}

std::string_view problem_description(cop::CopKind kind) {
  switch (kind) {
    case cop::CopKind::Tsp:
      return "Given a set of N nodes with their 2D coordinates, the problem involves finding the "
             "shortest route that visits each node exactly once and returns to the starting node.";
    case cop::CopKind::Cvrp:
      return "Given a set of N customers and a fleet of vehicles with limited capacity, the problem "
             "involves finding a corresponding set of optimal routes to deliver goods to all "
             "customers.";
    case cop::CopKind::Bpp:
      return "Given a set of N items with different sizes and some bins each with fixed capacity, "
             "the problem involves placing each item inside one of the bins in a way that minimizes "
             "the number of bins used without exceeding the bin capacity.";
    case cop::CopKind::Obpp:
      return "Given an item with certain size and a set of M bins each with finite capacity, the "
             "problem involves finding a priority score for each bin. The bin with the highest "
             "priority score will be selected for inserting the item.";
    case cop::CopKind::Kp:
      return "Given a set of N items with weights and values, the problem involves selecting a "
             "subset of items that maximizes the total value without exceeding the knapsack's "
             "weight capacity.";
    case cop::CopKind::Mkp:
      return "Given a set of N items with values and M-dimensional weights, the problem involves "
             "selecting a subset of items to maximize the total value without exceeding the "
             "multi-dimensional maximum weight constraints.";
  }
  return "";
}

namespace {

struct TemplateParts {
  const char* signature;
  const char* args;
  const char* ret;
  const char* placeholder;
};

// BPP and MKP returns describe the index-list solutions the engine validates
// (bins of item indices; one item list per knapsack).
TemplateParts parts(cop::CopKind kind) {
  switch (kind) {
    case cop::CopKind::Tsp:
      return {"coord_matrix, distance_matrix",
              "coord_matrix (np.ndarray): A Nx2 matrix storing the 2D coordinates of the nodes.\n"
              "distance_matrix (np.ndarray): A NxN matrix where the entry at i-th row and j-th "
              "column (or vice versa) stores the Euclidean distance between nodes i and j.",
              "route: A Numpy 1D array of length N storing the unique node IDs to visit in order.",
              "route = ...\n\nreturn route"};
    case cop::CopKind::Cvrp:
      return {"coord_matrix, distance_matrix, demands, capacity",
              "coord_matrix (np.ndarray): A (N+1)-by-2 matrix storing the Euclidean coordinates of "
              "the depot (first row) and the customers. \n"
              "distance_matrix (np.ndarray): A (N+1)-by-(N+1) distance matrix.\n"
              "demands (np.ndarray): An array of length N+1 storing the customer demands, where the "
              "first entry is 0 (placeholder for the depot).\n"
              "capacity (int): The capacity of each vehicle for satisfying the customer demands.",
              "routes (List[List[int]]): A list of routes; each route is represented as a list of "
              "unique customer indices (1 to N) to visit in order, subject to the capacity "
              "constraint.",
              "routes = []\n...\n\nreturn routes"};
    case cop::CopKind::Bpp:
      return {"items, bins",
              "items (np.ndarray): Array of length N storing the item sizes to be considered in "
              "exact order.\n"
              "bins (np.ndarray): Array of capacities for each bin.",
              "packed_bins (List[List[int]]): A list of bins; each bin is represented as a list of "
              "the indices (0 to N-1) of the items packed into it, without exceeding the bin "
              "capacity.",
              "packed_bins = ...\n...\n\nreturn packed_bins"};
    case cop::CopKind::Obpp:
      return {"item_size, bin_caps",
              "item_size (float): Size of the item to be added to one of the bins.\n"
              "bin_caps (np.ndarray): Array of length M storing capacities of each bin.",
              "scores (np.ndarray): Array of priority scores for the bins.",
              "scores = ...\n...\n\nreturn scores"};
    case cop::CopKind::Kp:
      return {"weights, values, capacity",
              "weights (np.ndarray): A 1D float array of length N storing the item weights.\n"
              "values (np.ndarray): A 1D float array of length N storing the associated item "
              "values.\n"
              "capacity (float): The weight capacity of the knapsack.",
              "items: A list storing the indices of selected items subject to the capacity "
              "constraint.",
              "items = []\n...\n\nreturn items"};
    case cop::CopKind::Mkp:
      return {"values, weights, constraints",
              "values (np.ndarray): A 1D float array of length N storing the item values.\n"
              "weights (np.ndarray): A (M x N) float matrix storing the multi-dimensional weights, "
              "where each row is associated with a constraint.\n"
              "constraints (np.ndarray): A 1D float array of length M storing weight constraints.",
              "items (List[List[int]]): A list of M lists; the i-th list stores the indices of the "
              "selected items assigned to the i-th constraint row, subject to that weight "
              "constraint.",
              "items = []\n...\n\nreturn items"};
  }
  throw ContractError("unknown kind");
}

std::string indent(std::string_view block) {
  std::string out;
  std::size_t start = 0;
  while (start <= block.size()) {
    std::size_t end = block.find('\n', start);
    if (end == std::string_view::npos) end = block.size();
    const auto line = block.substr(start, end - start);
    if (!line.empty()) out += "    ";
    out += line;
    if (end == block.size()) break;
    out += '\n';
    start = end + 1;
  }
  return out;
}

constexpr std::string_view kReductionSkeleton = R"(import numpy as np
from typing import Tuple

def convert_input_A_to_B({SIGNATURE}):
    ''' Convert input of Problem A into input of Problem B
    Args:
{ARGS}

    Returns:
    input_B: A tuple storing the corresponding input of Problem B.
    '''

    # Placeholder (replace with your actual implementation)
    input_B = ...

    return input_B


def convert_solution_B_to_A(solution_B):
    ''' Convert solution of Problem B into solution of Problem A
    Args:
    solution_B: The output of Problem B.

    Returns:
{RETURN}
    '''

    # Placeholder (replace with your actual implementation)
{PLACEHOLDER})";

}  // namespace

std::string reduction_template(cop::CopKind kind) {
  const auto p = parts(kind);
  return substitute(kReductionSkeleton, {{"SIGNATURE", p.signature},
                                         {"ARGS", indent(p.args)},
                                         {"RETURN", indent(p.ret)},
                                         {"PLACEHOLDER", indent(p.placeholder)}});
}

std::string_view heuristic_template() {
  static constexpr std::string_view text = R"(from typing import Tuple

def solve_B(<INPUT_B>):
    '''
    Args:
    <ARGS>

    Returns:
    <RETURNS>
    '''

    return <SOLUTION_B>)";
  return text;
}

const std::string_view kCandidateProblems = R"(Problem A: {PROBLEM_A}

I want to transform Problem A into another problem, Problem B, that can be solved efficiently while still providing near-optimal solutions to Problem A. Please help me devise {M_INIT} different Problem B's. Describe each Problem B in a sentence or two (without mentioning Problem A) and enclose it inside a double brace as follows:

{{Problem B1 involves ...}}
{{Problem B2 involves ...}}
...

Do not give additional explanations.)";

const std::string_view kReductionFunctions = R"(Problem A: {PROBLEM_A}

Problem B: {PROBLEM_B}

Implement 2 Python functions for transforming Problem A into Problem B using the following templates:

{REDUCTION_TEMPLATE}

Only provide me the code without any further explanations.)";

const std::string_view kCodeTemplate = R"(I have the following code for transforming a Problem A into a simplified Problem B and vice versa.

Code:
{REDUCTION_FUNCTIONS}

Using this information, fill in the blanks of the following Python function template.

Code template:
{HEURISTIC_TEMPLATE}

First, determine <INPUT_B> from output of `convert_input_A_to_B()'. Then, determine <SOLUTION_B> from `solution_B' variable in `convert_solution_B_to_A()'. Finally, complete the docstring at <ARGS> and <RETURNS> with as detailed type hints as possible. Do not attempt to solve the problem directly and do not give additional explanations.)";

const std::string_view kRefinement = R"(Problem A: {PROBLEM_A}

I want to transform Problem A into another problem, Problem B, that can be solved efficiently while still providing near-optimal solutions to Problem A. I have one option for Problem B as follows:

Problem description: {PROBLEM_B}

Please help me modify the following code for transforming Problem A to Problem B and vice versa while remaining as efficient as possible.

Code:
{REDUCTION_FUNCTIONS}

Do not give additional explanations.)";

const std::string_view kInitialization = R"({PROBLEM_DESCRIPTION}

I need help design a novel efficient algorithm to solve the problem. First, describe your algorithm and main steps in one sentence. The description must be inside a brace. Next, implement it in Python using the following template:

{CODE_TEMPLATE}

Do not give additional explanations.)";

const std::string_view kCrossoverE2 = R"({PROBLEM_DESCRIPTION}

I have 2 existing algorithms with their codes as follows:
No. 1 algorithm and the corresponding code are:
{ALGORITHM_1}
{CODE_1}

No. 2 algorithm and the corresponding code are:
{ALGORITHM_2}
{CODE_2}

Please help me create a new algorithm that has a totally different form from the given ones but can be motivated from them. First, identify the common backbone idea in the provided algorithms. Secondly, based on the backbone idea describe your new algorithm in one sentence. The description must be inside a brace. Thirdly, implement it in Python using the following template:

{CODE_TEMPLATE}

Do not give additional explanations.)";

const std::string_view kMutationM1 = R"({PROBLEM_DESCRIPTION}

I have one algorithm with its code as follows.
Algorithm description: {ALGORITHM}
Code: {CODE}

Please help me create a new algorithm that has a different form but can be a modified version of the provided algorithm. First, describe your new algorithm and main steps in one sentence. The description must be inside a brace. Next, implement it in Python using the following template:

{CODE_TEMPLATE}

Do not give additional explanations.)";

std::string with_feedback(std::string_view prompt, std::string_view failure) {
  std::string out(prompt);
  out += "\n\nYour previous answer could not be used: ";
  out += failure;
  out += "\nPlease answer again, following the requested format exactly.";
  return out;
}

}  // namespace redahd::prompts
