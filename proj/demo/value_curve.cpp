// Walks through the reciprocal-graph problem: v(x) = 1/x off the origin,
// v(0) = 0, and the engine's account of why continuity breaks at 0.

#include <iomanip>
#include <iostream>

#include "paramin/paramin.hpp"

using namespace paramin;

int main(int argc, char** argv) {
  std::string path = argc > 1 ? argv[1] : std::string(PARAMIN_CORPUS_DIR) + "/ex4_7.yaml";
  Problem p = load_problem_file(path);

  std::cout << "value curve of " << p.name << "\n";
  for (int i = 0; i <= 8; ++i) {
    TaggedPoint x(make_rational(i, 8));
    MinResult r = value(p, x);
    std::cout << "  x = " << std::setw(5) << x.str() << "   v = " << std::setw(10) << r.value.str()
              << "   argmin = " << r.argmin.str() << "\n";
  }

  TheoremReport rep = evaluate(p, TaggedPoint(0));
  std::cout << "\nat x = 0\n";
  for (const char* id : {"kn_at_x", "v_lsc_at_x", "v_usc_at_x", "argmin_usc_at_x"}) {
    const Verdict& v = rep.checks.at(id);
    std::cout << "  " << std::left << std::setw(18) << id << status_name(v.status);
    if (v.witness) std::cout << "   witness: " << v.witness->kind << " via " << v.witness->scheme;
    std::cout << "\n";
  }
  for (const char* id : {"TH1.3", "TH1.5"}) {
    const StatementResult* s = rep.statement(id);
    std::cout << "  " << std::left << std::setw(18) << id << applicability_name(s->applicability) << "\n";
  }
  std::cout << "\nsoundness violations: " << cross_validate(rep).size() << "\n";
  return 0;
}
