#include "pantograph/assembly.hpp"
#include <cstdio>
using namespace pantograph;
int main(){
  // simplex smoke: x + y = 1, x - y >= 2 -> infeasible with x,y >= 0? x=1.5,y=-0.5 not allowed; x<=1 so x-y<=1 <2: infeasible
  LinearSystem sys; sys.nvars = 2;
  sys.rows.push_back({{Rat(1),Rat(1)}, 0, Rat(1)});
  sys.rows.push_back({{Rat(1),Rat(-1)}, +1, Rat(2)});
  auto r = solve_feasibility(sys);
  printf("infeasible demo: feasible=%d farkas_ok=%d\n", r.feasible, r.feasible?0:verify_farkas(sys, r.farkas_y));
  LinearSystem sys2; sys2.nvars = 2;
  sys2.rows.push_back({{Rat(1),Rat(1)}, 0, Rat(1)});
  sys2.rows.push_back({{Rat(1),Rat(-1)}, +1, Rat(0)});
  auto r2 = solve_feasibility(sys2);
  printf("feasible demo: %d point_ok=%d x=(%s,%s)\n", r2.feasible, r2.feasible?verify_point(sys2, r2.x):0,
         r2.x.empty()?"":r2.x[0].to_string().c_str(), r2.x.empty()?"":r2.x[1].to_string().c_str());

  // hall
  MatchingInstance mi; mi.nplus = mi.nminus = 3;
  mi.admissible = {{0,0},{0,1},{1,1},{2,2},{1,0}};
  auto h = hall_matching(mi);
  printf("hall: matched=%d\n", h.matched);
  MatchingInstance bad = mi; bad.admissible = {{0,0},{1,0},{2,0}};
  auto hb = hall_matching(bad);
  printf("hall bad: matched=%d violating=%zu (bf=%d)\n", hb.matched, hb.violating_set.size(), hall_matching_bruteforce(bad));

  // integer gluing: single orbit pair, all admissible
  MatchingInstance gi; gi.nplus = gi.nminus = 3;
  gi.sym_plus = {1,2,0}; gi.sym_minus = {1,2,0};
  for (int i=0;i<3;i++) for (int j=0;j<3;j++) gi.admissible.push_back({i,j});
  auto ig = integer_gluing_solution(gi);
  if (ig.feasible)
    printf("gluing: feasible mu+=(%lld,%lld,%lld) verify=%d\n",
           ig.mu_plus[0],ig.mu_plus[1],ig.mu_plus[2], verify_integer_gluing(gi, ig.mu_plus, ig.mu_minus));
  else
    printf("gluing: INFEASIBLE (farkas ok=%d)\n", verify_farkas(ig.system, ig.farkas));

  // theta assembly at n=2 then n=3
  for (int n : {2, 3}) {
    TauContext c(n, Field::Complex);
    double R = 6.0;
    RibbonGraph g = RibbonGraph::theta();
    std::vector<GeometricData> labels = {perfect_geometric_data(c, R, +1), perfect_geometric_data(c, R, -1)};
    AssembledRep rep = assemble_representation(g, labels, c, 0.0, 3, n==2);
    printf("n=%d: nodes=%zu relation=%.3e defect=%.3e lengths=(%.9f,%.9f,%.9f) consistency=(%.2e,%.2e)\n",
      n, rep.nodes.size(), rep.relation_residual, rep.max_gluing_defect,
      rep.boundary_lengths[0], rep.boundary_lengths[1], rep.boundary_lengths[2],
      rep.edge_consistency[0], rep.edge_consistency[1]);
  }
  return 0;
}
