#include "pantograph/cartan.hpp"
#include "pantograph/tau.hpp"
#include <cstdio>
using namespace pantograph;
int main(){
  TauContext c3(3, Field::Complex);
  GroupElement g = c3.exp_h(1.0);
  auto a = jordan_projection(g);
  auto b = jordan_projection_power_oracle(g, 64);
  printf("diag case: jordan (%.4f %.4f %.4f) oracle (%.4f %.4f %.4f)\n",
    a.v[0],a.v[1],a.v[2], b.v[0],b.v[1],b.v[2]);
  Mat x = c3.tau(mat2(1.1, 0.3, 0.2, (1+0.3*0.2)/1.1)).mat();
  GroupElement h(x * g.mat() * x.inverse(), Field::Complex);
  auto a2 = jordan_projection(h);
  auto b2 = jordan_projection_power_oracle(h, 64);
  printf("conj case: jordan (%.4f %.4f %.4f) oracle (%.4f %.4f %.4f)\n",
    a2.v[0],a2.v[1],a2.v[2], b2.v[0],b2.v[1],b2.v[2]);
  return 0;
}
